#pragma once

#include <span>
#include <utility>

#include "csb/errors.hpp"

// Exact O(1) algebra on compound-symmetric matrices (a1-a2)*I_d + a2*11^T,
// represented by their two distinct entries. Dense forms never appear here;
// everything reduces to the two eigenvalues a1-a2 (multiplicity d-1) and
// a1+(d-1)*a2 (eigenvector 1/sqrt(d)).

namespace csb {

// Entry pair (a1, a2) of the d x d matrix (a1-a2)*I + a2*11^T.
// d == 1 is allowed as a degenerate carrier for the scalar matrix [a1]
// (needed by one-dimensional latent blocks); cone predicates require d >= 2.
struct CsPair {
    int d = 2;
    double a1 = 1.0;
    double a2 = 0.0;
};

// Scalar summary (tr B, 1^T B 1) of a dense symmetric matrix; all the
// compound-symmetric algebra ever needs from B.
struct SymmetricSummary {
    int d = 2;
    double trace = 0.0;
    double grand_sum = 0.0;
};

// Strict membership in the open cone C_d = {a1 > 0, -a1/(d-1) < a2 < a1}.
bool cone_contains(int d, double a1, double a2);
inline bool cone_contains(const CsPair& m) { return cone_contains(m.d, m.a1, m.a2); }

// det = (a1-a2)^(d-1) * (a1+(d-1)*a2)
double cs_determinant(const CsPair& m);

// Sherman-Morrison inverse; the off-diagonal entry flips sign.
CsPair cs_inverse(const CsPair& m);

// tr(A*B) = (a1-a2)*tr(B) + a2*(1^T B 1); depends on B only through its summary.
double cs_trace_product(const CsPair& a, const SymmetricSummary& b);

// Frobenius projection of a dense symmetric matrix (row-major, d*d entries)
// onto compound-symmetric form: average diagonal and average off-diagonal.
CsPair nearest_cs(std::span<const double> b, int d);
SymmetricSummary summarize_symmetric(std::span<const double> b, int d);

// The linear bijection [[1,1],[1,-1/(d-1)]] from the open first quadrant
// onto C_d, and its inverse.
CsPair cone_transform(double y1, double y2, int d);
std::pair<double, double> cone_transform_inverse(const CsPair& m);

// x^T M x = (a1-a2)*|x|^2 + a2*(1^T x)^2
double cs_quadratic_form(const CsPair& m, std::span<const double> x);

} // namespace csb
