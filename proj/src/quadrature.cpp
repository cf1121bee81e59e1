#include "csb/quadrature.hpp"

#include <cmath>

namespace csb {

namespace {

// 15-point Kronrod nodes on [-1, 1] (symmetric; negatives implied) with the
// embedded 7-point Gauss rule on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    double integral;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double result_gauss = fc * kWg[3];
    double result_kronrod = fc * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double fsum = f(c - dx) + f(c + dx);
        result_kronrod += kWgk[i] * fsum;
        if (i % 2 == 1) result_gauss += kWg[i / 2] * fsum;
    }
    return {result_kronrod * h, std::abs((result_kronrod - result_gauss) * h)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double rel_tol,
             double abs_tol, int depth, const PanelResult& whole) {
    if (depth <= 0)
        throw numeric_error("integrate_gk: maximum subdivision depth reached");
    const double tol = std::max(abs_tol, rel_tol * std::abs(whole.integral));
    if (whole.error <= tol || whole.error <= 1e-300) return whole.integral;
    const double c = 0.5 * (a + b);
    const PanelResult left = gk15(f, a, c);
    const PanelResult right = gk15(f, c, b);
    return adapt(f, a, c, rel_tol, 0.5 * abs_tol, depth - 1, left) +
           adapt(f, c, b, rel_tol, 0.5 * abs_tol, depth - 1, right);
}

} // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    return adapt(f, a, b, rel_tol, abs_tol, max_depth, gk15(f, a, b));
}

} // namespace csb
