#include "csb/cs_linalg.hpp"

#include <cmath>
#include <cstddef>

namespace csb {

namespace {

void require_dim(int d, int min_d = 2) {
    if (d < min_d)
        throw dimension_error("compound-symmetric dimension must be >= " +
                              std::to_string(min_d) + ", got " + std::to_string(d));
}

} // namespace

bool cone_contains(int d, double a1, double a2) {
    require_dim(d);
    return a1 > 0.0 && -a1 / (d - 1) < a2 && a2 < a1;
}

double cs_determinant(const CsPair& m) {
    require_dim(m.d, 1);
    if (m.d == 1) return m.a1;
    return std::pow(m.a1 - m.a2, m.d - 1) * (m.a1 + (m.d - 1) * m.a2);
}

CsPair cs_inverse(const CsPair& m) {
    require_dim(m.d, 1);
    if (m.d == 1) {
        if (m.a1 == 0.0) throw singular_error("singular 1x1 matrix");
        return {1, 1.0 / m.a1, 0.0};
    }
    const double tail = m.a1 - m.a2;
    const double head = m.a1 + (m.d - 1) * m.a2;
    if (tail == 0.0 || head == 0.0)
        throw singular_error("singular compound-symmetric matrix (a1=" +
                             std::to_string(m.a1) + ", a2=" + std::to_string(m.a2) + ")");
    const double denom = tail * head;
    return {m.d, (m.a1 + (m.d - 2) * m.a2) / denom, -m.a2 / denom};
}

double cs_trace_product(const CsPair& a, const SymmetricSummary& b) {
    if (a.d != b.d)
        throw dimension_error("cs_trace_product: dimension mismatch (" +
                              std::to_string(a.d) + " vs " + std::to_string(b.d) + ")");
    return (a.a1 - a.a2) * b.trace + a.a2 * b.grand_sum;
}

SymmetricSummary summarize_symmetric(std::span<const double> b, int d) {
    require_dim(d);
    if (b.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d))
        throw dimension_error("summarize_symmetric: expected a square d*d buffer");
    double tr = 0.0, gs = 0.0;
    for (int i = 0; i < d; ++i) {
        tr += b[static_cast<std::size_t>(i) * d + i];
        for (int j = 0; j < d; ++j) gs += b[static_cast<std::size_t>(i) * d + j];
    }
    return {d, tr, gs};
}

CsPair nearest_cs(std::span<const double> b, int d) {
    const SymmetricSummary s = summarize_symmetric(b, d);
    return {d, s.trace / d, (s.grand_sum - s.trace) / (static_cast<double>(d) * (d - 1))};
}

CsPair cone_transform(double y1, double y2, int d) {
    require_dim(d);
    if (!(y1 > 0.0) || !(y2 > 0.0))
        throw domain_error("cone_transform: inputs must be strictly positive");
    return {d, y1 + y2, y1 - y2 / (d - 1)};
}

std::pair<double, double> cone_transform_inverse(const CsPair& m) {
    if (!cone_contains(m))
        throw domain_error("cone_transform_inverse: input not in the open cone");
    const double y1 = (m.a1 + (m.d - 1) * m.a2) / m.d;
    const double y2 = (m.d - 1.0) / m.d * (m.a1 - m.a2);
    return {y1, y2};
}

double cs_quadratic_form(const CsPair& m, std::span<const double> x) {
    require_dim(m.d, 1);
    if (x.size() != static_cast<std::size_t>(m.d))
        throw dimension_error("cs_quadratic_form: vector length " + std::to_string(x.size()) +
                              " does not match dimension " + std::to_string(m.d));
    double ss = 0.0, sum = 0.0;
    for (double v : x) {
        ss += v * v;
        sum += v;
    }
    return (m.a1 - m.a2) * ss + m.a2 * sum * sum;
}

} // namespace csb
