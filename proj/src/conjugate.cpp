#include "csb/conjugate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "csb/special.hpp"

namespace csb {

namespace {

constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Neumaier-compensated accumulator for the data sums.
struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

void check_positive(double v, const char* name) {
    if (!(v > 0.0)) throw domain_error(std::string(name) + " must be strictly positive");
}

void check_rate_cone(int d, double beta1, double beta2) {
    if (!(beta1 > 0.0) || !(beta2 > -beta1) || !(beta2 < (d - 1) * beta1))
        throw domain_error("(beta1, beta2) outside the rate cone -beta1 < beta2 < (d-1) beta1");
}

double log_zd(int d, double m, double b1, double b2) {
    return (m + 2.0) / 2.0 * std::log(b1 + b2) +
           (m * (d - 1) + 2.0) / 2.0 * std::log((d - 1) * b1 - b2) -
           (m * d + 2.0) / 2.0 * std::log(static_cast<double>(d)) -
           log_gamma((m * (d - 1) + 2.0) / 2.0) - log_gamma((m + 2.0) / 2.0);
}

} // namespace

void validate(const PrecisionPrior& p) {
    if (p.d < 2) throw dimension_error("PrecisionPrior: d must be >= 2");
    check_positive(p.alpha1, "alpha1");
    check_positive(p.alpha2, "alpha2");
    check_positive(p.lambda1, "lambda1");
    check_positive(p.lambda2, "lambda2");
}

void validate(const VariancePrior& p) {
    if (p.d < 2) throw dimension_error("VariancePrior: d must be >= 2");
    check_positive(p.alpha1, "alpha1");
    check_positive(p.alpha2, "alpha2");
    check_positive(p.lambda1, "lambda1");
    check_positive(p.lambda2, "lambda2");
}

void validate(const MeanPrecisionPrior& p) {
    if (p.d < 2) throw dimension_error("MeanPrecisionPrior: d must be >= 2");
    check_positive(p.m_h, "m_h");
    check_positive(p.m_mu, "m_mu");
    check_rate_cone(p.d, p.beta1, p.beta2);
    if (p.nu.size() != static_cast<std::size_t>(p.d))
        throw dimension_error("MeanPrecisionPrior: nu length must equal d");
}

void validate(const MeanVariancePrior& p) {
    if (p.d < 2) throw dimension_error("MeanVariancePrior: d must be >= 2");
    check_positive(p.m_sigma, "m_sigma");
    check_positive(p.m_mu, "m_mu");
    check_positive(p.lambda1, "lambda1");
    check_positive(p.lambda2, "lambda2");
    if (p.nu.size() != static_cast<std::size_t>(p.d))
        throw dimension_error("MeanVariancePrior: nu length must equal d");
}

// --- sufficient statistics ----------------------------------------------

SuffStatsKnownMean suff_stats_known_mean(const Matrix& data, std::span<const double> mu) {
    if (data.rows > 0 && data.cols != mu.size())
        throw dimension_error("suff_stats_known_mean: column count does not match mu");
    const int d = static_cast<int>(mu.size());
    if (d < 2) throw dimension_error("suff_stats_known_mean: d must be >= 2");
    Kahan tr, gs;
    for (std::size_t i = 0; i < data.rows; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < data.cols; ++j) {
            const double c = data(i, j) - mu[j];
            tr.add(c * c);
            row_sum += c;
        }
        gs.add(row_sum * row_sum);
    }
    return {d, static_cast<long>(data.rows), tr.value(), gs.value()};
}

SuffStatsUnknownMean suff_stats_unknown_mean(const Matrix& data) {
    if (data.cols < 2) throw dimension_error("suff_stats_unknown_mean: d must be >= 2");
    const int d = static_cast<int>(data.cols);
    std::vector<double> xbar(data.cols, 0.0);
    if (data.rows > 0) {
        std::vector<Kahan> col(data.cols);
        for (std::size_t i = 0; i < data.rows; ++i)
            for (std::size_t j = 0; j < data.cols; ++j) col[j].add(data(i, j));
        for (std::size_t j = 0; j < data.cols; ++j)
            xbar[j] = col[j].value() / static_cast<double>(data.rows);
    }
    Kahan tr, gs;
    for (std::size_t i = 0; i < data.rows; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < data.cols; ++j) {
            const double c = data(i, j) - xbar[j];
            tr.add(c * c);
            row_sum += c;
        }
        gs.add(row_sum * row_sum);
    }
    return {d, static_cast<long>(data.rows), std::move(xbar), tr.value(), gs.value()};
}

SuffStatsKnownMean merge(const SuffStatsKnownMean& a, const SuffStatsKnownMean& b) {
    if (a.d != b.d) throw dimension_error("merge: dimension mismatch");
    return {a.d, a.n + b.n, a.tr_s + b.tr_s, a.grand_s + b.grand_s};
}

// --- (m, beta) conversions ----------------------------------------------

PrecisionPrior precision_prior_from_mbeta(const MBetaForm& f) {
    if (f.d < 2) throw dimension_error("MBetaForm: d must be >= 2");
    if (!(f.m > -2.0)) throw domain_error("MBetaForm: m must exceed -2");
    check_rate_cone(f.d, f.beta1, f.beta2);
    PrecisionPrior p{f.d, (f.m + 2.0) / 2.0, (f.m * (f.d - 1) + 2.0) / 2.0,
                     f.beta1 + f.beta2, f.beta1 - f.beta2 / (f.d - 1)};
    validate(p);
    return p;
}

MBetaForm mbeta_from_precision_prior(const PrecisionPrior& p) {
    validate(p);
    const double m = 2.0 * p.alpha1 - 2.0;
    const double want_alpha2 = (m * (p.d - 1) + 2.0) / 2.0;
    if (std::abs(p.alpha2 - want_alpha2) > 1e-9 * (1.0 + std::abs(want_alpha2)))
        throw domain_error("precision prior shapes are not m-compatible");
    const double beta2 = (p.d - 1.0) * (p.lambda1 - p.lambda2) / p.d;
    const double beta1 = (p.lambda1 + (p.d - 1) * p.lambda2) / p.d;
    return {p.d, m, beta1, beta2};
}

// --- posterior updates ----------------------------------------------------

PrecisionPrior update_precision_prior(const PrecisionPrior& prior,
                                      const SuffStatsKnownMean& s) {
    validate(prior);
    if (s.d != prior.d) throw dimension_error("update_precision_prior: dimension mismatch");
    const double n = static_cast<double>(s.n);
    const int d = prior.d;
    return {d, prior.alpha1 + n / 2.0, prior.alpha2 + n * (d - 1) / 2.0,
            prior.lambda1 + s.grand_s, prior.lambda2 + (d * s.tr_s - s.grand_s) / (d - 1)};
}

VariancePrior update_variance_prior(const VariancePrior& prior, const SuffStatsKnownMean& s) {
    validate(prior);
    if (s.d != prior.d) throw dimension_error("update_variance_prior: dimension mismatch");
    const double n = static_cast<double>(s.n);
    const int d = prior.d;
    const double dd = static_cast<double>(d);
    return {d, prior.alpha1 + n / 2.0, prior.alpha2 + n * (d - 1) / 2.0,
            prior.lambda1 + s.grand_s / (2.0 * dd * dd),
            prior.lambda2 + (dd - 1.0) / (2.0 * dd * dd) * (dd * s.tr_s - s.grand_s)};
}

MeanPrecisionPrior update_mean_precision_prior(const MeanPrecisionPrior& prior,
                                               const SuffStatsUnknownMean& s) {
    validate(prior);
    if (s.d != prior.d) throw dimension_error("update_mean_precision_prior: dimension mismatch");
    if (s.n == 0) return prior;
    const double n = static_cast<double>(s.n);
    const int d = prior.d;
    const double w = prior.m_mu * n / (prior.m_mu + n);
    double dev_sq = 0.0, dev_sum = 0.0;
    for (int j = 0; j < d; ++j) {
        const double dv = s.xbar[j] - prior.nu[j];
        dev_sq += dv * dv;
        dev_sum += dv;
    }
    MeanPrecisionPrior post = prior;
    post.m_h = prior.m_h + n;
    post.m_mu = prior.m_mu + n;
    post.beta1 = prior.beta1 + s.tr_s + w * dev_sq;
    post.beta2 = prior.beta2 + (s.grand_s - s.tr_s) + w * (dev_sum * dev_sum - dev_sq);
    for (int j = 0; j < d; ++j)
        post.nu[j] = (prior.m_mu * prior.nu[j] + n * s.xbar[j]) / (prior.m_mu + n);
    return post;
}

MeanVariancePrior update_mean_variance_prior(const MeanVariancePrior& prior,
                                             const SuffStatsUnknownMean& s) {
    validate(prior);
    if (s.d != prior.d) throw dimension_error("update_mean_variance_prior: dimension mismatch");
    if (s.n == 0) return prior;
    const double n = static_cast<double>(s.n);
    const int d = prior.d;
    const double dd = static_cast<double>(d);
    const double w = prior.m_mu * n / (prior.m_mu + n);
    double dev_sq = 0.0, dev_sum = 0.0;
    for (int j = 0; j < d; ++j) {
        const double dv = s.xbar[j] - prior.nu[j];
        dev_sq += dv * dv;
        dev_sum += dv;
    }
    MeanVariancePrior post = prior;
    post.m_sigma = prior.m_sigma + n;
    post.m_mu = prior.m_mu + n;
    post.lambda1 =
        prior.lambda1 + s.grand_s / (2.0 * dd * dd) + w * dev_sum * dev_sum / (2.0 * dd * dd);
    post.lambda2 = prior.lambda2 + (dd - 1.0) * (dd * s.tr_s - s.grand_s) / (2.0 * dd * dd) +
                   (dd - 1.0) * w * (dd * dev_sq - dev_sum * dev_sum) / (2.0 * dd * dd);
    for (int j = 0; j < d; ++j)
        post.nu[j] = (prior.m_mu * prior.nu[j] + n * s.xbar[j]) / (prior.m_mu + n);
    return post;
}

// --- samplers --------------------------------------------------------------

std::vector<CsPair> sample_eta(const PrecisionPrior& prior, RngStream& rng, long count) {
    validate(prior);
    std::vector<CsPair> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        const double y1 = sample_gamma(rng, prior.alpha1, prior.lambda1);
        const double y2 = sample_gamma(rng, prior.alpha2, prior.lambda2);
        out.push_back(cone_transform(y1, y2, prior.d));
    }
    return out;
}

std::vector<CsPair> sample_sigma(const VariancePrior& prior, RngStream& rng, long count) {
    validate(prior);
    std::vector<CsPair> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        const double z1 = sample_inverse_gamma(rng, prior.alpha1, prior.lambda1);
        const double z2 = sample_inverse_gamma(rng, prior.alpha2, prior.lambda2);
        out.push_back(cone_transform(z1, z2, prior.d));
    }
    return out;
}

std::vector<double> sample_mean_given_cov(const MeanVariancePrior& prior, const CsPair& sigma,
                                          RngStream& rng) {
    validate(prior);
    if (!cone_contains(sigma)) throw domain_error("sample_mean_given_cov: sigma not conic");
    const CsPair cov{sigma.d, sigma.a1 / prior.m_mu, sigma.a2 / prior.m_mu};
    return sample_cs_mvn(rng, prior.nu, cov);
}

std::vector<double> sample_mean_given_cov(const MeanPrecisionPrior& prior, const CsPair& eta,
                                          RngStream& rng) {
    validate(prior);
    if (!cone_contains(eta)) throw domain_error("sample_mean_given_cov: eta not conic");
    const CsPair inv = cs_inverse(eta); // Sigma = (1/2) H^-1
    const CsPair cov{eta.d, inv.a1 / (2.0 * prior.m_mu), inv.a2 / (2.0 * prior.m_mu)};
    return sample_cs_mvn(rng, prior.nu, cov);
}

// --- log densities ---------------------------------------------------------

double log_norm_constant_eta(const PrecisionPrior& p) {
    return p.alpha2 * std::log(p.d - 1.0) -
           (p.alpha1 + p.alpha2 - 1.0) * std::log(static_cast<double>(p.d)) +
           p.alpha1 * std::log(p.lambda1) + p.alpha2 * std::log(p.lambda2) -
           log_gamma(p.alpha1) - log_gamma(p.alpha2);
}

double log_density_eta(const PrecisionPrior& prior, const CsPair& eta) {
    validate(prior);
    if (eta.d != prior.d) throw dimension_error("log_density_eta: dimension mismatch");
    if (!cone_contains(eta)) return -std::numeric_limits<double>::infinity();
    const int d = prior.d;
    return log_norm_constant_eta(prior) + (prior.alpha2 - 1.0) * std::log(eta.a1 - eta.a2) +
           (prior.alpha1 - 1.0) * std::log(eta.a1 + (d - 1) * eta.a2) -
           (prior.lambda1 + (d - 1) * prior.lambda2) / d * eta.a1 -
           (d - 1.0) / d * (prior.lambda1 - prior.lambda2) * eta.a2;
}

double log_density_sigma(const VariancePrior& prior, const CsPair& sigma) {
    validate(prior);
    if (sigma.d != prior.d) throw dimension_error("log_density_sigma: dimension mismatch");
    if (!cone_contains(sigma)) return -std::numeric_limits<double>::infinity();
    const int d = prior.d;
    const double head = sigma.a1 + (d - 1) * sigma.a2;
    const double tail = sigma.a1 - sigma.a2;
    return (prior.alpha1 + prior.alpha2 + 1.0) * std::log(static_cast<double>(d)) -
           prior.alpha2 * std::log(d - 1.0) + prior.alpha1 * std::log(prior.lambda1) +
           prior.alpha2 * std::log(prior.lambda2) - log_gamma(prior.alpha1) -
           log_gamma(prior.alpha2) - (prior.alpha2 + 1.0) * std::log(tail) -
           (prior.alpha1 + 1.0) * std::log(head) - d * prior.lambda1 / head -
           d / (d - 1.0) * prior.lambda2 / tail;
}

double log_marginal_eta1(const PrecisionPrior& prior, double eta1) {
    validate(prior);
    return convolved_gamma_logpdf(
        eta1, {prior.alpha2, prior.lambda2, prior.alpha1, prior.lambda2 - prior.lambda1});
}

double log_conditional_eta2(const PrecisionPrior& prior, double eta2, double eta1) {
    validate(prior);
    if (!(eta1 > 0.0)) throw domain_error("log_conditional_eta2: eta1 must be positive");
    const int d = prior.d;
    const KummerBetaParams p{prior.alpha1, prior.alpha2, eta1 * (prior.lambda1 - prior.lambda2),
                             d * eta1 / (d - 1.0), -eta1 / (d - 1.0)};
    return kummer_beta_shifted_logpdf(eta2, p);
}

double log_density_mean_precision(const MeanPrecisionPrior& prior, std::span<const double> mu,
                                  const CsPair& eta) {
    validate(prior);
    if (mu.size() != static_cast<std::size_t>(prior.d))
        throw dimension_error("log_density_mean_precision: mu length mismatch");
    const PrecisionPrior marginal =
        precision_prior_from_mbeta({prior.d, prior.m_h, prior.beta1, prior.beta2});
    const double lp = log_density_eta(marginal, eta);
    if (!std::isfinite(lp)) return lp;
    std::vector<double> dev(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) dev[j] = mu[j] - prior.nu[j];
    return lp - prior.d / 2.0 * kLog2Pi + prior.d / 2.0 * std::log(2.0 * prior.m_mu) +
           0.5 * std::log(cs_determinant(eta)) - prior.m_mu * cs_quadratic_form(eta, dev);
}

double log_density_mean_variance(const MeanVariancePrior& prior, std::span<const double> mu,
                                 const CsPair& sigma) {
    validate(prior);
    if (mu.size() != static_cast<std::size_t>(prior.d))
        throw dimension_error("log_density_mean_variance: mu length mismatch");
    const VariancePrior marginal{prior.d, (prior.m_sigma + 2.0) / 2.0,
                                 (prior.m_sigma * (prior.d - 1) + 2.0) / 2.0, prior.lambda1,
                                 prior.lambda2};
    const double lp = log_density_sigma(marginal, sigma);
    if (!std::isfinite(lp)) return lp;
    std::vector<double> dev(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) dev[j] = mu[j] - prior.nu[j];
    return lp - prior.d / 2.0 * kLog2Pi + prior.d / 2.0 * std::log(prior.m_mu) -
           0.5 * std::log(cs_determinant(sigma)) -
           prior.m_mu / 2.0 * cs_quadratic_form(cs_inverse(sigma), dev);
}

// --- likelihoods and evidence ----------------------------------------------

double log_likelihood_eta(const SuffStatsKnownMean& s, const CsPair& eta) {
    if (s.d != eta.d) throw dimension_error("log_likelihood_eta: dimension mismatch");
    if (!cone_contains(eta)) return -std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(s.n);
    return -n * s.d / 2.0 * kLogPi + n / 2.0 * std::log(cs_determinant(eta)) -
           cs_trace_product(eta, {s.d, s.tr_s, s.grand_s});
}

double log_likelihood_sigma(const SuffStatsKnownMean& s, const CsPair& sigma) {
    if (s.d != sigma.d) throw dimension_error("log_likelihood_sigma: dimension mismatch");
    if (!cone_contains(sigma)) return -std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(s.n);
    return -n * s.d / 2.0 * kLog2Pi - n / 2.0 * std::log(cs_determinant(sigma)) -
           0.5 * cs_trace_product(cs_inverse(sigma), {s.d, s.tr_s, s.grand_s});
}

double log_evidence_known_mean(const PrecisionPrior& prior, const SuffStatsKnownMean& s) {
    validate(prior);
    if (s.d != prior.d) throw dimension_error("log_evidence_known_mean: dimension mismatch");
    const PrecisionPrior post = update_precision_prior(prior, s);
    return -static_cast<double>(s.n) * s.d / 2.0 * kLogPi + log_norm_constant_eta(prior) -
           log_norm_constant_eta(post);
}

// --- distribution-identity diagnostic ---------------------------------------

DistributionCheckReport theorem_distribution_check(const MBetaForm& f, int t_points) {
    const PrecisionPrior p = precision_prior_from_mbeta(f);
    if (t_points < 1) throw domain_error("theorem_distribution_check: need at least one point");
    const double t_lo = f.beta2 - (f.d - 1) * f.beta1;
    const double t_hi = f.beta2 + f.beta1;
    DistributionCheckReport report{0.0, 0, t_lo, t_hi};
    for (int i = 0; i <= t_points; ++i) {
        // interior grid plus the trivial point t = 0
        const double t =
            (i == t_points) ? 0.0 : t_lo + (t_hi - t_lo) * (i + 1.0) / (t_points + 1.0);
        const double lhs = log_zd(f.d, f.m, f.beta1, f.beta2) -
                           log_zd(f.d, f.m, f.beta1, f.beta2 - t);
        const double rhs =
            p.alpha1 * (std::log(p.lambda1) - std::log(p.lambda1 - t)) +
            p.alpha2 * (std::log(p.lambda2) - std::log(p.lambda2 + t / (f.d - 1)));
        report.max_abs_log_discrepancy =
            std::max(report.max_abs_log_discrepancy, std::abs(lhs - rhs));
        ++report.points;
    }
    return report;
}

} // namespace csb
