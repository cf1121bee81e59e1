#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "csb/special.hpp"
#include "test_support.hpp"

using namespace csb;

TEST_CASE("log_gamma known values") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
    CHECK(log_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-13));
    CHECK_THROWS_AS(log_gamma(0.0), domain_error);
    CHECK_THROWS_AS(log_gamma(-1.5), domain_error);

    // relative accuracy against the C library implementation
    for (double x = 0.02; x < 60.0; x += 0.173) {
        CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12));
    }
    CHECK(log_gamma(1234.5) == doctest::Approx(std::lgamma(1234.5)).epsilon(1e-13));
}

TEST_CASE("kummer_1f1 basics") {
    CHECK(kummer_1f1(1.3, 2.7, 0.0) == doctest::Approx(1.0));
    // 1F1(1,2,x) = (e^x - 1)/x, against brute-force series
    CHECK(kummer_1f1(1.0, 2.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    double series = 0.0, term = 1.0;
    for (int n = 0; n < 200; ++n) {
        series += term;
        term *= (1.0 + n) / (2.0 + n) / (n + 1.0);
    }
    CHECK(kummer_1f1(1.0, 2.0, 1.0) == doctest::Approx(series).epsilon(1e-12));
    CHECK_THROWS_AS(kummer_1f1(-1.0, 2.0, 1.0), domain_error);
}

TEST_CASE("negative argument with b <= a (signed transformed series)") {
    // 1F1(2,1,-5) = e^-5 (1 - 5): the transformed series terminates
    CHECK(kummer_1f1(2.0, 1.0, -5.0) ==
          doctest::Approx(-4.0 * std::exp(-5.0)).epsilon(1e-12));
    // non-terminating case against direct alternating summation at moderate x
    const auto direct = [](double a, double b, double x) {
        double sum = 1.0, term = 1.0;
        for (int n = 0; n < 400; ++n) {
            term *= (a + n) / (b + n) * x / (n + 1);
            sum += term;
        }
        return sum;
    };
    CHECK(kummer_1f1(2.0, 1.5, -2.0) ==
          doctest::Approx(direct(2.0, 1.5, -2.0)).epsilon(1e-11));
    CHECK(kummer_1f1(3.7, 1.2, -4.0) ==
          doctest::Approx(direct(3.7, 1.2, -4.0)).epsilon(1e-10));
}

TEST_CASE("kummer transformation identity") {
    CHECK(kummer_1f1(2.0, 5.0, -3.0) ==
          doctest::Approx(std::exp(-3.0) * kummer_1f1(3.0, 5.0, 3.0)).epsilon(1e-10));
    for (const double a : {0.5, 1.0, 2.0, 5.0})
        for (const double b : {0.5, 1.0, 2.0, 5.0})
            for (double lam = -20.0; lam <= 20.0; lam += 2.5) {
                const double lhs = kummer_1f1_log(a, a + b, lam);
                const double rhs = lam + kummer_1f1_log(b, a + b, -lam);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
            }
}

TEST_CASE("kummer beta normalizer") {
    CHECK(kummer_beta_log_norm(2.0, 3.0, 0.0) ==
          doctest::Approx(std::log(1.0 / 12.0)).epsilon(1e-13));
    // direct quadrature of x^(a-1) (1-x)^(b-1) e^(-lambda x) on (0,1)
    const auto norm_quad = [](double a, double b, double lam) {
        return oracle::integrate(
            [=](double x) {
                if (x <= 0.0 || x >= 1.0) return 0.0;
                return std::pow(x, a - 1.0) * std::pow(1.0 - x, b - 1.0) *
                       std::exp(-lam * x);
            },
            1e-12, 1.0 - 1e-12, 1e-13);
    };
    CHECK(kummer_beta_log_norm(1.0, 1.0, 1.0) ==
          doctest::Approx(std::log(1.0 - std::exp(-1.0))).epsilon(1e-11));
    CHECK(kummer_beta_log_norm(1.5, 2.5, -2.0) ==
          doctest::Approx(std::log(norm_quad(1.5, 2.5, -2.0))).epsilon(1e-9));
}

TEST_CASE("shifted kummer beta density") {
    // uniform special case
    const KummerBetaParams uni{1.0, 1.0, 0.0, 1.0, 0.0};
    CHECK(kummer_beta_shifted_logpdf(0.37, uni) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(kummer_beta_shifted_logpdf(-0.1, uni) == -INFINITY);
    CHECK(kummer_beta_shifted_logpdf(1.1, uni) == -INFINITY);

    const KummerBetaParams p{2.5, 4.0, 1.3, 2.0, -0.5};
    const double mass = oracle::integrate(
        [&](double y) { return std::exp(kummer_beta_shifted_logpdf(y, p)); },
        p.shift + 1e-13, p.shift + p.scale - 1e-13, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

    // mode location matches a dense grid search of the unnormalized form
    double best_y = 0.0, best = -1e300;
    for (int i = 1; i < 20000; ++i) {
        const double y = p.shift + p.scale * i / 20000.0;
        const double v = (p.alpha - 1.0) * std::log(y - p.shift) +
                         (p.beta - 1.0) * std::log(p.scale + p.shift - y) -
                         p.lambda / p.scale * y;
        if (v > best) {
            best = v;
            best_y = y;
        }
    }
    double best_pdf_y = 0.0;
    best = -1e300;
    for (int i = 1; i < 20000; ++i) {
        const double y = p.shift + p.scale * i / 20000.0;
        const double v = kummer_beta_shifted_logpdf(y, p);
        if (v > best) {
            best = v;
            best_pdf_y = y;
        }
    }
    CHECK(best_pdf_y == doctest::Approx(best_y).epsilon(1e-9));
}

TEST_CASE("convolved gamma density") {
    // delta = 0 reduces to Gamma(alpha+lambda, beta)
    const ConvolvedGammaParams g0{2.0, 1.5, 3.0, 0.0};
    for (double x = 0.1; x < 8.0; x += 0.37) {
        const double direct = (g0.alpha + g0.lambda) * std::log(g0.beta) +
                              (g0.alpha + g0.lambda - 1.0) * std::log(x) - g0.beta * x -
                              log_gamma(g0.alpha + g0.lambda);
        CHECK(convolved_gamma_logpdf(x, g0) == doctest::Approx(direct).epsilon(1e-12));
    }
    CHECK(convolved_gamma_logpdf(-1.0, g0) == -INFINITY);

    // normalization over (0, inf)
    const ConvolvedGammaParams p{1.5, 2.0, 2.5, -1.0};
    const double mass = oracle::integrate(
        [&](double x) { return x <= 0.0 ? 0.0 : std::exp(convolved_gamma_logpdf(x, p)); },
        1e-12, 60.0, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

    // matches a Monte Carlo histogram of a sum of two gammas
    const ConvolvedGammaParams q{2.0, 1.0, 3.0, 0.5};
    std::mt19937_64 gen(99);
    std::gamma_distribution<double> g1(2.0, 1.0);       // Gamma(alpha, beta)
    std::gamma_distribution<double> g2(3.0, 1.0 / 0.5); // Gamma(lambda, beta - delta)
    const int n = 1000000;
    const double lo = 1.45, hi = 1.95;
    long count = 0;
    for (int i = 0; i < n; ++i) {
        const double v = g1(gen) + g2(gen);
        if (v > lo && v < hi) ++count;
    }
    const double bin_mass = oracle::integrate(
        [&](double x) { return std::exp(convolved_gamma_logpdf(x, q)); }, lo, hi, 1e-12);
    const double se = std::sqrt(bin_mass * (1.0 - bin_mass) / n);
    CHECK(std::abs(static_cast<double>(count) / n - bin_mass) < 4.0 * se + 1e-6);

    CHECK_THROWS_AS(convolved_gamma_logpdf(1.0, ConvolvedGammaParams{1.0, 1.0, 1.0, 2.0}),
                    domain_error);
}

TEST_CASE("regularized incomplete gamma and quantile") {
    // P(1, x) = 1 - e^-x ; P(1/2, x) = erf(sqrt x)
    for (double x = 0.05; x < 12.0; x += 0.613) {
        CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
        CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-11));
    }
    for (const double a : {0.3, 1.0, 2.5, 17.0})
        for (const double p : {1e-9, 1e-3, 0.3, 0.9, 1.0 - 1e-9}) {
            const double x = gamma_quantile(a, p);
            CHECK(gamma_p(a, x) == doctest::Approx(p).epsilon(1e-8));
        }
}

TEST_CASE("log densities integrate to one over a parameter grid") {
    std::mt19937_64 gen(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const KummerBetaParams p{0.6 + 4.0 * u(gen), 0.6 + 4.0 * u(gen),
                                 -4.0 + 8.0 * u(gen), 0.5 + 3.0 * u(gen),
                                 -2.0 + 4.0 * u(gen)};
        const double mass = oracle::integrate(
            [&](double y) { return std::exp(kummer_beta_shifted_logpdf(y, p)); },
            p.shift + 1e-13, p.shift + p.scale - 1e-13, 1e-12);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
    for (int trial = 0; trial < 20; ++trial) {
        const ConvolvedGammaParams p{0.6 + 3.0 * u(gen), 0.8 + 2.0 * u(gen),
                                     0.6 + 3.0 * u(gen), 0.0};
        const ConvolvedGammaParams q{p.alpha, p.beta, p.lambda,
                                     p.beta - (0.3 + 2.0 * u(gen))};
        const double upper = gamma_quantile(q.alpha + q.lambda, 1.0 - 1e-13) /
                             std::min(q.beta, q.beta - q.delta);
        const double mass = oracle::integrate(
            [&](double x) { return x <= 0.0 ? 0.0 : std::exp(convolved_gamma_logpdf(x, q)); },
            1e-13, upper, 1e-12);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
}
