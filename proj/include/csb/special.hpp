#pragma once

#include "csb/errors.hpp"

// Scalar special functions behind the closed-form densities: log-gamma,
// log-beta, Kummer's confluent hypergeometric 1F1, the Kummer-Beta
// normalizer, the shifted/scaled Kummer-Beta log-density and the
// convolved-gamma log-density. Everything is evaluated in log space;
// linear-space values exponentiate at the boundary.

namespace csb {

// ln Gamma(x), x > 0. Lanczos approximation (g = 7, 9 terms), relative
// error below 1e-13 over the positive axis.
double log_gamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b)
double log_beta(double a, double b);

// 1F1(a, b, x) = sum_n (a)_n/(b)_n x^n/n!  for a, b > 0.
// Direct series for x >= 0; Kummer's transformation
// 1F1(a,b,x) = e^x 1F1(b-a, b, -x) for x < 0.
double kummer_1f1(double a, double b, double x);

// ln 1F1(a, b, x); throws domain_error if the value is not positive
// (possible only when x < 0 and b <= a, which no density here produces).
double kummer_1f1_log(double a, double b, double x);

// ln[B(alpha,beta) * 1F1(alpha, alpha+beta, -lambda)], the Kummer-Beta
// normalization constant; reduces to ln B(alpha,beta) at lambda = 0.
double kummer_beta_log_norm(double alpha, double beta, double lambda);

// Kummer-Beta variable rescaled to support (shift, shift + scale).
struct KummerBetaParams {
    double alpha;
    double beta;
    double lambda;
    double scale; // a > 0
    double shift; // b
};

// Log-density of Y = a*X + b with X ~ KB(alpha, beta, lambda); -inf off
// the open support (b, a+b).
double kummer_beta_shifted_logpdf(double y, const KummerBetaParams& p);

// Law of the sum of independent Gamma(alpha, beta) and Gamma(lambda, beta-delta).
struct ConvolvedGammaParams {
    double alpha;
    double beta;
    double lambda;
    double delta; // must satisfy delta < beta
};

// ln[ beta^alpha (beta-delta)^lambda / Gamma(alpha+lambda)
//     * x^(alpha+lambda-1) e^(-beta x) 1F1(lambda, alpha+lambda, delta x) ]
// for x > 0; -inf otherwise. delta = 0 is the Gamma(alpha+lambda, beta) density.
double convolved_gamma_logpdf(double x, const ConvolvedGammaParams& p);

// Regularized lower incomplete gamma P(a, x) and its inverse in x.
// Used for tail truncation when integrating unnormalized densities.
double gamma_p(double a, double x);
double gamma_quantile(double a, double p);

} // namespace csb
