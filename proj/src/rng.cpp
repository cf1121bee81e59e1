#include "csb/rng.hpp"

#include <cmath>
#include <string>

namespace csb {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::uint32_t k0,
                         std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}

} // namespace

std::array<std::uint32_t, 4> RngStream::philox_block(std::uint64_t counter) const {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return ctr;
}

std::uint64_t RngStream::next_u64() {
    if (buf_pos_ >= 2) {
        buf_ = philox_block(block_++);
        buf_pos_ = 0;
    }
    const int i = 2 * buf_pos_++;
    return (static_cast<std::uint64_t>(buf_[i + 1]) << 32) | buf_[i];
}

double RngStream::next_normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_double() - 1.0;
        v = 2.0 * next_double() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_normal_ = true;
    return u * f;
}

double sample_gamma(RngStream& rng, double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw domain_error("sample_gamma: shape and rate must be positive (shape=" +
                           std::to_string(shape) + ", rate=" + std::to_string(rate) + ")");
    double boost = 1.0;
    double a = shape;
    if (a < 1.0) {
        boost = std::pow(rng.next_open(), 1.0 / a);
        a += 1.0;
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
        double x, v;
        do {
            x = rng.next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.next_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v / rate;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
    }
}

double sample_inverse_gamma(RngStream& rng, double shape, double rate) {
    return 1.0 / sample_gamma(rng, shape, rate);
}

std::vector<double> sample_cs_mvn(RngStream& rng, std::span<const double> mean,
                                  const CsPair& cov) {
    const int d = cov.d;
    if (mean.size() != static_cast<std::size_t>(d))
        throw dimension_error("sample_cs_mvn: mean length does not match covariance dimension");
    if (d == 1) {
        if (!(cov.a1 > 0.0)) throw domain_error("sample_cs_mvn: variance must be positive");
        return {mean[0] + std::sqrt(cov.a1) * rng.next_normal()};
    }
    if (!cone_contains(cov)) throw domain_error("sample_cs_mvn: covariance is not conic");

    std::vector<double> x(mean.begin(), mean.end());
    std::vector<double> eps(static_cast<std::size_t>(d));
    double eps_sum = 0.0;
    for (double& e : eps) {
        e = rng.next_normal();
        eps_sum += e;
    }
    const double eps_bar = eps_sum / d;
    const double tail_sd = std::sqrt(cov.a1 - cov.a2);
    const double head_sd = std::sqrt((cov.a1 + (d - 1) * cov.a2) / d);
    const double common = head_sd * rng.next_normal();
    for (int i = 0; i < d; ++i) x[i] += tail_sd * (eps[i] - eps_bar) + common;
    return x;
}

} // namespace csb
