#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "csb/cs_linalg.hpp"
#include "csb/errors.hpp"

// Deterministic, seedable variate generation. The base generator is
// Philox4x32-10, a counter-based generator: the keyed block cipher maps
// (seed, stream_id, block index) to output bits, so distinct stream ids give
// independent substreams by construction and replay is exact across
// platforms and thread counts.

namespace csb {

class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    // A statistically independent stream derived from the same seed.
    RngStream substream(std::uint64_t id) const { return RngStream(seed_, id); }

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0, 1); safe under log().
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Marsaglia's polar method (second variate cached).
    double next_normal();

  private:
    std::array<std::uint32_t, 4> philox_block(std::uint64_t counter) const;

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 2; // two u64 per block; start exhausted
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// One draw from Gamma(shape, rate) by the Marsaglia-Tsang squeeze,
// with the U^(1/shape) boost for shape < 1. Strictly positive.
double sample_gamma(RngStream& rng, double shape, double rate);

// Reciprocal of a Gamma(shape, rate) draw.
double sample_inverse_gamma(RngStream& rng, double shape, double rate);

// Draw from N_d(mean, S) with S the compound-symmetric matrix of cov,
// in O(d) through the two-eigenvalue split
//   x = mean + sqrt(a1-a2) (eps - mean(eps) 1) + sqrt((a1+(d-1)a2)/d) z 1.
// cov.d == 1 degenerates to N(mean, a1).
std::vector<double> sample_cs_mvn(RngStream& rng, std::span<const double> mean,
                                  const CsPair& cov);

} // namespace csb
