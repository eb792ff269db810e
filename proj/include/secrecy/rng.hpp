#pragma once
#include <array>
#include <cmath>
#include <cstdint>

#include "secrecy/errors.hpp"

namespace secrecy {

// splitmix64 finalizer, used for deriving per-point seeds
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Philox4x64-10 counter-based generator. Stateless block function: the same
// (counter, key) always yields the same 256-bit block, which is what makes
// trial-indexed streams reproducible regardless of evaluation order.
namespace philox {

inline constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ull;
inline constexpr std::uint64_t kM1 = 0xCA5A826395121157ull;
inline constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73Bull;

inline std::uint64_t mulhi(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) >> 64);
}

inline std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                          std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t lo0 = kM0 * ctr[0], hi0 = mulhi(kM0, ctr[0]);
        const std::uint64_t lo1 = kM1 * ctr[2], hi1 = mulhi(kM1, ctr[2]);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

}  // namespace philox

// substreams keep every random quantity of a trial independent of how many
// draws the other quantities consumed
enum Substream : std::uint64_t {
    kCountStream = 0,
    kPositionStream = 1,
    kUeGainStream = 2,
    kEdBsGainStream = 3,
    kEdUeGainStream = 4,
    kSelfInterferenceStream = 5,
};

// One (seed, trial, substream) lane of the generator.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t substream)
        : key_{seed, 0x9E3779B97F4A7C15ull}, base_{trial, substream, 0, 0} {}

    std::uint64_t next_u64() {
        if (idx_ == 4) {
            auto ctr = base_;
            ctr[2] = block_++;
            buf_ = philox::block(ctr, key_);
            idx_ = 0;
        }
        return buf_[idx_++];
    }

    // strictly inside (0,1): top 53 bits plus a half-ulp offset
    double next_uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    double next_exponential(double mean) { return -mean * std::log(next_uniform01()); }

  private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> base_;
    std::array<std::uint64_t, 4> buf_{};
    std::uint64_t block_ = 0;
    int idx_ = 4;
};

// Handle for one trial; hands out substream lanes on demand.
class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}
    RngStream stream(std::uint64_t substream) const { return {seed_, trial_, substream}; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t trial() const { return trial_; }

  private:
    std::uint64_t seed_, trial_;
};

// Poisson by sequential inversion; one uniform per draw keeps the stream
// budget fixed. Fine for the means used here (tens to low hundreds).
inline int poisson_draw(RngStream& rng, double mu) {
    if (!(mu >= 0) || !std::isfinite(mu)) throw DomainError("poisson_draw requires mu >= 0");
    if (mu == 0.0) return 0;
    const double u = rng.next_uniform01();
    double p = std::exp(-mu), cum = p;
    const int cap = static_cast<int>(mu + 12.0 * std::sqrt(mu) + 60.0);
    int k = 0;
    while (u > cum && k < cap) {
        ++k;
        p *= mu / k;
        cum += p;
    }
    return k;
}

}  // namespace secrecy
