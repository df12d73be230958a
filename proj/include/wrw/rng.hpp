#pragma once

#include <cmath>
#include <cstdint>

#include "wrw/model.hpp"

namespace wrw::sim {

/// splitmix64 step; also used to expand (seed, stream) into generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ whose state is a pure function of (seed, stream index).
/// Distinct stream indices give statistically independent substreams, so
/// Monte Carlo batches can be assigned to streams and merged in any order.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1), symmetric about 1/2.
    double next_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_open01();
        const double u2 = next_open01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double next_rademacher() {
        return (next_u64() >> 63) ? 1.0 : -1.0;
    }

    /// Laplace with scale 1/sqrt(2), so the variance is exactly 1.
    double next_laplace() {
        const double u = next_open01();
        const double b = 0.70710678118654752440;
        return u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
    }

    /// Uniform on [-sqrt(3), sqrt(3)], unit variance.
    double next_uniform_pm() {
        const double s3 = 1.7320508075688772935;
        return (2.0 * next_open01() - 1.0) * s3;
    }

    double sample(model::IncrementDistribution::Kind kind) {
        using Kind = model::IncrementDistribution::Kind;
        switch (kind) {
            case Kind::Gaussian: return next_gaussian();
            case Kind::Rademacher: return next_rademacher();
            case Kind::Laplace: return next_laplace();
            case Kind::Uniform: return next_uniform_pm();
        }
        return 0.0;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wrw::sim
