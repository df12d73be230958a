#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace wrw {

/// Powers of two inside [lo, hi], starting at the first power >= lo.
inline std::vector<std::uint64_t> dyadic_horizons(std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0 || hi < lo) throw std::invalid_argument("bad dyadic range");
    std::vector<std::uint64_t> out;
    std::uint64_t n = 1;
    while (n < lo) n <<= 1;
    for (; n <= hi; n <<= 1) out.push_back(n);
    if (out.empty()) throw std::invalid_argument("dyadic range contains no powers of two");
    return out;
}

inline std::vector<std::uint64_t> range_horizons(std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0 || hi < lo) throw std::invalid_argument("bad horizon range");
    std::vector<std::uint64_t> out;
    out.reserve(hi - lo + 1);
    for (std::uint64_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
}

inline std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1 || !(hi >= lo)) throw std::invalid_argument("bad linear grid");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return out;
}

}  // namespace wrw
