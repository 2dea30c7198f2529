#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace kostlan {

// Order tag written into serialized coefficient artifacts. The table below is
// frozen: reordering it would silently change every seeded ensemble draw.
inline constexpr std::string_view multi_index_order_tag = "graded-colex-v1";

// C(a, b) in exact integer arithmetic; throws std::range_error on overflow.
inline std::uint64_t binomial_checked(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0;
    b = std::min(b, a - b);
    unsigned __int128 r = 1;
    for (std::uint64_t j = 1; j <= b; ++j) {
        r = r * (a - b + j) / j;  // divisible at every step along this order
        if (r > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::range_error("binomial coefficient overflows 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

// Successor in graded colexicographic order over {alpha : |alpha| = n}.
// Sequence starts at (n, 0, ..., 0) and ends at (0, ..., 0, n).
// Returns false when the input is already the last element.
inline bool next_multi_index(std::span<std::uint32_t> alpha) {
    const std::size_t k = alpha.size();
    std::size_t i = 0;
    while (i < k && alpha[i] == 0) ++i;
    if (i + 1 >= k) return false;
    const std::uint32_t t = alpha[i];
    alpha[i] = 0;
    alpha[0] = t - 1;
    alpha[i + 1] += 1;
    return true;
}

// Flat (count x (m+1)) table of all degree-n exponent tuples in frozen order.
inline std::vector<std::uint32_t> multi_index_table(int m, int n) {
    if (m < 0 || n < 0) throw std::domain_error("multi_index_table: negative arguments");
    const std::size_t k = static_cast<std::size_t>(m) + 1;
    const std::uint64_t count = binomial_checked(static_cast<std::uint64_t>(n) + m, m);
    std::vector<std::uint32_t> table;
    table.reserve(count * k);
    std::vector<std::uint32_t> alpha(k, 0);
    alpha[0] = static_cast<std::uint32_t>(n);
    do {
        table.insert(table.end(), alpha.begin(), alpha.end());
    } while (next_multi_index(alpha));
    if (table.size() != count * k)
        throw std::logic_error("multi_index_table: enumeration count mismatch");
    return table;
}

// log of n! / (alpha_0! ... alpha_m!) via lgamma
inline double log_multinomial(int n, std::span<const std::uint32_t> alpha) {
    double lm = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::uint32_t a : alpha) lm -= std::lgamma(static_cast<double>(a) + 1.0);
    return lm;
}

}  // namespace kostlan
