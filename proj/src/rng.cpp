#include "qot/rng.hpp"

#include <algorithm>

#include "qot/error.hpp"

namespace qot {

std::vector<std::uint64_t> Rng::sample_distinct(std::uint64_t lo, std::uint64_t hi, std::size_t k) {
    require(lo <= hi, "sample_distinct: empty range");
    const std::uint64_t n = hi - lo + 1;
    require(k <= n, "sample_distinct: k exceeds range size");
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = lo + i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace qot
