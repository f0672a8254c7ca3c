// Regular lattice on the unit simplex: the candidate-action set shared by
// the deterministic and the randomized obfuscators.

#ifndef CADM_GRID_HPP
#define CADM_GRID_HPP

#include "cadm/types.hpp"

#include <cstdint>
#include <vector>

namespace cadm {

template <typename Scalar>
struct ActionGridT {
    std::vector<ActionT<Scalar>> points;  // lexicographically ascending
    Index resolution = 0;                 // N: simplex coordinates are k/N

    Index size() const { return Index(points.size()); }
};

using ActionGrid = ActionGridT<double>;

namespace detail {

/// binomial(n, k) with an early bail-out above `cap`. Callers keep n small
/// enough that the running product cannot overflow before the bail-out.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                                     std::uint64_t cap) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;  // integral: product of i consecutive terms
        if (result > cap) return cap + 1;
    }
    return result;
}

}  // namespace detail

/**
 * All compositions of N into U nonnegative parts, scaled by 1/N: the points
 * (k_1/N, ..., k_U/N) with sum k_i = N, in ascending lexicographic order.
 * The count is binomial(N+U-1, U-1); grids beyond 10^7 points are refused.
 */
template <typename Scalar = double>
ActionGridT<Scalar> simplex_grid(Index num_assets, Index resolution) {
    if (num_assets < 1) throw InvalidInput("simplex_grid: need at least one asset");
    if (resolution < 1) throw InvalidInput("simplex_grid: resolution must be >= 1");
    constexpr std::uint64_t kMaxPoints = 10000000;
    if (num_assets >= 2 && std::uint64_t(resolution) >= kMaxPoints)
        throw InvalidInput("simplex_grid: grid would exceed 10^7 points");
    if (std::uint64_t(num_assets) > kMaxPoints)
        throw InvalidInput("simplex_grid: grid would exceed 10^7 points");
    const std::uint64_t count = detail::binomial_capped(
        std::uint64_t(resolution + num_assets - 1), std::uint64_t(num_assets - 1),
        kMaxPoints);
    if (count > kMaxPoints)
        throw InvalidInput("simplex_grid: grid would exceed 10^7 points");

    ActionGridT<Scalar> grid;
    grid.resolution = resolution;
    grid.points.reserve(static_cast<std::size_t>(count));

    VectorX<Scalar> point(num_assets);
    std::vector<Index> parts(static_cast<std::size_t>(num_assets), 0);
    // Depth-first over the leading coordinates, ascending, so the emitted
    // order is lexicographic without a separate sort.
    const auto emit = [&](auto&& self, Index pos, Index remaining) -> void {
        if (pos == num_assets - 1) {
            parts[static_cast<std::size_t>(pos)] = remaining;
            for (Index j = 0; j < num_assets; ++j)
                point[j] = Scalar(parts[static_cast<std::size_t>(j)]) /
                           Scalar(resolution);
            grid.points.push_back(ActionT<Scalar>(point));
            return;
        }
        for (Index k = 0; k <= remaining; ++k) {
            parts[static_cast<std::size_t>(pos)] = k;
            self(self, pos + 1, remaining - k);
        }
    };
    emit(emit, 0, resolution);
    return grid;
}

}  // namespace cadm

#endif  // CADM_GRID_HPP
