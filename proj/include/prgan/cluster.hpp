#ifndef PRGAN_CLUSTER_HPP
#define PRGAN_CLUSTER_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace prgan::core {

using Point2 = std::array<double, 2>;

// Centroid clustering (k-means++ init, Lloyd iterations, 10 restarts, best
// inertia kept). Deterministic given the seed; every cluster non-empty.
std::vector<int> cluster_floor_locations(const std::vector<Point2>& coords, int k,
                                         std::uint64_t seed);

}  // namespace prgan::core

#endif
