#pragma once

#include <cstddef>
#include <cstdint>

#include "topokernel/graph.hpp"

namespace topokernel {

// G(n, p) random graph. Pairs (u, v), u < v, are visited in lexicographic
// order and each is kept when a fresh uniform draw from an mt19937_64 seeded
// with `seed` is below p. Throws ArgumentError unless 0 <= p <= 1.
Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

}  // namespace topokernel
