#pragma once

#include <cstdint>
#include <random>

#include "scene_io.hpp"

namespace berkdisc {

// Seeded scene generator for property checks. The scene holds functions "phi" and "psi" (valid
// quasisubharmonic), a polynomial "f" over the rigid leaves, and queries: first a random point z
// (node, pole or edge point), then five points with finite A.
// Half of the seeds give trees with all multiplicities 1, the only ones that may carry T4 leaves.
Scene random_scene(std::uint64_t seed, int max_nodes = 10);

// Nonnegative atoms at random non-root nodes, slopes -(mass below), random root value.
QshFunction random_qsh(const TreePtr& tree, std::mt19937_64& rng);
FormalPoly random_poly(const TreePtr& tree, std::mt19937_64& rng, long max_exponent = 3);
TreePoint random_point(const DiscTree& t, std::mt19937_64& rng, bool finite_only);

}  // namespace berkdisc
