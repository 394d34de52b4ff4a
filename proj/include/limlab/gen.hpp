#pragma once
#include <cstdint>
#include <vector>

#include "limlab/homalg.hpp"
#include "limlab/order.hpp"
#include "limlab/rng.hpp"

namespace limlab {

// Seeded instance generators.  Everything here is deterministic in the seed
// and produces objects that already satisfy their own validators.

QuasiOrder random_quasi_order(int points, std::uint64_t seed);

// mix of free and small-torsion generators, diagonal presentation
FGAbelianGroup random_group(Rng& rng, int max_rank);
// finite only, moduli 2 and 3; keeps exhaustive cochain scans tractable
FGAbelianGroup random_finite_group(Rng& rng, int max_rank);

// sampled compatibly with the generator orders on both sides, then checked;
// falls back to the zero map for presentations it cannot read
GroupHom random_hom(Rng& rng, const FGAbelianGroup& src,
                    const FGAbelianGroup& dst);

// parent[0] == -1, parent[i] < i; the ancestor order has all meets
std::vector<int> random_tree(int points, Rng& rng);

// groups on a rooted tree, bonds composed child-to-ancestor along the unique
// path, so the system is functorial on the nose
InverseSystem random_tree_system(int points, int max_rank, std::uint64_t seed);
InverseSystem random_tree_system_over(const std::vector<int>& parent,
                                      int max_rank, std::uint64_t seed);
// all terms finite (moduli 2, 3) for comparison against dense enumeration
InverseSystem random_finite_tree_system(int points, int max_rank,
                                        std::uint64_t seed);

TruncatedOmegaSystem random_tower_system(int width, int height, int max_rank,
                                         std::uint64_t seed);

}  // namespace limlab
