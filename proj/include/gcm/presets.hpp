#pragma once

#include "gcm/degree_model.hpp"

namespace gcm::presets {

/// Geometric p_k = (1/3)(2/3)^k; partitioning it into b blocks applies the boundary stub-mass
/// shift (for b = 2: 19/243 of stub mass from degree 4 to 5, H_1 = {0..4}).
inline DegreePmf geometric_two_thirds() { return DegreePmf::geometric(2.0 / 3.0); }

inline BlockPartition modified_geometric(int b) { return partition_blocks(geometric_two_thirds(), b); }

}  // namespace gcm::presets
