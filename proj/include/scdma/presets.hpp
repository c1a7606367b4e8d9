#pragma once

#include <string>
#include <vector>

#include "scdma/graph.hpp"
#include "scdma/signature.hpp"

namespace scdma::presets {

// Published optimal single-resource phase vectors for K = 1..6 (radians).
// The K=3 and K=6 entries are the published 4-decimal angles refined to a
// nearby local optimum; the published rounding loses more than 1e-4 of
// minimum distance for those two rows.
std::vector<double> table1_phases(int k_users);

// Published maximum single-resource minimum distance delta_K, K = 1..6.
double table1_delta(int k_users);

// 1 x K matrix with the table1 phases.
SignatureMatrix table1_matrix(int k_users);

// Optimized 4x6 matrix on the 6-user 4-resource topology of fig2_graph()
// (d_min = 1.3726).
SignatureMatrix optimized_4x6();

// Chained 8-user 4-resource matrix, one length-8 cycle (d_min = 0.8305).
SignatureMatrix chained_4x8();

// Block-bidiagonal 6-user 4-resource matrix, one length-8 cycle
// (d_min = 1.2679).
SignatureMatrix block_4x6();

// Block-bidiagonal 8-user 6-resource matrix (d_min = sqrt2).
SignatureMatrix block_6x8();

// Two-user suboptimal reference vector [1, e^{i pi/4}] (d_min = 2 - sqrt2).
SignatureMatrix two_user_pi4();

// The 6-user 4-resource topology used by optimized_4x6(): four code nodes
// of degree 3, six data nodes of degree 2, four length-6 cycles.
FactorGraph fig2_graph();

// All embedded named matrices: table1-k1..k6, tree-k4, opt-4x6,
// block-4x6, block-6x8, chained-4x8, two-user-pi4.
std::vector<std::string> names();
SignatureMatrix by_name(const std::string& name);

}  // namespace scdma::presets
