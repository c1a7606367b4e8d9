#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "scdma/graph.hpp"
#include "scdma/signature.hpp"

namespace scdma {

// Canonical search space over a fixed connected factor graph without
// length-4 cycles: one common phase per column (column 0 pinned to 0, the
// rest in [0, pi/2)) plus one free phase in [0, 2pi) per spanning-tree
// complement edge. Searching this box loses no optimality relative to
// arbitrary labelings of the graph.
class Parameterization {
public:
    explicit Parameterization(FactorGraph g);

    const FactorGraph& graph() const { return graph_; }
    const std::vector<Edge>& loop_edges() const { return loop_edges_; }
    int n_column_params() const { return graph_.n_data() - 1; }
    int n_params() const { return n_column_params() + static_cast<int>(loop_edges_.size()); }

    // params = column angles for data nodes 1..K-1, then one angle per
    // loop edge (in loop_edges() order). Angles are wrapped into their
    // fundamental domain.
    SignatureMatrix instantiate(std::span<const double> params) const;

    // Inverse of instantiate up to the enumerator-preserving rotations:
    // canonicalizes `s` (whose graph must equal graph()) and reads off the
    // parameter point.
    std::vector<double> params_of(const SignatureMatrix& s) const;

private:
    FactorGraph graph_;
    std::vector<Edge> loop_edges_;
};

// Throws std::invalid_argument if g is disconnected or has a length-4 cycle.
Parameterization parameterize(FactorGraph g);

struct DesignResult {
    SignatureMatrix matrix;
    double d_min;
    std::vector<double> params;
    std::int64_t evaluations;
    // best-so-far trace of the winning start: (evaluation index, d_min)
    std::vector<std::pair<std::int64_t, double>> trace;
};

// Maximizes min_distance over the parameter box: multistart (embedded
// presets whose graph matches g, plus random pi/60-grid points) followed
// by pattern search shrinking the step from pi/60 to 1e-5 rad. budget = 0
// selects the default evaluation budget (2e5 for <= 5 free angles, 2e6
// otherwise). Deterministic given (seed, budget), including across thread
// counts; ties go to the lowest start index. Best found, not certified
// globally optimal.
DesignResult optimize(const FactorGraph& g, std::int64_t budget = 0, std::uint64_t seed = 1);

// (K-1) x K bidiagonal tree code: rows alternate [1, e^{i pi/6}] and
// [e^{i pi/6}, 1]. d_min = min{sqrt(K-1) (sqrt3 - 1), sqrt2}.
SignatureMatrix tree_code(int k_users);

// Block-bidiagonal (K-1)q x Kq family with one cycle of length 2(K-1)q.
// v holds K phase vectors of length q: v[0..K-2] with angles in [0, pi/2)
// scale the two diagonals, v[K-1] (equal to v[K-2] except a free last
// angle in [0, 2pi)) scales the closing cyclic-shift block in the top-right
// corner. Load K/(K-1).
SignatureMatrix construction_1(int k_blocks, int q, const std::vector<std::vector<double>>& v);

// Banded (K-2)q x Kq family, three blocks per block row, load K/(K-2).
// u0 scales the leading permutation block, v[0..K-2] the outer diagonals
// (angles in [0, pi/2)), w[0..K-4] the free middle blocks (angles in
// [0, 2pi)). perms[r][j] is the permutation (row a -> column perms[r][j][a]
// inside the block) for block row r, slot j in {left, middle, right};
// empty selects the default: identity everywhere except the middle slot of
// block row 1, which is the cyclic shift.
SignatureMatrix construction_2(int k_blocks, int q, const std::vector<double>& u0,
                               const std::vector<std::vector<double>>& v,
                               const std::vector<std::vector<double>>& w,
                               std::vector<std::array<std::vector<int>, 3>> perms = {});

struct LatinResult {
    SignatureMatrix matrix;
    double d_min;
    std::vector<std::vector<int>> assignment;  // per code node: phase index per neighbor
};

// Exhausts per-row assignments of `phases` (every code node gets a
// permutation of the full set, so each degree must equal phases.size())
// and returns the best labeling that is Latin-rectangular, i.e. no column
// repeats a phase. Deterministic tie-break: first in lexicographic
// assignment order.
LatinResult latin_search(const FactorGraph& g, std::span<const double> phases);

}  // namespace scdma
