#include "scdma/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>

#include "scdma/distance.hpp"
#include "scdma/presets.hpp"
#include "scdma/rng.hpp"

namespace scdma {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kGridStep = pi / 60.0;
constexpr double kMinStep = 1e-5;

double wrap_to(double x, double period) {
    double y = std::fmod(x, period);
    return y < 0.0 ? y + period : y;
}

}  // namespace

Parameterization::Parameterization(FactorGraph g) : graph_(std::move(g)) {
    if (!graph_.is_connected()) throw std::invalid_argument("parameterization requires a connected graph");
    if (graph_.count_cycles(4) != 0)
        throw std::invalid_argument("parameterization requires a graph without length-4 cycles");
    loop_edges_ = graph_.spanning_tree_complement();
}

SignatureMatrix Parameterization::instantiate(std::span<const double> params) const {
    if (static_cast<int>(params.size()) != n_params())
        throw std::invalid_argument("wrong parameter count");
    std::set<Edge> loops(loop_edges_.begin(), loop_edges_.end());
    std::vector<std::optional<double>> entries(
        static_cast<std::size_t>(graph_.n_code()) * graph_.n_data());
    for (const Edge& e : graph_.edges()) {
        double theta;
        if (auto it = loops.find(e); it != loops.end()) {
            int j = static_cast<int>(std::distance(loop_edges_.begin(),
                                                   std::find(loop_edges_.begin(), loop_edges_.end(), e)));
            theta = wrap_to(params[n_column_params() + j], 2.0 * pi);
        } else {
            theta = e.data == 0 ? 0.0 : wrap_to(params[e.data - 1], pi / 2.0);
        }
        entries[static_cast<std::size_t>(e.code) * graph_.n_data() + e.data] = theta;
    }
    return SignatureMatrix(graph_.n_code(), graph_.n_data(), std::move(entries));
}

std::vector<double> Parameterization::params_of(const SignatureMatrix& s) const {
    FactorGraph gs = graph_from_signature(s);
    auto a = gs.edges();
    auto b = graph_.edges();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (gs.n_code() != graph_.n_code() || gs.n_data() != graph_.n_data() || a != b)
        throw std::invalid_argument("matrix graph does not match the parameterized graph");

    SignatureMatrix c = s.canonicalize(loop_edges_);
    std::set<Edge> loops(loop_edges_.begin(), loop_edges_.end());
    std::vector<double> params(n_params(), 0.0);
    for (int k = 1; k < graph_.n_data(); ++k) {
        for (int n : graph_.data_neighbors(k)) {
            if (!loops.count(Edge{n, k})) {
                params[k - 1] = c.theta(n, k);
                break;
            }
        }
    }
    for (std::size_t j = 0; j < loop_edges_.size(); ++j)
        params[n_column_params() + j] = c.theta(loop_edges_[j].code, loop_edges_[j].data);
    return params;
}

Parameterization parameterize(FactorGraph g) { return Parameterization(std::move(g)); }

namespace {

struct StartOutcome {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> params;
    std::int64_t evals = 0;
    std::vector<std::pair<std::int64_t, double>> trace;
};

std::vector<double> random_grid_point(const Parameterization& p, Rng& rng) {
    std::vector<double> x(p.n_params());
    for (int d = 0; d < p.n_column_params(); ++d) x[d] = rng.uniform_int(30) * kGridStep;
    for (int d = p.n_column_params(); d < p.n_params(); ++d) x[d] = rng.uniform_int(120) * kGridStep;
    return x;
}

double dim_period(const Parameterization& p, int dim) {
    return dim < p.n_column_params() ? pi / 2.0 : 2.0 * pi;
}

// hill-climb with coordinate steps, shrinking the step on failure
void pattern_search(const Parameterization& p, std::vector<double> point, double value,
                    std::int64_t budget, StartOutcome& out) {
    auto note = [&](double v, const std::vector<double>& x) {
        if (v > out.best) {
            out.best = v;
            out.params = x;
            out.trace.emplace_back(out.evals, v);
        }
    };
    note(value, point);

    double step = kGridStep;
    while (step >= kMinStep && out.evals < budget) {
        double best_val = value;
        std::vector<double> best_point = point;
        bool improved = false;
        for (int dim = 0; dim < p.n_params() && out.evals < budget; ++dim) {
            for (double sgn : {1.0, -1.0}) {
                if (out.evals >= budget) break;
                std::vector<double> cand = point;
                cand[dim] = wrap_to(cand[dim] + sgn * step, dim_period(p, dim));
                ThresholdedDmin t = min_distance_at_least(p.instantiate(cand), best_val);
                ++out.evals;
                if (t.exact && t.value > best_val) {
                    best_val = t.value;
                    best_point = std::move(cand);
                    improved = true;
                }
            }
        }
        if (improved) {
            point = std::move(best_point);
            value = best_val;
            note(value, point);
        } else {
            step *= 0.5;
        }
    }
}

void run_start(const Parameterization& p, const std::vector<double>* warm, std::int64_t budget,
               std::uint64_t rng_seed, StartOutcome& out) {
    Rng rng(rng_seed);
    bool first = true;
    while (out.evals < budget) {
        std::vector<double> x = (first && warm) ? *warm : random_grid_point(p, rng);
        first = false;
        DminResult r = min_distance(p.instantiate(x));
        ++out.evals;
        pattern_search(p, std::move(x), r.d_min, budget, out);
        if (p.n_params() == 0) break;  // nothing to search
    }
}

// embedded presets whose factor graph equals g, as warm-start points
std::vector<std::vector<double>> warm_starts(const Parameterization& p) {
    const FactorGraph& g = p.graph();
    auto target = g.edges();
    std::sort(target.begin(), target.end());

    std::vector<SignatureMatrix> candidates;
    for (const auto& name : presets::names()) candidates.push_back(presets::by_name(name));
    if (g.n_data() >= 2 && g.n_code() == g.n_data() - 1) candidates.push_back(tree_code(g.n_data()));

    std::vector<std::vector<double>> out;
    for (const auto& m : candidates) {
        if (m.rows() != g.n_code() || m.cols() != g.n_data()) continue;
        auto e = graph_from_signature(m).edges();
        std::sort(e.begin(), e.end());
        if (e == target) out.push_back(p.params_of(m));
    }
    return out;
}

}  // namespace

DesignResult optimize(const FactorGraph& g, std::int64_t budget, std::uint64_t seed) {
    Parameterization p = parameterize(g);
    if (budget <= 0) budget = p.n_params() <= 5 ? 200000 : 2000000;

    auto warm = warm_starts(p);
    const int n_random = 16;
    const int n_starts = static_cast<int>(warm.size()) + n_random;
    const std::int64_t per_start = std::max<std::int64_t>(1, budget / n_starts);

    std::vector<StartOutcome> outcomes(n_starts);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_starts; ++i) {
        const std::vector<double>* w = i < static_cast<int>(warm.size()) ? &warm[i] : nullptr;
        run_start(p, w, per_start, mix_key(seed, static_cast<std::uint64_t>(i), 0), outcomes[i]);
    }

    int winner = 0;
    std::int64_t total = 0;
    for (int i = 0; i < n_starts; ++i) {
        total += outcomes[i].evals;
        if (outcomes[i].best > outcomes[winner].best) winner = i;  // ties keep lowest index
    }

    SignatureMatrix m = p.instantiate(outcomes[winner].params);
    DminResult exact = min_distance(m);
    return {std::move(m), exact.d_min, outcomes[winner].params, total,
            std::move(outcomes[winner].trace)};
}

SignatureMatrix tree_code(int k_users) {
    if (k_users < 2) throw std::invalid_argument("tree code needs at least two users");
    std::vector<std::optional<double>> entries(static_cast<std::size_t>(k_users - 1) * k_users);
    for (int n = 0; n < k_users - 1; ++n) {
        double a = n % 2 == 0 ? 0.0 : pi / 6.0;
        double b = n % 2 == 0 ? pi / 6.0 : 0.0;
        entries[static_cast<std::size_t>(n) * k_users + n] = a;
        entries[static_cast<std::size_t>(n) * k_users + n + 1] = b;
    }
    return SignatureMatrix(k_users - 1, k_users, std::move(entries));
}

namespace {

void check_range(double theta, double lo, double hi, const char* what) {
    if (!(theta >= lo && theta < hi)) throw std::invalid_argument(std::string(what) + " out of range");
}

// writes block B = P * diag(phases) at block position (br, bc): entry
// (perm[a], a) of the block carries phases[a]
void place_block(std::vector<std::optional<double>>& entries, int n_cols, int q, int br, int bc,
                 const std::vector<int>& perm, const std::vector<double>& phases) {
    for (int a = 0; a < q; ++a) {
        int row = br * q + perm[a];
        int col = bc * q + a;
        entries[static_cast<std::size_t>(row) * n_cols + col] = phases[a];
    }
}

std::vector<int> identity_perm(int q) {
    std::vector<int> p(q);
    for (int i = 0; i < q; ++i) p[i] = i;
    return p;
}

// cyclic shift: block entry (0, q-1) and (j, j-1) nonzero
std::vector<int> cyclic_perm(int q) {
    std::vector<int> p(q);
    for (int a = 0; a < q; ++a) p[a] = (a + 1) % q;
    return p;
}

void check_perm(const std::vector<int>& p, int q) {
    if (static_cast<int>(p.size()) != q) throw std::invalid_argument("permutation block has wrong size");
    std::vector<bool> seen(q, false);
    for (int v : p) {
        if (v < 0 || v >= q || seen[v]) throw std::invalid_argument("invalid permutation block");
        seen[v] = true;
    }
}

}  // namespace

SignatureMatrix construction_1(int k_blocks, int q, const std::vector<std::vector<double>>& v) {
    if (k_blocks < 3 || q < 1) throw std::invalid_argument("construction needs K >= 3, q >= 1");
    if (static_cast<int>(v.size()) != k_blocks)
        throw std::invalid_argument("expected K phase vectors");
    for (const auto& vk : v)
        if (static_cast<int>(vk.size()) != q)
            throw std::invalid_argument("each phase vector must have length q");
    for (int k = 0; k + 1 < k_blocks; ++k)
        for (double t : v[k]) check_range(t, 0.0, pi / 2.0, "diagonal block angle");
    for (int j = 0; j + 1 < q; ++j)
        if (std::abs(v[k_blocks - 1][j] - v[k_blocks - 2][j]) > 1e-9)
            throw std::invalid_argument("closing vector must match its predecessor except the last angle");
    check_range(v[k_blocks - 1][q - 1], 0.0, 2.0 * pi, "free closing angle");

    const int n_rows = (k_blocks - 1) * q;
    const int n_cols = k_blocks * q;
    std::vector<std::optional<double>> entries(static_cast<std::size_t>(n_rows) * n_cols);
    auto id = identity_perm(q);
    std::vector<double> ones(q, 0.0);

    place_block(entries, n_cols, q, 0, 0, id, ones);                              // unscaled identity
    place_block(entries, n_cols, q, 0, k_blocks - 1, cyclic_perm(q), v[k_blocks - 2]);
    for (int r = 0; r < k_blocks - 2; ++r) {
        place_block(entries, n_cols, q, r, r + 1, id, v[r]);
        place_block(entries, n_cols, q, r + 1, r + 1, id, v[r]);
    }
    place_block(entries, n_cols, q, k_blocks - 2, k_blocks - 1, id, v[k_blocks - 1]);
    return SignatureMatrix(n_rows, n_cols, std::move(entries));
}

SignatureMatrix construction_2(int k_blocks, int q, const std::vector<double>& u0,
                               const std::vector<std::vector<double>>& v,
                               const std::vector<std::vector<double>>& w,
                               std::vector<std::array<std::vector<int>, 3>> perms) {
    if (k_blocks < 4 || q < 1) throw std::invalid_argument("construction needs K >= 4, q >= 1");
    if (static_cast<int>(u0.size()) != q) throw std::invalid_argument("leading phase vector must have length q");
    if (static_cast<int>(v.size()) != k_blocks - 1)
        throw std::invalid_argument("expected K-1 diagonal phase vectors");
    if (static_cast<int>(w.size()) != k_blocks - 3)
        throw std::invalid_argument("expected K-3 middle phase vectors");
    for (const auto& vk : v) {
        if (static_cast<int>(vk.size()) != q) throw std::invalid_argument("phase vector length mismatch");
        for (double t : vk) check_range(t, 0.0, pi / 2.0, "diagonal block angle");
    }
    for (const auto& wk : w) {
        if (static_cast<int>(wk.size()) != q) throw std::invalid_argument("phase vector length mismatch");
        for (double t : wk) check_range(t, 0.0, 2.0 * pi, "middle block angle");
    }
    for (double t : u0) check_range(t, 0.0, 2.0 * pi, "leading block angle");

    const int n_block_rows = k_blocks - 2;
    if (perms.empty()) {
        perms.assign(n_block_rows, {identity_perm(q), identity_perm(q), identity_perm(q)});
        if (n_block_rows > 1) perms[1][1] = cyclic_perm(q);
    }
    if (static_cast<int>(perms.size()) != n_block_rows)
        throw std::invalid_argument("expected one permutation triple per block row");
    for (const auto& tri : perms)
        for (const auto& pm : tri) check_perm(pm, q);

    const int n_rows = n_block_rows * q;
    const int n_cols = k_blocks * q;
    std::vector<std::optional<double>> entries(static_cast<std::size_t>(n_rows) * n_cols);

    place_block(entries, n_cols, q, 0, 0, perms[0][0], u0);
    place_block(entries, n_cols, q, 0, 1, perms[0][1], v[0]);
    place_block(entries, n_cols, q, 0, 2, perms[0][2], v[1]);
    for (int r = 1; r < n_block_rows; ++r) {
        place_block(entries, n_cols, q, r, r, perms[r][0], v[r - 1]);
        place_block(entries, n_cols, q, r, r + 1, perms[r][1], w[r - 1]);
        place_block(entries, n_cols, q, r, r + 2, perms[r][2], v[r + 1]);
    }
    return SignatureMatrix(n_rows, n_cols, std::move(entries));
}

LatinResult latin_search(const FactorGraph& g, std::span<const double> phases) {
    const int p = static_cast<int>(phases.size());
    for (int n = 0; n < g.n_code(); ++n)
        if (static_cast<int>(g.code_neighbors(n).size()) != p)
            throw std::invalid_argument("every code node degree must equal the phase-set size");

    std::vector<std::vector<int>> perms;
    {
        std::vector<int> perm(p);
        for (int i = 0; i < p; ++i) perm[i] = i;
        do perms.push_back(perm);
        while (std::next_permutation(perm.begin(), perm.end()));
    }

    const int n_rows = g.n_code();
    std::vector<int> choice(n_rows, 0);
    LatinResult best{SignatureMatrix(1, 1, {0.0}), -1.0, {}};
    for (;;) {
        // build and test the assignment
        std::vector<std::optional<double>> entries(static_cast<std::size_t>(n_rows) * g.n_data());
        std::vector<std::vector<int>> assignment(n_rows);
        bool latin = true;
        std::vector<std::vector<int>> col_used(g.n_data());
        for (int n = 0; n < n_rows && latin; ++n) {
            const auto& nbrs = g.code_neighbors(n);
            const auto& perm = perms[choice[n]];
            assignment[n].assign(perm.begin(), perm.end());
            for (int j = 0; j < p; ++j) {
                int k = nbrs[j];
                for (int prev : col_used[k])
                    if (prev == perm[j]) latin = false;
                col_used[k].push_back(perm[j]);
                entries[static_cast<std::size_t>(n) * g.n_data() + k] = phases[perm[j]];
            }
        }
        if (latin) {
            SignatureMatrix m(n_rows, g.n_data(), std::move(entries));
            double d = min_distance(m).d_min;
            if (d > best.d_min) best = {std::move(m), d, std::move(assignment)};
        }

        int pos = n_rows - 1;
        while (pos >= 0 && choice[pos] == static_cast<int>(perms.size()) - 1) choice[pos--] = 0;
        if (pos < 0) break;
        ++choice[pos];
    }
    if (best.d_min < 0.0) throw std::runtime_error("no Latin-rectangular assignment exists");
    return best;
}

}  // namespace scdma
