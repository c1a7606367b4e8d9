#include "scdma/distance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scdma {

namespace {

constexpr double kBucketTol = 1e-9;

struct ColumnSupport {
    std::vector<int> rows;                     // rows with a nonzero entry
    std::array<std::vector<cplx>, 9> contrib;  // contrib[d][i] = s_{rows[i],k} * diff_d
};

std::vector<ColumnSupport> build_supports(const SignatureMatrix& s) {
    const auto& diffs = difference_alphabet();
    std::vector<ColumnSupport> cols(s.cols());
    for (int k = 0; k < s.cols(); ++k) {
        for (int n = 0; n < s.rows(); ++n)
            if (!s.is_zero(n, k)) cols[k].rows.push_back(n);
        for (int d = 0; d < 9; ++d) {
            cols[k].contrib[d].resize(cols[k].rows.size());
            for (std::size_t i = 0; i < cols[k].rows.size(); ++i)
                cols[k].contrib[d][i] = s.value(cols[k].rows[i], k) * diffs[d].value;
        }
    }
    return cols;
}

// Depth-first walk over half of the nonzero difference-vector space: while
// the prefix is all-zero only digits 0..4 (zero plus one representative of
// each +/- pair) are allowed, so exactly one of {u, -u} is visited.
// Maintains row sums, the squared norm and the running pair-count product
// incrementally. Leaf returns false to abort the whole walk.
template <class Leaf>
class HalfSpaceWalker {
public:
    HalfSpaceWalker(const std::vector<ColumnSupport>& cols, int n_rows, Leaf leaf)
        : cols_(cols), leaf_(std::move(leaf)) {
        row_sum_.assign(n_rows, cplx{0.0, 0.0});
        digits_.assign(cols.size(), 0);
        saved_.resize(cols.size());
        for (std::size_t k = 0; k < cols.size(); ++k) saved_[k].resize(cols[k].rows.size());
    }

    // enumerate levels [level, K) given the current prefix state
    bool walk(int level, bool prefix_zero, double ssq, std::int64_t pc_product) {
        if (level == static_cast<int>(cols_.size())) {
            if (prefix_zero) return true;  // skip u = 0
            return leaf_(ssq, pc_product, digits_);
        }
        return walk_level(level, prefix_zero, ssq, pc_product);
    }

    // applies a fixed digit at `level` without enumerating (used to set up
    // parallel chunk prefixes); returns the new squared norm
    double apply(int level, int digit, double ssq) {
        const auto& col = cols_[level];
        for (std::size_t i = 0; i < col.rows.size(); ++i) {
            cplx old = row_sum_[col.rows[i]];
            cplx neu = old + col.contrib[digit][i];
            ssq += std::norm(neu) - std::norm(old);
            row_sum_[col.rows[i]] = neu;
        }
        digits_[level] = digit;
        return ssq;
    }

private:
    bool walk_level(int level, bool prefix_zero, double ssq, std::int64_t pc_product) {
        const auto& diffs = difference_alphabet();
        const auto& col = cols_[level];
        digits_[level] = 0;
        if (!walk(level + 1, prefix_zero, ssq, pc_product * diffs[0].pair_count)) return false;

        auto& saved = saved_[level];
        for (std::size_t i = 0; i < col.rows.size(); ++i) saved[i] = row_sum_[col.rows[i]];
        double base_ssq = ssq;
        for (std::size_t i = 0; i < col.rows.size(); ++i) base_ssq -= std::norm(saved[i]);

        int dmax = prefix_zero ? 4 : 8;
        bool keep_going = true;
        for (int d = 1; d <= dmax && keep_going; ++d) {
            double s2 = base_ssq;
            for (std::size_t i = 0; i < col.rows.size(); ++i) {
                cplx neu = saved[i] + col.contrib[d][i];
                row_sum_[col.rows[i]] = neu;
                s2 += std::norm(neu);
            }
            digits_[level] = d;
            keep_going = walk(level + 1, false, s2, pc_product * diffs[d].pair_count);
        }
        for (std::size_t i = 0; i < col.rows.size(); ++i) row_sum_[col.rows[i]] = saved[i];
        digits_[level] = 0;
        return keep_going;
    }

    const std::vector<ColumnSupport>& cols_;
    Leaf leaf_;
    std::vector<cplx> row_sum_;
    std::vector<int> digits_;
    std::vector<std::vector<cplx>> saved_;
};

// chunk prefixes for parallel enumeration (first one or two digits)
std::vector<std::vector<int>> chunk_prefixes(int k_cols) {
    std::vector<std::vector<int>> chunks;
    if (k_cols < 3) {
        for (int d1 = 0; d1 <= (k_cols == 1 ? 4 : 4); ++d1) chunks.push_back({d1});
        return chunks;
    }
    for (int d1 = 0; d1 <= 4; ++d1) {
        int d2max = (d1 == 0) ? 4 : 8;
        for (int d2 = 0; d2 <= d2max; ++d2) chunks.push_back({d1, d2});
    }
    return chunks;
}

void check_cap(const SignatureMatrix& s, int cap) {
    if (s.cols() > cap)
        throw enumeration_limit_error("difference-vector enumeration over K=" + std::to_string(s.cols()) +
                                      " users exceeds cap " + std::to_string(cap));
}

struct MinAccum {
    double best_ssq = std::numeric_limits<double>::infinity();
    std::vector<int> argmin;

    void offer(double ssq, const std::vector<int>& digits) {
        if (ssq < best_ssq || (ssq == best_ssq && digits < argmin)) {
            best_ssq = ssq;
            argmin = digits;
        }
    }
};

// fuzzy bucket insert: distances within kBucketTol share a bucket keyed by
// the first-seen representative
void bucket_add(std::map<double, std::int64_t>& buckets, double d, std::int64_t w) {
    auto it = buckets.lower_bound(d - kBucketTol);
    if (it != buckets.end() && std::abs(it->first - d) <= kBucketTol) {
        it->second += w;
        return;
    }
    buckets.emplace(d, w);
}

}  // namespace

double f_distance(const SignatureMatrix& s, std::span<const cplx> u) {
    if (static_cast<int>(u.size()) != s.cols()) throw std::invalid_argument("difference vector length mismatch");
    double ssq = 0.0;
    for (int n = 0; n < s.rows(); ++n) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < s.cols(); ++k)
            if (!s.is_zero(n, k)) acc += s.value(n, k) * u[k];
        ssq += std::norm(acc);
    }
    return std::sqrt(ssq);
}

DminResult min_distance(const SignatureMatrix& s, int cap) {
    check_cap(s, cap);
    auto cols = build_supports(s);
    auto chunks = chunk_prefixes(s.cols());
    std::vector<MinAccum> partial(chunks.size());

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < chunks.size(); ++c) {
        MinAccum& acc = partial[c];
        auto leaf = [&acc](double ssq, std::int64_t, const std::vector<int>& digits) {
            acc.offer(ssq, digits);
            return true;
        };
        HalfSpaceWalker walker(cols, s.rows(), leaf);
        const auto& prefix = chunks[c];
        double ssq = 0.0;
        bool zero_prefix = true;
        for (std::size_t l = 0; l < prefix.size(); ++l) {
            ssq = walker.apply(static_cast<int>(l), prefix[l], ssq);
            zero_prefix = zero_prefix && prefix[l] == 0;
        }
        if (static_cast<int>(prefix.size()) == s.cols()) {
            if (!zero_prefix) acc.offer(ssq, prefix);
        } else {
            walker.walk(static_cast<int>(prefix.size()), zero_prefix, ssq, 1);
        }
    }

    MinAccum total;
    for (const auto& p : partial)
        if (!p.argmin.empty()) total.offer(p.best_ssq, p.argmin);
    return {std::sqrt(total.best_ssq), total.argmin};
}

DminResult min_distance_serial(const SignatureMatrix& s, int cap) {
    check_cap(s, cap);
    const auto& diffs = difference_alphabet();
    const int K = s.cols();
    std::vector<int> digits(K, 0);
    std::vector<cplx> u(K);
    DminResult best{std::numeric_limits<double>::infinity(), {}};
    for (;;) {
        // advance mixed-radix counter
        int pos = 0;
        while (pos < K && digits[pos] == 8) digits[pos++] = 0;
        if (pos == K) break;
        ++digits[pos];
        for (int k = 0; k < K; ++k) u[k] = diffs[digits[k]].value;
        double d = f_distance(s, u);
        if (d < best.d_min) best = {d, digits};
    }
    return best;
}

ThresholdedDmin min_distance_at_least(const SignatureMatrix& s, double abort_below, int cap) {
    check_cap(s, cap);
    auto cols = build_supports(s);
    auto chunks = chunk_prefixes(s.cols());
    const double thr_ssq = abort_below * abort_below;
    std::atomic<bool> stop{false};
    std::atomic<double> witness{std::numeric_limits<double>::infinity()};
    std::vector<double> partial(chunks.size(), std::numeric_limits<double>::infinity());

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < chunks.size(); ++c) {
        if (stop.load(std::memory_order_relaxed)) continue;
        double local_best = std::numeric_limits<double>::infinity();
        auto leaf = [&](double ssq, std::int64_t, const std::vector<int>&) {
            if (ssq < local_best) local_best = ssq;
            if (ssq <= thr_ssq) {
                witness.store(std::sqrt(ssq), std::memory_order_relaxed);
                stop.store(true, std::memory_order_relaxed);
                return false;
            }
            return !stop.load(std::memory_order_relaxed);
        };
        HalfSpaceWalker walker(cols, s.rows(), leaf);
        const auto& prefix = chunks[c];
        double ssq = 0.0;
        bool zero_prefix = true;
        for (std::size_t l = 0; l < prefix.size(); ++l) {
            ssq = walker.apply(static_cast<int>(l), prefix[l], ssq);
            zero_prefix = zero_prefix && prefix[l] == 0;
        }
        if (static_cast<int>(prefix.size()) == s.cols()) {
            if (!zero_prefix) leaf(ssq, 1, prefix);
        } else {
            walker.walk(static_cast<int>(prefix.size()), zero_prefix, ssq, 1);
        }
        partial[c] = local_best;
    }

    if (stop.load()) return {witness.load(), false};
    double best = std::numeric_limits<double>::infinity();
    for (double p : partial) best = std::min(best, p);
    return {std::sqrt(best), true};
}

double DistanceEnumerator::a0() const {
    for (const auto& t : terms)
        if (t.d <= kBucketTol) return static_cast<double>(t.num) / static_cast<double>(denom);
    return 0.0;
}

double DistanceEnumerator::sum_coeffs() const {
    std::int64_t n = 0;
    for (const auto& t : terms) n += t.num;
    return static_cast<double>(n) / static_cast<double>(denom);
}

double DistanceEnumerator::min_positive_distance() const {
    for (const auto& t : terms)
        if (t.d > kBucketTol) return t.d;
    return std::numeric_limits<double>::infinity();
}

DistanceEnumerator distance_enumerator(const SignatureMatrix& s, int cap) {
    check_cap(s, cap);
    auto cols = build_supports(s);
    auto chunks = chunk_prefixes(s.cols());
    std::vector<std::map<double, std::int64_t>> partial(chunks.size());

#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < chunks.size(); ++c) {
        auto& buckets = partial[c];
        auto leaf = [&buckets](double ssq, std::int64_t pc, const std::vector<int>&) {
            bucket_add(buckets, std::sqrt(std::max(0.0, ssq)), 2 * pc);  // u and -u
            return true;
        };
        HalfSpaceWalker walker(cols, s.rows(), leaf);
        const auto& prefix = chunks[c];
        double ssq = 0.0;
        bool zero_prefix = true;
        std::int64_t pc = 1;
        const auto& diffs = difference_alphabet();
        for (std::size_t l = 0; l < prefix.size(); ++l) {
            ssq = walker.apply(static_cast<int>(l), prefix[l], ssq);
            zero_prefix = zero_prefix && prefix[l] == 0;
            pc *= diffs[prefix[l]].pair_count;
        }
        if (static_cast<int>(prefix.size()) == s.cols()) {
            if (!zero_prefix) leaf(ssq, pc, prefix);
        } else {
            walker.walk(static_cast<int>(prefix.size()), zero_prefix, ssq, pc);
        }
    }

    std::map<double, std::int64_t> merged;
    for (const auto& p : partial)
        for (const auto& [d, w] : p) bucket_add(merged, d, w);

    DistanceEnumerator out;
    out.denom = 1;
    for (int k = 0; k < s.cols(); ++k) out.denom *= 4;
    for (const auto& [d, w] : merged) out.terms.push_back({d, w});
    return out;
}

DistanceEnumerator distance_enumerator_serial(const SignatureMatrix& s, int cap) {
    check_cap(s, cap);
    const auto& diffs = difference_alphabet();
    const int K = s.cols();
    std::vector<int> digits(K, 0);
    std::vector<cplx> u(K);
    std::map<double, std::int64_t> buckets;
    for (;;) {
        int pos = 0;
        while (pos < K && digits[pos] == 8) digits[pos++] = 0;
        if (pos == K) break;
        ++digits[pos];
        std::int64_t pc = 1;
        for (int k = 0; k < K; ++k) {
            u[k] = diffs[digits[k]].value;
            pc *= diffs[digits[k]].pair_count;
        }
        bucket_add(buckets, f_distance(s, u), pc);
    }
    DistanceEnumerator out;
    out.denom = 1;
    for (int k = 0; k < K; ++k) out.denom *= 4;
    for (const auto& [d, w] : buckets) out.terms.push_back({d, w});
    return out;
}

double q_function(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double union_bound(const DistanceEnumerator& a, double n0) {
    if (n0 <= 0.0) throw std::invalid_argument("noise variance must be positive");
    double bound = 0.0;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (a.terms[i].d <= kBucketTol) bound += a.coeff(i);
        else bound += a.coeff(i) * q_function(a.terms[i].d / std::sqrt(2.0 * n0));
    }
    return bound;
}

double upper_bound_spreading(const SignatureMatrix& s) {
    return std::sqrt(2.0 * s.min_column_weight());
}

double lower_bound_regular(const FactorGraph& g, int q, const std::map<int, double>& delta_table) {
    for (int n = 0; n < g.n_code(); ++n)
        if (static_cast<int>(g.code_neighbors(n).size()) != q)
            throw std::invalid_argument("graph is not code-node regular of the stated degree");
    if (!delta_table.count(1) || !delta_table.count(q))
        throw std::invalid_argument("delta table must contain degrees 1 and q");
    if (g.n_code() > 24) throw enumeration_limit_error("subset enumeration over more than 24 code nodes");

    const double d1 = delta_table.at(1);
    const double dq = delta_table.at(q);
    double best = std::numeric_limits<double>::infinity();
    const std::uint32_t full = (1u << g.n_code()) - 1;
    for (std::uint32_t mask = 0; mask < full; ++mask) {  // proper subsets only
        std::vector<int> alpha;
        for (int n = 0; n < g.n_code(); ++n)
            if (mask & (1u << n)) alpha.push_back(n);
        DegreeProfile p = g.delete_around_code_nodes(alpha);
        // only subsets leaving at least one data node arise in the proof of
        // the bound; skipping the rest keeps it from degenerating to zero
        if (p.n1 + p.n2 == 0) continue;
        best = std::min(best, std::sqrt(p.n1 * d1 * d1 + p.n2 * dq * dq));
    }
    return best;
}

}  // namespace scdma
