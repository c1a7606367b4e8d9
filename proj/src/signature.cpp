#include "scdma/signature.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <stdexcept>

#include <json.hpp>

namespace scdma {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPhaseTol = 1e-9;
}  // namespace

double normalize_angle(double theta) {
    theta = std::fmod(theta, kTwoPi);
    if (theta < 0) theta += kTwoPi;
    if (kTwoPi - theta < 1e-12) theta = 0.0;  // snap wrap-around
    return theta;
}

double parse_angle_string(const std::string& s) {
    static const std::regex pi_form(
        R"(^\s*(-?)\s*(\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$)",
        std::regex::icase);
    std::smatch m;
    if (std::regex_match(s, m, pi_form)) {
        double coef = m[2].str().empty() ? 1.0 : std::stod(m[2].str());
        if (m[1].matched && m[1].str() == "-") coef = -coef;
        double div = m[3].str().empty() ? 1.0 : std::stod(m[3].str());
        if (div == 0.0) throw std::invalid_argument("angle divisor is zero: " + s);
        return coef * kPi / div;
    }
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("cannot parse angle: \"" + s + "\"");
    }
}

double parse_angle(const nlohmann::json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_angle_string(v.get<std::string>());
    throw std::invalid_argument("angle must be a number or a string like \"pi/6\"");
}

SignatureMatrix::SignatureMatrix(int n_rows, int n_cols, std::vector<std::optional<double>> entries)
    : n_rows_(n_rows), n_cols_(n_cols), entries_(std::move(entries)) {
    if (n_rows_ <= 0 || n_cols_ <= 0) throw std::invalid_argument("signature matrix dimensions must be positive");
    if (entries_.size() != static_cast<std::size_t>(n_rows_) * n_cols_)
        throw std::invalid_argument("entry grid does not match dimensions");
    for (auto& e : entries_)
        if (e) e = normalize_angle(*e);
    for (int n = 0; n < n_rows_; ++n) {
        bool nonzero = false;
        for (int k = 0; k < n_cols_; ++k) nonzero |= !is_zero(n, k);
        if (!nonzero) throw std::invalid_argument("all-zero row (degenerate resource)");
    }
    for (int k = 0; k < n_cols_; ++k) {
        bool nonzero = false;
        for (int n = 0; n < n_rows_; ++n) nonzero |= !is_zero(n, k);
        if (!nonzero) throw std::invalid_argument("all-zero column (degenerate user)");
    }
}

cplx SignatureMatrix::value(int n, int k) const {
    const auto& e = entries_[idx(n, k)];
    if (!e) return {0.0, 0.0};
    return {std::cos(*e), std::sin(*e)};
}

std::vector<int> SignatureMatrix::column_weights() const {
    std::vector<int> w(n_cols_, 0);
    for (int k = 0; k < n_cols_; ++k)
        for (int n = 0; n < n_rows_; ++n)
            if (!is_zero(n, k)) ++w[k];
    return w;
}

int SignatureMatrix::min_column_weight() const {
    auto w = column_weights();
    int m = w[0];
    for (int x : w) m = std::min(m, x);
    return m;
}

std::vector<cplx> SignatureMatrix::encode(std::span<const cplx> x) const {
    if (static_cast<int>(x.size()) != n_cols_) throw std::invalid_argument("symbol vector length mismatch");
    std::vector<cplx> c(n_rows_, cplx{0.0, 0.0});
    for (int n = 0; n < n_rows_; ++n)
        for (int k = 0; k < n_cols_; ++k)
            if (!is_zero(n, k)) c[n] += value(n, k) * x[k];
    return c;
}

SignatureMatrix SignatureMatrix::row_rotate(std::span<const double> theta) const {
    if (static_cast<int>(theta.size()) != n_rows_) throw std::invalid_argument("rotation vector length mismatch");
    auto e = entries_;
    for (int n = 0; n < n_rows_; ++n)
        for (int k = 0; k < n_cols_; ++k)
            if (e[idx(n, k)]) e[idx(n, k)] = normalize_angle(*e[idx(n, k)] + theta[n]);
    return SignatureMatrix(n_rows_, n_cols_, std::move(e));
}

SignatureMatrix SignatureMatrix::column_rotate(std::span<const int> m) const {
    if (static_cast<int>(m.size()) != n_cols_) throw std::invalid_argument("rotation vector length mismatch");
    auto e = entries_;
    for (int n = 0; n < n_rows_; ++n)
        for (int k = 0; k < n_cols_; ++k)
            if (e[idx(n, k)]) e[idx(n, k)] = normalize_angle(*e[idx(n, k)] + m[k] * (kPi / 2.0));
    return SignatureMatrix(n_rows_, n_cols_, std::move(e));
}

SignatureMatrix SignatureMatrix::concatenate(const SignatureMatrix& below) const {
    if (below.cols() != n_cols_) throw std::invalid_argument("concatenation requires equal column counts");
    auto e = entries_;
    e.insert(e.end(), below.entries_.begin(), below.entries_.end());
    return SignatureMatrix(n_rows_ + below.rows(), n_cols_, std::move(e));
}

SignatureMatrix SignatureMatrix::permute_columns(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != n_cols_) throw std::invalid_argument("permutation length mismatch");
    std::vector<char> hit(n_cols_, 0);
    for (int p : perm) {
        if (p < 0 || p >= n_cols_ || hit[p]) throw std::invalid_argument("not a permutation");
        hit[p] = 1;
    }
    std::vector<std::optional<double>> e(entries_.size());
    for (int n = 0; n < n_rows_; ++n)
        for (int k = 0; k < n_cols_; ++k)
            e[idx(n, k)] = entries_[idx(n, perm[k])];
    return SignatureMatrix(n_rows_, n_cols_, std::move(e));
}

SignatureMatrix SignatureMatrix::canonicalize(const std::vector<Edge>& phi) const {
    FactorGraph g = graph_from_signature(*this);
    if (!g.is_connected()) throw std::invalid_argument("canonicalize requires a connected factor graph");

    std::vector<std::vector<char>> in_phi(n_rows_, std::vector<char>(n_cols_, 0));
    for (const Edge& e : phi) {
        if (!g.has_edge(e.code, e.data)) throw std::invalid_argument("phi edge not present in graph");
        in_phi[e.code][e.data] = 1;
    }
    // removing phi must leave a spanning tree
    {
        std::vector<Edge> rest;
        for (const Edge& e : g.edges())
            if (!in_phi[e.code][e.data]) rest.push_back(e);
        FactorGraph tree(n_rows_, n_cols_, rest);
        if (!tree.is_tree()) throw std::invalid_argument("phi removal does not yield a spanning tree");
    }

    // row-rotation pass (Appendix C steps i-iii, with phi edges excluded
    // from the propagation)
    std::vector<char> determined(n_rows_, 0);
    std::vector<double> row_shift(n_rows_, 0.0);
    auto shifted = [&](int n, int k) { return normalize_angle(theta(n, k) + row_shift[n]); };

    for (int n = 0; n < n_rows_; ++n)
        if (!is_zero(n, 0) && !in_phi[n][0]) {
            row_shift[n] = -theta(n, 0);
            determined[n] = 1;
        }
    for (;;) {
        int m = -1, j = -1;
        bool undetermined_left = false;
        for (int k = 0; k < n_cols_ && m < 0; ++k) {
            int det = -1, undet = 0;
            for (int n = 0; n < n_rows_; ++n) {
                if (is_zero(n, k) || in_phi[n][k]) continue;
                if (determined[n]) det = n;
                else ++undet;
            }
            if (undet > 0) undetermined_left = true;
            if (det >= 0 && undet > 0) {
                m = k;
                j = det;
            }
        }
        if (m < 0) {
            if (undetermined_left) throw std::logic_error("canonicalization stalled on a tree; phi invalid");
            break;
        }
        double target = shifted(j, m);
        for (int n = 0; n < n_rows_; ++n)
            if (!is_zero(n, m) && !in_phi[n][m] && !determined[n]) {
                row_shift[n] = target - theta(n, m);
                determined[n] = 1;
            }
    }

    // fold each column's common phase into [0, pi/2) by pi/2 rotations
    std::vector<double> col_shift(n_cols_, 0.0);
    for (int k = 0; k < n_cols_; ++k) {
        double common = -1.0;
        for (int n = 0; n < n_rows_; ++n)
            if (!is_zero(n, k) && !in_phi[n][k]) {
                double t = shifted(n, k);
                if (common < 0) common = t;
                else if (std::abs(t - common) > kPhaseTol && std::abs(std::abs(t - common) - kTwoPi) > kPhaseTol)
                    throw std::logic_error("non-phi entries of a column disagree after canonicalization");
            }
        int folds = static_cast<int>(std::floor(common / (kPi / 2.0) + kPhaseTol));
        col_shift[k] = -folds * (kPi / 2.0);
    }

    std::vector<std::optional<double>> out(entries_.size());
    for (int n = 0; n < n_rows_; ++n)
        for (int k = 0; k < n_cols_; ++k)
            if (!is_zero(n, k)) {
                double t = normalize_angle(theta(n, k) + row_shift[n] + col_shift[k]);
                if (!in_phi[n][k] && std::abs(t - kPi / 2.0) < kPhaseTol) t = 0.0;  // half-open fold boundary
                if (t < 1e-12) t = 0.0;
                out[idx(n, k)] = t;
            }
    return SignatureMatrix(n_rows_, n_cols_, std::move(out));
}

nlohmann::json SignatureMatrix::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (int n = 0; n < n_rows_; ++n)
        for (int k = 0; k < n_cols_; ++k)
            if (!is_zero(n, k))
                entries.push_back({{"row", n + 1}, {"col", k + 1}, {"theta", theta(n, k)}});
    return {{"n", n_rows_}, {"k", n_cols_}, {"entries", entries}};
}

SignatureMatrix SignatureMatrix::from_json(const nlohmann::json& j) {
    int n = j.at("n").get<int>();
    int k = j.at("k").get<int>();
    if (n <= 0 || k <= 0) throw std::invalid_argument("matrix dimensions must be positive");
    std::vector<std::optional<double>> e(static_cast<std::size_t>(n) * k);
    for (const auto& ent : j.at("entries")) {
        int row = ent.at("row").get<int>();
        int col = ent.at("col").get<int>();
        if (row < 1 || row > n || col < 1 || col > k)
            throw std::invalid_argument("entry index out of range (indices are 1-based)");
        auto& slot = e[static_cast<std::size_t>(row - 1) * k + (col - 1)];
        if (slot) throw std::invalid_argument("duplicate entry in matrix JSON");
        slot = parse_angle(ent.at("theta"));
    }
    return SignatureMatrix(n, k, std::move(e));
}

bool SignatureMatrix::operator==(const SignatureMatrix& other) const {
    return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ && entries_ == other.entries_;
}

}  // namespace scdma
