#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "scdma/constellation.hpp"
#include "scdma/graph.hpp"

namespace scdma {

// Normalizes an angle into [0, 2*pi).
double normalize_angle(double theta);

// Parses an angle given as a JSON number (radians) or a string such as
// "pi/6", "0.1431pi", "-pi/3", "2pi/3".
double parse_angle(const nlohmann::json& v);
double parse_angle_string(const std::string& s);

// N x K sparse matrix of zero / unit-modulus entries. Immutable; all
// operations return fresh values. No all-zero row or column is permitted.
class SignatureMatrix {
public:
    // entries row-major; nullopt marks a zero entry, otherwise the phase in radians
    SignatureMatrix(int n_rows, int n_cols, std::vector<std::optional<double>> entries);

    int rows() const { return n_rows_; }
    int cols() const { return n_cols_; }
    double load() const { return static_cast<double>(n_cols_) / n_rows_; }

    bool is_zero(int n, int k) const { return !entries_[idx(n, k)].has_value(); }
    double theta(int n, int k) const { return *entries_[idx(n, k)]; }
    cplx value(int n, int k) const;

    std::vector<int> column_weights() const;
    int min_column_weight() const;

    // c_n = sum_k s_{n,k} x_k
    std::vector<cplx> encode(std::span<const cplx> x) const;

    // s'_{n,k} = e^{i theta_n} s_{n,k}
    SignatureMatrix row_rotate(std::span<const double> theta) const;
    // s*_{n,k} = e^{i m_k pi/2} s_{n,k}
    SignatureMatrix column_rotate(std::span<const int> m) const;
    // rows of `below` appended under this matrix; column counts must match
    SignatureMatrix concatenate(const SignatureMatrix& below) const;
    SignatureMatrix permute_columns(std::span<const int> perm) const;

    // Rewrites the labeling into the canonical family: every non-phi edge
    // in column k carries a common phase theta_k, theta_0 = 0 and
    // theta_k in [0, pi/2); phi edges keep free phases in [0, 2pi). Row
    // and pi/2-column rotations only, so the distance enumerator is
    // unchanged. phi must be a spanning-tree complement of the graph
    // (empty for a tree). Throws for disconnected graphs.
    SignatureMatrix canonicalize(const std::vector<Edge>& phi) const;

    nlohmann::json to_json() const;
    static SignatureMatrix from_json(const nlohmann::json& j);

    bool operator==(const SignatureMatrix& other) const;

private:
    int idx(int n, int k) const { return n * n_cols_ + k; }
    int n_rows_, n_cols_;
    std::vector<std::optional<double>> entries_;
};

}  // namespace scdma
