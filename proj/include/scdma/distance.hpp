#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "scdma/constellation.hpp"
#include "scdma/graph.hpp"
#include "scdma/signature.hpp"

namespace scdma {

// Enumeration over the 9^K difference-vector space is exact but
// exponential; larger K must be opted into explicitly by the caller.
inline constexpr int kDefaultEnumCap = 8;

// Thrown when a requested exhaustive computation exceeds its cap.
class enumeration_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// F(S,u) = sqrt(sum_n |sum_k s_{n,k} u_k|^2)
double f_distance(const SignatureMatrix& s, std::span<const cplx> u);

struct DminResult {
    double d_min;
    std::vector<int> argmin_u;  // indices into difference_alphabet()
};

// Exact minimum of F(S,u) over nonzero difference vectors. Exploits
// F(S,u) = F(S,-u) to halve the search space.
DminResult min_distance(const SignatureMatrix& s, int cap = kDefaultEnumCap);
DminResult min_distance_serial(const SignatureMatrix& s, int cap = kDefaultEnumCap);

// Thresholded variant for optimizer inner loops: `value` is the exact
// minimum when exact == true; otherwise enumeration stopped at the first
// distance <= abort_below and `value` is that witness.
struct ThresholdedDmin {
    double value;
    bool exact;
};
ThresholdedDmin min_distance_at_least(const SignatureMatrix& s, double abort_below,
                                      int cap = kDefaultEnumCap);

// One spectrum term: distance d with average multiplicity num / 4^K.
struct EnumTerm {
    double d;
    std::int64_t num;
};

struct DistanceEnumerator {
    std::vector<EnumTerm> terms;  // ascending d; includes a d=0 term only when A(0) > 0
    std::int64_t denom;           // 4^K

    double coeff(std::size_t i) const { return static_cast<double>(terms[i].num) / static_cast<double>(denom); }
    double a0() const;
    double sum_coeffs() const;  // equals 4^K - 1 for any valid matrix
    double min_positive_distance() const;
};

// A(d) over difference vectors: each u != 0 contributes
// prod_k pair_count(u_k) to the bucket at F(S,u). Distances are merged
// within absolute 1e-9; multiplicities are exact integers over 4^K.
DistanceEnumerator distance_enumerator(const SignatureMatrix& s, int cap = kDefaultEnumCap);
DistanceEnumerator distance_enumerator_serial(const SignatureMatrix& s, int cap = kDefaultEnumCap);

// Q(x) = 0.5 * erfc(x / sqrt(2))
double q_function(double x);

// Union bound on ML word error rate: A(0) + sum_{d>0} A(d) Q(d / sqrt(2 N0)).
// May exceed 1; callers clamp for display only.
double union_bound(const DistanceEnumerator& a, double n0);

// Corollary bound sqrt(2 w) with w the minimum effective spreading length.
double upper_bound_spreading(const SignatureMatrix& s);

// Lower bound for code-node-regular graphs of degree q whose rows are
// optimal single-resource vectors: min over proper subsets alpha of
// sqrt(n1 * delta_1^2 + n2 * delta_q^2). delta_table must provide degrees
// 1 and q.
double lower_bound_regular(const FactorGraph& g, int q, const std::map<int, double>& delta_table);

}  // namespace scdma
