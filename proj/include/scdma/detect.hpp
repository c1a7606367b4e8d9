#pragma once

#include <array>
#include <optional>
#include <vector>

#include "scdma/constellation.hpp"
#include "scdma/distance.hpp"
#include "scdma/rng.hpp"
#include "scdma/signature.hpp"

namespace scdma {

// One received word: y = h * encode(S, x) + z, z_n ~ CN(0, n0). Detectors
// work on y' = y / h with n0' = n0 / |h|^2 (h known at the receiver).
struct Observation {
    std::vector<cplx> y;
    cplx h{1.0, 0.0};
    double n0 = 0.0;
};

struct Decision {
    std::vector<int> symbols;  // indices into qpsk_alphabet()
    std::optional<std::vector<std::array<double, 4>>> posteriors;
    bool tie_flag = false;
};

// Exhaustive minimum-distance detection over all 4^K symbol vectors.
// Exact ties (squared-distance difference < 1e-12) are resolved uniformly
// at random from the provided generator.
Decision ml_detect(const SignatureMatrix& s, const Observation& obs, Rng& rng,
                   int cap = kDefaultEnumCap);

// Flooding belief propagation: `iters` rounds of code-node updates (sum of
// Gaussian likelihoods over the 4^(deg-1) interferer combinations, weighted
// by incoming messages) followed by data-node updates (product of incoming
// messages excluding the target edge). Log-domain with max-rescaling;
// every message is renormalized. Hard decision maximizes the per-user
// posterior with deterministic lowest-index tie-break.
Decision bp_detect(const SignatureMatrix& s, const Observation& obs, int iters);

// Same schedule, but each code-node update treats the interference as a
// complex Gaussian with mean mu = sum_{j != k} s_{n,j} E[x_j] and variance
// sum_{j != k} (1 - |E[x_j]|^2) + n0'.
Decision abp_detect(const SignatureMatrix& s, const Observation& obs, int iters);

// Brute-force P(x_k = alpha | y) by summation over all 4^K vectors.
std::vector<std::array<double, 4>> exact_marginals(const SignatureMatrix& s,
                                                   const Observation& obs,
                                                   int cap = kDefaultEnumCap);

}  // namespace scdma
