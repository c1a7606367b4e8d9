#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "scdma/detect.hpp"
#include "scdma/signature.hpp"

namespace scdma {

// y = h * encode(S, x) + z with z_n ~ CN(0, n0); x given as alphabet indices.
Observation transmit(const SignatureMatrix& s, std::span<const int> x, cplx h, double n0, Rng& rng);

// Eb = (sum_k w_k) / (2K): unit energy per nonzero signature entry, two
// bits per QPSK symbol, |h| = 1. N0 = Eb * 10^(-dB/10).
double eb_n0_to_n0(const SignatureMatrix& s, double eb_n0_db);

enum class DetectorKind { ml, bp, abp };
std::string detector_name(DetectorKind d);
DetectorKind detector_from_name(const std::string& name);

struct SnrPoint {
    double eb_n0_db;
    double n0;
    std::int64_t trials;
    std::int64_t word_errors;
    std::int64_t symbol_errors;

    double wer() const { return static_cast<double>(word_errors) / static_cast<double>(trials); }
    // normal-approximation 95% half-width
    double wer_ci95() const;
};

struct SimulationReport {
    nlohmann::json matrix_json;
    std::string detector;
    int iters;
    std::uint64_t seed;
    std::int64_t max_trials;
    bool early_stop;
    std::vector<SnrPoint> points;
    std::vector<double> union_bounds;  // one per point, same N0
    double wall_seconds = 0.0;

    // columns: eb_n0_db, trials, word_errors, wer, wer_ci95, union_bound
    std::string to_csv() const;
    // full configuration + per-point results, for reproducibility
    nlohmann::json to_json() const;
};

// Monte-Carlo WER sweep with h = 1. Each trial uses its own substream
// keyed by (seed, snr index, trial index), drawn in the order: symbols,
// noise, ML tie-breaks — results are independent of thread count. With
// early_stop, trials end at the first multiple of 1024 where at least 400
// word errors have accumulated.
SimulationReport run_wer(const SignatureMatrix& s, DetectorKind detector, int iters,
                         std::span<const double> eb_n0_db_grid, std::int64_t trials,
                         std::uint64_t seed, bool early_stop = true);

}  // namespace scdma
