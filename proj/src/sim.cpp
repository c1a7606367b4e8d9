#include "scdma/sim.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "scdma/distance.hpp"

namespace scdma {

namespace {
constexpr std::int64_t kChunk = 1024;
constexpr std::int64_t kEarlyStopErrors = 400;
}  // namespace

Observation transmit(const SignatureMatrix& s, std::span<const int> x, cplx h, double n0, Rng& rng) {
    if (static_cast<int>(x.size()) != s.cols()) throw std::invalid_argument("symbol vector length mismatch");
    if (n0 < 0.0) throw std::invalid_argument("noise variance must be nonnegative");
    const auto& alph = qpsk_alphabet();
    std::vector<cplx> symbols(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] < 0 || x[k] > 3) throw std::invalid_argument("symbol index out of range");
        symbols[k] = alph[x[k]];
    }
    Observation obs;
    obs.h = h;
    obs.n0 = n0;
    obs.y = s.encode(symbols);
    for (auto& yn : obs.y) {
        yn *= h;
        if (n0 > 0.0) yn += rng.cgaussian(n0);
    }
    return obs;
}

double eb_n0_to_n0(const SignatureMatrix& s, double eb_n0_db) {
    auto w = s.column_weights();
    double eb = static_cast<double>(std::accumulate(w.begin(), w.end(), 0)) / (2.0 * s.cols());
    return eb * std::pow(10.0, -eb_n0_db / 10.0);
}

std::string detector_name(DetectorKind d) {
    switch (d) {
        case DetectorKind::ml: return "ml";
        case DetectorKind::bp: return "bp";
        case DetectorKind::abp: return "abp";
    }
    throw std::logic_error("unreachable");
}

DetectorKind detector_from_name(const std::string& name) {
    if (name == "ml") return DetectorKind::ml;
    if (name == "bp") return DetectorKind::bp;
    if (name == "abp") return DetectorKind::abp;
    throw std::invalid_argument("unknown detector: " + name);
}

double SnrPoint::wer_ci95() const {
    double p = wer();
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::string SimulationReport::to_csv() const {
    std::ostringstream out;
    out << "eb_n0_db,trials,word_errors,wer,wer_ci95,union_bound\n";
    out.precision(10);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const SnrPoint& p = points[i];
        out << p.eb_n0_db << ',' << p.trials << ',' << p.word_errors << ',' << p.wer() << ','
            << p.wer_ci95() << ',' << union_bounds[i] << '\n';
    }
    return out.str();
}

nlohmann::json SimulationReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        pts.push_back({{"eb_n0_db", points[i].eb_n0_db},
                       {"n0", points[i].n0},
                       {"trials", points[i].trials},
                       {"word_errors", points[i].word_errors},
                       {"symbol_errors", points[i].symbol_errors},
                       {"wer", points[i].wer()},
                       {"wer_ci95", points[i].wer_ci95()},
                       {"union_bound", union_bounds[i]}});
    }
    return {{"matrix", matrix_json}, {"detector", detector},       {"iters", iters},
            {"seed", seed},          {"max_trials", max_trials},   {"early_stop", early_stop},
            {"points", pts},         {"wall_seconds", wall_seconds}};
}

SimulationReport run_wer(const SignatureMatrix& s, DetectorKind detector, int iters,
                         std::span<const double> eb_n0_db_grid, std::int64_t trials,
                         std::uint64_t seed, bool early_stop) {
    if (trials < 1) throw std::invalid_argument("at least one trial required");
    auto t0 = std::chrono::steady_clock::now();

    SimulationReport report;
    report.matrix_json = s.to_json();
    report.detector = detector_name(detector);
    report.iters = iters;
    report.seed = seed;
    report.max_trials = trials;
    report.early_stop = early_stop;

    DistanceEnumerator enumerator = distance_enumerator(s);
    const int K = s.cols();

    for (std::size_t si = 0; si < eb_n0_db_grid.size(); ++si) {
        const double n0 = eb_n0_to_n0(s, eb_n0_db_grid[si]);
        std::int64_t done = 0, word_errors = 0, symbol_errors = 0;
        while (done < trials) {
            const std::int64_t chunk = std::min(kChunk, trials - done);
            std::int64_t we = 0, se = 0;
#pragma omp parallel for schedule(static) reduction(+ : we, se)
            for (std::int64_t t = done; t < done + chunk; ++t) {
                Rng rng(mix_key(seed, si, static_cast<std::uint64_t>(t)));
                std::vector<int> x(K);
                for (int k = 0; k < K; ++k) x[k] = rng.uniform_int(4);
                Observation obs = transmit(s, x, cplx{1.0, 0.0}, n0, rng);
                Decision dec;
                switch (detector) {
                    case DetectorKind::ml: dec = ml_detect(s, obs, rng); break;
                    case DetectorKind::bp: dec = bp_detect(s, obs, iters); break;
                    case DetectorKind::abp: dec = abp_detect(s, obs, iters); break;
                }
                int wrong = 0;
                for (int k = 0; k < K; ++k) wrong += dec.symbols[k] != x[k];
                se += wrong;
                we += wrong > 0;
            }
            word_errors += we;
            symbol_errors += se;
            done += chunk;
            if (early_stop && word_errors >= kEarlyStopErrors) break;
        }
        report.points.push_back({eb_n0_db_grid[si], n0, done, word_errors, symbol_errors});
        report.union_bounds.push_back(union_bound(enumerator, n0));
    }

    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace scdma
