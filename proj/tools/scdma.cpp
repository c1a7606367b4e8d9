#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scdma/design.hpp"
#include "scdma/detect.hpp"
#include "scdma/distance.hpp"
#include "scdma/presets.hpp"
#include "scdma/sim.hpp"

using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitLimit = 4;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

scdma::SignatureMatrix load_matrix(const std::string& path) {
    return scdma::SignatureMatrix::from_json(read_json_file(path));
}

// {"n_code": N, "n_data": K, "edges": [{"code": 1-based, "data": 1-based}]}
scdma::FactorGraph load_graph(const std::string& path) {
    json j = read_json_file(path);
    std::vector<scdma::Edge> edges;
    for (const auto& e : j.at("edges"))
        edges.push_back({e.at("code").get<int>() - 1, e.at("data").get<int>() - 1});
    return scdma::FactorGraph(j.at("n_code").get<int>(), j.at("n_data").get<int>(), std::move(edges));
}

// "a:b:step" inclusive grid
std::vector<double> parse_grid(const std::string& spec) {
    double a, b, step;
    char c1, c2;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0 || b < a)
        throw std::invalid_argument("expected --ebn0 a:b:step with step > 0 and b >= a");
    std::vector<double> grid;
    for (double v = a; v <= b + 1e-9; v += step) grid.push_back(v);
    return grid;
}

std::string enumerator_csv(const scdma::DistanceEnumerator& e) {
    std::ostringstream out;
    out.precision(12);
    out << "d,a_d,num,den\n";
    for (const auto& t : e.terms)
        out << t.d << ',' << static_cast<double>(t.num) / static_cast<double>(e.denom) << ','
            << t.num << ',' << e.denom << '\n';
    return out.str();
}

json enumerator_json(const scdma::DistanceEnumerator& e) {
    json out = json::array();
    for (const auto& t : e.terms) out.push_back({{"d", t.d}, {"num", t.num}, {"den", e.denom}});
    return out;
}

void emit_matrix(const scdma::SignatureMatrix& m, const std::string& out_path) {
    std::string text = m.to_json().dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else write_text(out_path, text);
}

struct Echo {
    std::ostringstream line;
    Echo() { line << "config:"; }
    template <class T>
    Echo& kv(const char* key, const T& value) {
        line << ' ' << key << '=' << value;
        return *this;
    }
    ~Echo() { std::cerr << line.str() << '\n'; }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SCDMA signature matrix design and evaluation"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = library default)");

    std::string out_path;
    std::uint64_t seed = 1;

    // construct
    auto* construct = app.add_subcommand("construct", "emit a code family instance");
    std::string family, preset = "paper";
    int users = 0, q = 1;
    construct->add_option("--family", family, "tree | c1 | c2 | single, or an embedded preset name")
        ->required();
    construct->add_option("--users", users, "number of users K (required unless --family names a preset)");
    construct->add_option("--q", q, "block size for c1/c2");
    construct->add_option("--preset", preset, "phase preset (paper)");
    construct->add_option("--out", out_path, "output matrix JSON (default stdout)");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "search a max-d_min labeling of a graph");
    std::string graph_path;
    std::int64_t budget = 0;
    optimize->add_option("--graph", graph_path, "factor graph JSON")->required();
    optimize->add_option("--budget", budget, "evaluation budget (0 = default)");
    optimize->add_option("--seed", seed, "search seed")->required();
    optimize->add_option("--out", out_path, "output matrix JSON (default stdout)");

    // distance
    auto* distance = app.add_subcommand("distance", "minimum codeword distance of a matrix");
    std::string matrix_path;
    distance->add_option("--matrix", matrix_path, "matrix JSON")->required();

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "distance enumerator of a matrix");
    std::string csv_path;
    enumerate->add_option("--matrix", matrix_path, "matrix JSON")->required();
    enumerate->add_option("--out", out_path, "enumerator JSON (default stdout)");
    enumerate->add_option("--csv", csv_path, "also write a CSV copy");

    // bound
    auto* bound = app.add_subcommand("bound", "union bound over an Eb/N0 grid");
    std::string grid_spec;
    bound->add_option("--matrix", matrix_path, "matrix JSON")->required();
    bound->add_option("--ebn0", grid_spec, "grid a:b:step in dB")->required();
    bound->add_option("--out", out_path, "output CSV (default stdout)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo WER sweep");
    std::string detector_name_opt = "ml";
    int iters = 6;
    std::int64_t trials = 100000;
    bool early_stop = false;
    simulate->add_option("--matrix", matrix_path, "matrix JSON")->required();
    simulate->add_option("--detector", detector_name_opt, "ml | bp | abp");
    simulate->add_option("--iters", iters, "BP iterations");
    simulate->add_option("--ebn0", grid_spec, "grid a:b:step in dB")->required();
    simulate->add_option("--trials", trials, "trials per point");
    simulate->add_option("--seed", seed, "simulation seed")->required();
    simulate->add_flag("--early-stop", early_stop, "stop a point after 400 word errors");
    simulate->add_option("--out", out_path, "report CSV; config sidecar at <out>.json");

    // detect
    auto* detect = app.add_subcommand("detect", "decode received samples");
    std::string samples_path;
    double n0 = 0.0;
    detect->add_option("--matrix", matrix_path, "matrix JSON")->required();
    detect->add_option("--samples", samples_path, "CSV, one word per line: re,im per resource")->required();
    detect->add_option("--detector", detector_name_opt, "ml | bp | abp");
    detect->add_option("--iters", iters, "BP iterations");
    detect->add_option("--n0", n0, "noise variance")->required();
    detect->add_option("--seed", seed, "seed for ML tie-breaks");
    detect->add_option("--out", out_path, "decisions CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        if (construct->parsed()) {
            Echo().kv("subcommand", "construct").kv("family", family).kv("users", users).kv("q", q)
                .kv("preset", preset).kv("out", out_path.empty() ? "-" : out_path);
            if (preset != "paper") throw std::invalid_argument("unknown preset: " + preset);
            scdma::SignatureMatrix m = [&] {
                auto known = scdma::presets::names();
                if (std::find(known.begin(), known.end(), family) != known.end())
                    return scdma::presets::by_name(family);
                if (users < 1) throw std::invalid_argument("--users is required for family " + family);
                if (family == "tree") return scdma::tree_code(users);
                if (family == "single") return scdma::presets::table1_matrix(users);
                if (family == "c1") {
                    if (users == 6 && q == 2) return scdma::presets::block_4x6();
                    if (users == 8 && q == 2) return scdma::presets::block_6x8();
                    throw std::invalid_argument("c1 preset instances: --users 6 --q 2 or --users 8 --q 2");
                }
                if (family == "c2") {
                    if (users == 8 && q == 2) return scdma::presets::chained_4x8();
                    throw std::invalid_argument("c2 preset instance: --users 8 --q 2");
                }
                throw std::invalid_argument("unknown family: " + family);
            }();
            emit_matrix(m, out_path);
        } else if (optimize->parsed()) {
            Echo().kv("subcommand", "optimize").kv("graph", graph_path).kv("budget", budget)
                .kv("seed", seed).kv("out", out_path.empty() ? "-" : out_path);
            scdma::DesignResult r = scdma::optimize(load_graph(graph_path), budget, seed);
            std::cerr << "evaluations=" << r.evaluations << " d_min=" << r.d_min << '\n';
            std::cout.precision(10);
            std::cout << r.d_min << '\n';
            if (!out_path.empty()) emit_matrix(r.matrix, out_path);
        } else if (distance->parsed()) {
            Echo().kv("subcommand", "distance").kv("matrix", matrix_path);
            std::cout.precision(10);
            std::cout << scdma::min_distance(load_matrix(matrix_path)).d_min << '\n';
        } else if (enumerate->parsed()) {
            Echo().kv("subcommand", "enumerate").kv("matrix", matrix_path)
                .kv("out", out_path.empty() ? "-" : out_path).kv("csv", csv_path.empty() ? "-" : csv_path);
            auto e = scdma::distance_enumerator(load_matrix(matrix_path));
            std::string text = enumerator_json(e).dump(2) + "\n";
            if (out_path.empty()) std::cout << text;
            else write_text(out_path, text);
            if (!csv_path.empty()) write_text(csv_path, enumerator_csv(e));
        } else if (bound->parsed()) {
            Echo().kv("subcommand", "bound").kv("matrix", matrix_path).kv("ebn0", grid_spec)
                .kv("out", out_path.empty() ? "-" : out_path);
            scdma::SignatureMatrix m = load_matrix(matrix_path);
            auto e = scdma::distance_enumerator(m);
            std::ostringstream csv;
            csv.precision(10);
            csv << "eb_n0_db,union_bound\n";
            for (double db : parse_grid(grid_spec))
                csv << db << ',' << scdma::union_bound(e, scdma::eb_n0_to_n0(m, db)) << '\n';
            if (out_path.empty()) std::cout << csv.str();
            else write_text(out_path, csv.str());
        } else if (simulate->parsed()) {
            Echo().kv("subcommand", "simulate").kv("matrix", matrix_path)
                .kv("detector", detector_name_opt).kv("iters", iters).kv("ebn0", grid_spec)
                .kv("trials", trials).kv("seed", seed).kv("early_stop", early_stop)
                .kv("out", out_path.empty() ? "-" : out_path);
            scdma::SignatureMatrix m = load_matrix(matrix_path);
            auto grid = parse_grid(grid_spec);
            auto report = scdma::run_wer(m, scdma::detector_from_name(detector_name_opt), iters,
                                         grid, trials, seed, early_stop);
            if (out_path.empty()) {
                std::cout << report.to_csv();
            } else {
                write_text(out_path, report.to_csv());
                write_text(out_path + ".json", report.to_json().dump(2) + "\n");
            }
        } else if (detect->parsed()) {
            Echo().kv("subcommand", "detect").kv("matrix", matrix_path).kv("samples", samples_path)
                .kv("detector", detector_name_opt).kv("iters", iters).kv("n0", n0).kv("seed", seed)
                .kv("out", out_path.empty() ? "-" : out_path);
            scdma::SignatureMatrix m = load_matrix(matrix_path);
            scdma::DetectorKind kind = scdma::detector_from_name(detector_name_opt);
            std::ifstream in(samples_path);
            if (!in) throw std::invalid_argument("cannot open " + samples_path);
            scdma::Rng rng(seed);
            std::ostringstream csv;
            csv << "word";
            for (int k = 1; k <= m.cols(); ++k) csv << ",x" << k;
            csv << ",tie\n";
            std::string line;
            int word = 0;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::istringstream ls(line);
                scdma::Observation obs;
                obs.n0 = n0;
                for (int r = 0; r < m.rows(); ++r) {
                    double re, im;
                    char comma;
                    if (r > 0 && !(ls >> comma)) throw std::invalid_argument("short sample row");
                    if (!(ls >> re >> comma >> im))
                        throw std::invalid_argument("expected 2N comma-separated reals per line");
                    obs.y.push_back({re, im});
                }
                scdma::Decision dec;
                switch (kind) {
                    case scdma::DetectorKind::ml: dec = scdma::ml_detect(m, obs, rng); break;
                    case scdma::DetectorKind::bp: dec = scdma::bp_detect(m, obs, iters); break;
                    case scdma::DetectorKind::abp: dec = scdma::abp_detect(m, obs, iters); break;
                }
                csv << ++word;
                for (int k = 0; k < m.cols(); ++k) csv << ',' << dec.symbols[k];
                csv << ',' << (dec.tie_flag ? 1 : 0) << '\n';
            }
            if (out_path.empty()) std::cout << csv.str();
            else write_text(out_path, csv.str());
        }
        return 0;
    } catch (const scdma::enumeration_limit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLimit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
}
