#include "scdma/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "scdma/graph.hpp"

namespace scdma {

namespace {

struct Equalized {
    std::vector<cplx> y;
    double n0;
};

Equalized equalize(const SignatureMatrix& s, const Observation& obs, bool need_noise) {
    if (static_cast<int>(obs.y.size()) != s.rows())
        throw std::invalid_argument("observation length does not match the matrix");
    if (std::norm(obs.h) == 0.0) throw std::invalid_argument("channel gain must be nonzero");
    if (obs.n0 < 0.0 || (need_noise && obs.n0 <= 0.0))
        throw std::invalid_argument("noise variance must be positive");
    Equalized e;
    e.y.resize(obs.y.size());
    for (std::size_t n = 0; n < obs.y.size(); ++n) e.y[n] = obs.y[n] / obs.h;
    e.n0 = obs.n0 / std::norm(obs.h);
    return e;
}

void check_cap(const SignatureMatrix& s, int cap) {
    if (s.cols() > cap)
        throw enumeration_limit_error("codeword enumeration over K=" + std::to_string(s.cols()) +
                                      " users exceeds cap " + std::to_string(cap));
}

// ||y - S x||^2 for the symbol vector with the given alphabet indices
double sqdist(const SignatureMatrix& s, const std::vector<cplx>& y, const std::vector<int>& x) {
    const auto& a = qpsk_alphabet();
    double d = 0.0;
    for (int n = 0; n < s.rows(); ++n) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < s.cols(); ++k)
            if (!s.is_zero(n, k)) acc += s.value(n, k) * a[x[k]];
        d += std::norm(y[n] - acc);
    }
    return d;
}

bool advance(std::vector<int>& x) {
    int pos = 0;
    while (pos < static_cast<int>(x.size()) && x[pos] == 3) x[pos++] = 0;
    if (pos == static_cast<int>(x.size())) return false;
    ++x[pos];
    return true;
}

std::array<double, 4> normalize(std::array<double, 4> log_msg) {
    double mx = *std::max_element(log_msg.begin(), log_msg.end());
    double sum = 0.0;
    for (double& v : log_msg) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : log_msg) v /= sum;
    return log_msg;
}

int argmax_lowest(const std::array<double, 4>& p) {
    int best = 0;
    for (int a = 1; a < 4; ++a)
        if (p[a] > p[best]) best = a;
    return best;
}

// shared flooding skeleton; code_update fills the code-to-data message for
// one edge from the previous data-to-code messages
template <class CodeUpdate>
Decision flood(const SignatureMatrix& s, const Observation& obs, int iters, CodeUpdate&& code_update) {
    if (iters < 1) throw std::invalid_argument("at least one iteration required");
    Equalized e = equalize(s, obs, true);
    FactorGraph g = graph_from_signature(s);
    const int n_edges = static_cast<int>(g.edges().size());

    // edge index lookup (edges are few; linear scan per (n,k) once)
    auto edge_index = [&](int code, int data) {
        for (int i = 0; i < n_edges; ++i)
            if (g.edges()[i].code == code && g.edges()[i].data == data) return i;
        throw std::logic_error("edge not found");
    };

    const std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
    std::vector<std::array<double, 4>> to_code(n_edges, uniform);  // data -> code
    std::vector<std::array<double, 4>> to_data(n_edges, uniform);  // code -> data

    for (int it = 0; it < iters; ++it) {
        // code-node half
        for (int i = 0; i < n_edges; ++i) {
            const Edge& ed = g.edges()[i];
            to_data[i] = code_update(e, g, edge_index, to_code, ed);
        }
        // data-node half
        for (int i = 0; i < n_edges; ++i) {
            const Edge& ed = g.edges()[i];
            std::array<double, 4> log_msg{0.0, 0.0, 0.0, 0.0};
            for (int n : g.data_neighbors(ed.data)) {
                if (n == ed.code) continue;
                const auto& m = to_data[edge_index(n, ed.data)];
                for (int a = 0; a < 4; ++a) log_msg[a] += std::log(std::max(m[a], 1e-300));
            }
            to_code[i] = normalize(log_msg);
        }
    }

    Decision dec;
    dec.symbols.resize(s.cols());
    std::vector<std::array<double, 4>> post(s.cols());
    for (int k = 0; k < s.cols(); ++k) {
        std::array<double, 4> log_p{0.0, 0.0, 0.0, 0.0};
        for (int n : g.data_neighbors(k)) {
            const auto& m = to_data[edge_index(n, k)];
            for (int a = 0; a < 4; ++a) log_p[a] += std::log(std::max(m[a], 1e-300));
        }
        post[k] = normalize(log_p);
        dec.symbols[k] = argmax_lowest(post[k]);
    }
    dec.posteriors = std::move(post);
    return dec;
}

double logsumexp(const double* v, int n) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) mx = std::max(mx, v[i]);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(v[i] - mx);
    return mx + std::log(s);
}

}  // namespace

Decision ml_detect(const SignatureMatrix& s, const Observation& obs, Rng& rng, int cap) {
    check_cap(s, cap);
    Equalized e = equalize(s, obs, false);

    std::vector<int> x(s.cols(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        best = std::min(best, sqdist(s, e.y, x));
    } while (advance(x));

    std::vector<std::vector<int>> ties;
    std::fill(x.begin(), x.end(), 0);
    do {
        if (sqdist(s, e.y, x) <= best + 1e-12) ties.push_back(x);
    } while (advance(x));

    Decision dec;
    dec.tie_flag = ties.size() > 1;
    dec.symbols = dec.tie_flag ? ties[rng.uniform_int(static_cast<int>(ties.size()))] : ties[0];
    return dec;
}

Decision bp_detect(const SignatureMatrix& s, const Observation& obs, int iters) {
    auto code_update = [&s](const Equalized& e, const FactorGraph& g, auto&& edge_index,
                            const std::vector<std::array<double, 4>>& to_code, const Edge& ed) {
        const auto& alph = qpsk_alphabet();
        std::vector<int> others;
        for (int j : g.code_neighbors(ed.code))
            if (j != ed.data) others.push_back(j);
        const int m = static_cast<int>(others.size());
        const int combos = 1 << (2 * m);  // 4^m

        std::array<double, 4> log_msg;
        std::vector<double> terms(combos);
        for (int a = 0; a < 4; ++a) {
            cplx base = e.y[ed.code] - s.value(ed.code, ed.data) * alph[a];
            for (int c = 0; c < combos; ++c) {
                cplx resid = base;
                double log_w = 0.0;
                int code = c;
                for (int t = 0; t < m; ++t, code >>= 2) {
                    int aj = code & 3;
                    resid -= s.value(ed.code, others[t]) * alph[aj];
                    log_w += std::log(std::max(to_code[edge_index(ed.code, others[t])][aj], 1e-300));
                }
                terms[c] = -std::norm(resid) / e.n0 + log_w;
            }
            log_msg[a] = logsumexp(terms.data(), combos);
        }
        return normalize(log_msg);
    };
    return flood(s, obs, iters, code_update);
}

Decision abp_detect(const SignatureMatrix& s, const Observation& obs, int iters) {
    auto code_update = [&s](const Equalized& e, const FactorGraph& g, auto&& edge_index,
                            const std::vector<std::array<double, 4>>& to_code, const Edge& ed) {
        const auto& alph = qpsk_alphabet();
        cplx mu{0.0, 0.0};
        double var = e.n0;
        for (int j : g.code_neighbors(ed.code)) {
            if (j == ed.data) continue;
            const auto& p = to_code[edge_index(ed.code, j)];
            cplx mean{0.0, 0.0};
            for (int a = 0; a < 4; ++a) mean += p[a] * alph[a];
            mu += s.value(ed.code, j) * mean;
            var += 1.0 - std::norm(mean);
        }
        std::array<double, 4> log_msg;
        for (int a = 0; a < 4; ++a)
            log_msg[a] = -std::norm(e.y[ed.code] - s.value(ed.code, ed.data) * alph[a] - mu) / var;
        return normalize(log_msg);
    };
    return flood(s, obs, iters, code_update);
}

std::vector<std::array<double, 4>> exact_marginals(const SignatureMatrix& s, const Observation& obs,
                                                   int cap) {
    check_cap(s, cap);
    Equalized e = equalize(s, obs, true);

    // log-likelihood of every symbol vector, accumulated per (user, symbol)
    const int K = s.cols();
    std::vector<int> x(K, 0);
    std::vector<double> ll;
    std::vector<std::vector<int>> xs;
    do {
        ll.push_back(-sqdist(s, e.y, x) / e.n0);
        xs.push_back(x);
    } while (advance(x));

    double mx = *std::max_element(ll.begin(), ll.end());
    std::vector<std::array<double, 4>> post(K, {0.0, 0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < ll.size(); ++i) {
        double w = std::exp(ll[i] - mx);
        for (int k = 0; k < K; ++k) post[k][xs[i][k]] += w;
    }
    for (auto& p : post) {
        double sum = p[0] + p[1] + p[2] + p[3];
        for (double& v : p) v /= sum;
    }
    return post;
}

}  // namespace scdma
