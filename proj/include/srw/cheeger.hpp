#pragma once
// Isoperimetric constants of finite Schreier balls. Loops are dropped,
// parallel edges kept. Small graphs get the exact minimum over subsets;
// every connected graph gets the algebraic connectivity lambda1 of the
// combinatorial Laplacian, giving the band lambda1/2 <= h <= sqrt(2 lambda1).

#include <srw/schreier.hpp>

#include <cmath>
#include <map>
#include <optional>

namespace srw {

struct CheegerReport {
    size_t vertices = 0;
    size_t edges = 0;  // undirected, with multiplicity, loops dropped
    bool connected = false;
    std::optional<Weight> h_exact;    // min |boundary| / |S|, |S| <= |V|/2
    std::optional<Weight> phi_exact;  // min |boundary| / vol(S), vol(S) <= vol/2
    double lambda1 = 0.0;             // second eigenvalue of the combinatorial Laplacian
    double band_lo = 0.0;             // lambda1 / 2       <= h
    double band_hi = 0.0;             // sqrt(2 * lambda1) >= h on the graphs reported here
};

struct CheegerGraph {
    size_t n = 0;
    // CSR over undirected edges, each stored in both directions with multiplicity
    std::vector<size_t> row;
    std::vector<std::pair<uint32_t, uint32_t>> adj;  // (neighbor, multiplicity)
    std::vector<long long> degree;
};

template <class A>
CheegerGraph cheeger_graph(const SchreierBall<A>& ball) {
    CheegerGraph g;
    g.n = ball.vertices.size();
    std::map<std::pair<uint32_t, uint32_t>, long long> undirected;
    for (const auto& e : ball.edges) {
        if (e.src == e.dst) continue;
        undirected[{std::min(e.src, e.dst), std::max(e.src, e.dst)}] += 1;
    }
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> nbr(g.n);
    for (auto& [key, cnt] : undirected) {
        // each undirected edge was seen once per direction
        if (cnt % 2 != 0) throw DomainError("directed edge list is not symmetric");
        uint32_t m = uint32_t(cnt / 2);
        nbr[key.first].push_back({key.second, m});
        nbr[key.second].push_back({key.first, m});
    }
    g.row.assign(g.n + 1, 0);
    g.degree.assign(g.n, 0);
    for (size_t v = 0; v < g.n; ++v) {
        g.row[v + 1] = g.row[v] + nbr[v].size();
        for (auto& [u, m] : nbr[v]) g.degree[v] += m;
        g.adj.insert(g.adj.end(), nbr[v].begin(), nbr[v].end());
    }
    return g;
}

inline bool cheeger_connected(const CheegerGraph& g) {
    if (g.n == 0) return false;
    std::vector<char> seen(g.n, 0);
    std::vector<size_t> stack{0};
    seen[0] = 1;
    size_t count = 1;
    while (!stack.empty()) {
        size_t v = stack.back();
        stack.pop_back();
        for (size_t i = g.row[v]; i < g.row[v + 1]; ++i) {
            uint32_t u = g.adj[i].first;
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == g.n;
}

// exact sweep over all subsets; n <= 20
inline void cheeger_exhaustive(const CheegerGraph& g, CheegerReport& rep) {
    size_t n = g.n;
    long long total_vol = 0;
    for (auto d : g.degree) total_vol += d;
    std::optional<Weight> besth, bestphi;
    for (uint64_t mask = 1; mask + 1 < (uint64_t(1) << n); ++mask) {
        long long cut = 0, size = 0, vol = 0;
        for (size_t v = 0; v < n; ++v) {
            if (!((mask >> v) & 1)) continue;
            ++size;
            vol += g.degree[v];
            for (size_t i = g.row[v]; i < g.row[v + 1]; ++i)
                if (!((mask >> g.adj[i].first) & 1)) cut += g.adj[i].second;
        }
        if (2 * size <= static_cast<long long>(n)) {
            Weight h(cut, size);
            if (!besth || h < *besth) besth = h;
        }
        if (vol > 0 && 2 * vol <= total_vol) {
            Weight phi(cut, vol);
            if (!bestphi || phi < *bestphi) bestphi = phi;
        }
    }
    rep.h_exact = besth;
    rep.phi_exact = bestphi;
}

// second-smallest eigenvalue of L = D - A by deflated power iteration on
// cI - L with c = 2 max-degree (Gershgorin keeps it positive semidefinite);
// the top eigenvector of cI - L is constant, so deflation is against it
inline double cheeger_lambda1(const CheegerGraph& g, double tol = 1e-11,
                              long max_iter = 200000) {
    size_t n = g.n;
    if (n < 2) return 0.0;
    long long dmax = 0;
    for (auto d : g.degree) dmax = std::max(dmax, d);
    double c = 2.0 * double(dmax);
    if (c == 0) return 0.0;
    double inv = 1.0 / std::sqrt(double(n));

    std::vector<double> u(n), w(n);
    for (size_t i = 0; i < n; ++i) {
        uint64_t h = (i + 1) * 2654435761u;
        u[i] = double(h % 10007) / 10007.0 - 0.5;
    }
    auto deflate = [&](std::vector<double>& v) {
        double dot = 0;
        for (size_t i = 0; i < n; ++i) dot += v[i] * inv;
        for (size_t i = 0; i < n; ++i) v[i] -= dot * inv;
        double nn = 0;
        for (size_t i = 0; i < n; ++i) nn += v[i] * v[i];
        return std::sqrt(nn);
    };
    double nn = deflate(u);
    for (auto& x : u) x /= nn;
    double rho = 0, prev = -1;
    for (long it = 0; it < max_iter; ++it) {
        // w = (cI - L) u = (c - deg) u + A u
        for (size_t i = 0; i < n; ++i) {
            double s = 0;
            for (size_t k = g.row[i]; k < g.row[i + 1]; ++k) {
                auto [j, m] = g.adj[k];
                s += double(m) * u[j];
            }
            w[i] = (c - double(g.degree[i])) * u[i] + s;
        }
        // keep the walk out of the deflated direction; u is orthogonal to it,
        // so this does not change the Rayleigh quotient below
        nn = deflate(w);
        rho = 0;
        for (size_t i = 0; i < n; ++i) rho += u[i] * w[i];
        if (nn < 1e-13 * c) break;  // the complement of the constant is annihilated
        for (size_t i = 0; i < n; ++i) u[i] = w[i] / nn;
        if (it > 50 && std::abs(rho - prev) < tol * c) break;
        prev = rho;
    }
    double lambda1 = c - rho;
    return lambda1 < 0 ? 0.0 : lambda1;
}

template <class A>
CheegerReport cheeger_report(const SchreierBall<A>& ball, size_t exhaustive_limit = 20) {
    CheegerGraph g = cheeger_graph<A>(ball);
    CheegerReport rep;
    rep.vertices = g.n;
    for (size_t v = 0; v < g.n; ++v)
        for (size_t i = g.row[v]; i < g.row[v + 1]; ++i)
            if (g.adj[i].first > v) rep.edges += g.adj[i].second;
    rep.connected = cheeger_connected(g);
    if (!rep.connected) {
        rep.h_exact = Weight(0);
        rep.phi_exact = Weight(0);
        return rep;
    }
    if (g.n <= exhaustive_limit && g.n >= 2) cheeger_exhaustive(g, rep);
    rep.lambda1 = cheeger_lambda1(g);
    rep.band_lo = rep.lambda1 / 2;
    rep.band_hi = std::sqrt(2 * rep.lambda1);
    return rep;
}

}  // namespace srw
