#pragma once
// Probability measures on a group, distributions on an orbit, and the
// one-step pushforward driving all random-walk computations.
//
// Group measures always carry exact rational weights. Orbit distributions
// are templated on the weight type: exact (Weight) or double with per-step
// pruning, in which case the removed mass is accumulated in `deficit`.

#include <srw/action.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <vector>

namespace srw {

template <class A>
struct GroupMeasure {
    std::vector<std::pair<typename A::Elem, Weight>> entries;  // sorted, weights > 0
};

namespace detail {

template <class A>
void sort_combine(std::vector<std::pair<typename A::Elem, Weight>>& v) {
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return A::elem_less(a.first, b.first); });
    std::vector<std::pair<typename A::Elem, Weight>> out;
    for (auto& e : v) {
        if (e.second < 0) throw DomainError("negative weight");
        if (!out.empty() && out.back().first == e.first)
            out.back().second += e.second;
        else
            out.push_back(std::move(e));
    }
    std::erase_if(out, [](const auto& e) { return e.second == 0; });
    v = std::move(out);
}

}  // namespace detail

template <class A>
GroupMeasure<A> make_measure(std::vector<std::pair<typename A::Elem, Weight>> entries) {
    detail::sort_combine<A>(entries);
    return {std::move(entries)};
}

template <class A>
Weight total_mass(const GroupMeasure<A>& mu) {
    Weight s = 0;
    for (const auto& e : mu.entries) s += e.second;
    return s;
}

// uniform on the SET of listed elements: duplicates collapse before weighting
template <class A>
GroupMeasure<A> uniform_on_set(std::vector<typename A::Elem> elems) {
    std::sort(elems.begin(), elems.end(), A::elem_less);
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.empty()) throw DomainError("empty support");
    Weight w(1, long(elems.size()));
    std::vector<std::pair<typename A::Elem, Weight>> entries;
    entries.reserve(elems.size());
    for (auto& g : elems) entries.push_back({std::move(g), w});
    return {std::move(entries)};
}

template <class A>
GroupMeasure<A> mix(const std::vector<std::pair<Weight, const GroupMeasure<A>*>>& parts) {
    std::vector<std::pair<typename A::Elem, Weight>> entries;
    for (const auto& [c, mu] : parts)
        for (const auto& e : mu->entries) entries.push_back({e.first, c * e.second});
    return make_measure<A>(std::move(entries));
}

// (mu * nu)(g) = sum over g = h k of mu(h) nu(k); matches act-then-act order
template <class A>
GroupMeasure<A> convolve(const GroupMeasure<A>& mu, const GroupMeasure<A>& nu) {
    std::vector<std::pair<typename A::Elem, Weight>> entries;
    entries.reserve(mu.entries.size() * nu.entries.size());
    for (const auto& [h, wh] : mu.entries)
        for (const auto& [k, wk] : nu.entries)
            entries.push_back({A::compose(h, k), wh * wk});
    return make_measure<A>(std::move(entries));
}

template <class A>
GroupMeasure<A> convolve_power(const GroupMeasure<A>& mu, long m) {
    if (m < 0) throw DomainError("negative convolution power");
    GroupMeasure<A> acc = make_measure<A>({{A::identity(), Weight(1)}});
    for (long i = 0; i < m; ++i) acc = convolve<A>(acc, mu);
    return acc;
}

template <class A>
GroupMeasure<A> lazify(const GroupMeasure<A>& mu, const Weight& hold = Weight(1, 2)) {
    if (hold < Weight(0) || !(hold < Weight(1)))
        throw DomainError("holding probability must lie in [0,1)");
    std::vector<std::pair<typename A::Elem, Weight>> entries = mu.entries;
    for (auto& e : entries) e.second *= Weight(1) - hold;
    entries.push_back({A::identity(), hold});
    return make_measure<A>(std::move(entries));
}

template <class A>
bool symmetrize_check(const GroupMeasure<A>& mu) {
    for (const auto& [g, w] : mu.entries) {
        auto gi = A::invert(g);
        auto it = std::lower_bound(
            mu.entries.begin(), mu.entries.end(), gi,
            [](const auto& e, const auto& x) { return A::elem_less(e.first, x); });
        if (it == mu.entries.end() || !(it->first == gi) || it->second != w) return false;
    }
    return true;
}

template <class A>
bool measure_supports(const GroupMeasure<A>& mu, const typename A::Elem& g) {
    auto it = std::lower_bound(mu.entries.begin(), mu.entries.end(), g,
                               [](const auto& e, const auto& x) { return A::elem_less(e.first, x); });
    return it != mu.entries.end() && it->first == g;
}

// ---- orbit distributions ----

template <class A, class W>
struct OrbitDist {
    std::vector<std::pair<typename A::Point, W>> entries;  // sorted by point
    W deficit{};  // pruned mass so far; identically zero in exact mode
};

template <class A, class W>
OrbitDist<A, W> dirac(typename A::Point x) {
    return {{{std::move(x), W(1)}}, W(0)};
}

inline double weight_cast(const Weight& w, double*) { return double(w); }
inline const Weight& weight_cast(const Weight& w, const Weight*) { return w; }

struct StepOptions {
    int workers = 1;
    double prune = 0.0;  // float mode only; exact mode must pass 0
};

template <class A, class W>
OrbitDist<A, W> step(const OrbitDist<A, W>& dist, const GroupMeasure<A>& mu,
                     const StepOptions& opt = {}) {
    using Point = typename A::Point;
    struct Hash {
        size_t operator()(const Point& p) const noexcept { return A::point_hash(p); }
    };
    struct Eq {
        bool operator()(const Point& p, const Point& q) const noexcept {
            return !A::point_less(p, q) && !A::point_less(q, p);
        }
    };
    if (opt.prune != 0.0 && !std::is_same_v<W, double>)
        throw DomainError("pruning requires float weights");

    std::vector<std::pair<typename A::Elem, W>> mw;
    mw.reserve(mu.entries.size());
    for (const auto& [g, w] : mu.entries) mw.push_back({g, W(weight_cast(w, (W*)nullptr))});

    int workers = std::max(1, opt.workers);
    size_t n = dist.entries.size();
    if (size_t(workers) > n) workers = int(std::max<size_t>(1, n));
    std::vector<std::vector<std::pair<Point, W>>> partial;
    partial.resize(size_t(workers));

    auto run_chunk = [&](int wi) {
        size_t lo = n * size_t(wi) / size_t(workers);
        size_t hi = n * size_t(wi + 1) / size_t(workers);
        std::unordered_map<Point, W, Hash, Eq> acc;
        acc.reserve((hi - lo) * mw.size() / 2 + 8);
        for (size_t i = lo; i < hi; ++i) {
            const auto& [x, wx] = dist.entries[i];
            for (const auto& [g, wg] : mw) acc[A::act(g, x)] += wg * wx;
        }
        auto& out = partial[size_t(wi)];
        out.assign(acc.begin(), acc.end());
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return A::point_less(a.first, b.first); });
    };

    if (workers == 1) {
        run_chunk(0);
    } else {
        std::vector<std::thread> pool;
        for (int wi = 0; wi < workers; ++wi) pool.emplace_back(run_chunk, wi);
        for (auto& t : pool) t.join();
    }

    // merge worker outputs; per point, partial sums are added in worker order
    OrbitDist<A, W> out;
    out.deficit = dist.deficit;
    std::vector<size_t> idx(size_t(workers), 0);
    for (;;) {
        const Point* best = nullptr;
        for (int wi = 0; wi < workers; ++wi) {
            if (idx[size_t(wi)] >= partial[size_t(wi)].size()) continue;
            const Point& p = partial[size_t(wi)][idx[size_t(wi)]].first;
            if (!best || A::point_less(p, *best)) best = &p;
        }
        if (!best) break;
        Point key = *best;
        W w{};
        for (int wi = 0; wi < workers; ++wi) {
            auto& i = idx[size_t(wi)];
            auto& vec = partial[size_t(wi)];
            if (i < vec.size() && !A::point_less(key, vec[i].first) &&
                !A::point_less(vec[i].first, key)) {
                w += vec[i].second;
                ++i;
            }
        }
        if (opt.prune != 0.0 && double(w) < opt.prune)
            out.deficit += w;
        else
            out.entries.push_back({std::move(key), w});
    }
    return out;
}

template <class A, class W>
OrbitDist<A, W> pushforward(const GroupMeasure<A>& mu, const typename A::Point& x,
                            const StepOptions& opt = {}) {
    return step<A, W>(dirac<A, W>(x), mu, opt);
}

template <class A, class W>
W total_dist_mass(const OrbitDist<A, W>& d) {
    W s{};
    for (const auto& e : d.entries) s += e.second;
    return s;
}

// l1 distance between the two weight vectors over the merged support, in [0,2]
template <class A, class W>
W tv(const OrbitDist<A, W>& a, const OrbitDist<A, W>& b) {
    W s{};
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    auto absw = [](W v) { return v < W(0) ? W(-v) : v; };
    while (ia != a.entries.end() || ib != b.entries.end()) {
        if (ib == b.entries.end() ||
            (ia != a.entries.end() && A::point_less(ia->first, ib->first)))
            s += absw((ia++)->second);
        else if (ia == a.entries.end() || A::point_less(ib->first, ia->first))
            s += absw((ib++)->second);
        else {
            s += absw(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return s;
}

template <class A, class W>
bool dist_contains(const OrbitDist<A, W>& d, const typename A::Point& x) {
    auto it = std::lower_bound(d.entries.begin(), d.entries.end(), x,
                               [](const auto& e, const auto& p) { return A::point_less(e.first, p); });
    return it != d.entries.end() && !A::point_less(x, it->first);
}

// max over `interior` of |f(x) - sum_g mu(g) f(g.x)|; every image must carry a value
template <class A>
Weight harmonic_defect(const std::vector<std::pair<typename A::Point, Weight>>& f,
                       const std::vector<typename A::Point>& interior,
                       const GroupMeasure<A>& mu) {
    auto value = [&](const typename A::Point& x) -> const Weight& {
        auto it = std::lower_bound(f.begin(), f.end(), x, [](const auto& e, const auto& p) {
            return A::point_less(e.first, p);
        });
        if (it == f.end() || A::point_less(x, it->first))
            throw DomainError("function value missing at " + A::point_to_string(x));
        return it->second;
    };
    Weight best = 0;
    for (const auto& x : interior) {
        Weight d = value(x);
        for (const auto& [g, w] : mu.entries) d -= w * value(A::act(g, x));
        if (d < 0) d = -d;
        if (d > best) best = d;
    }
    return best;
}

}  // namespace srw
