#pragma once
// Coupling families: per window size n, a set K_n of vertices, a measure nu_n,
// a certified coupling bound eps_n, and displacement data for the walk schedule.

#include <srw/cheeger.hpp>
#include <srw/measure.hpp>
#include <srw/schreier.hpp>

#include <optional>

namespace srw {

struct CertificateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RadiusUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class A>
struct FamilyEntry {
    long n = 0;
    std::vector<typename A::Point> K;  // sorted by point order
    long r_n = 0;                      // certified inscribed-ball radius of K
    GroupMeasure<A> nu;
    Weight eps = 0;           // advertised coupling bound, certified below
    Weight measured_eps = 0;  // max tv actually observed over S-neighbor pairs
    std::optional<long> radius;  // upper bound on displacement of supp(nu) over K
    std::optional<typename A::Elem> conjugator;
};

template <class A>
struct CouplingFamily {
    typename A::Point base;
    std::vector<FamilyEntry<A>> entries;
};

template <class A>
bool point_set_contains(const std::vector<typename A::Point>& sorted,
                        const typename A::Point& p) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), p, A::point_less);
    return it != sorted.end() && !A::point_less(p, *it);
}

// all unordered S-neighbor pairs inside K
template <class A>
std::vector<std::pair<typename A::Point, typename A::Point>> neighbor_pairs_in(
    const std::vector<typename A::Point>& K) {
    std::vector<std::pair<typename A::Point, typename A::Point>> pairs;
    auto gens = generators_with_inverses<A>();
    for (const auto& x : K) {
        for (const auto& [label, s] : gens) {
            auto y = A::act(s, x);
            if (A::point_less(x, y) && point_set_contains<A>(K, y)) pairs.push_back({x, y});
        }
    }
    return pairs;
}

// exhaustive certificate: tv(nu.x, nu.y) <= eps over every S-neighbor pair in K
template <class A>
Weight certify_exhaustive(const std::vector<typename A::Point>& K, const GroupMeasure<A>& nu,
                          const Weight& eps) {
    struct Hash {
        size_t operator()(const typename A::Point& p) const noexcept { return A::point_hash(p); }
    };
    struct Eq {
        bool operator()(const typename A::Point& p, const typename A::Point& q) const noexcept {
            return !A::point_less(p, q) && !A::point_less(q, p);
        }
    };
    std::unordered_map<typename A::Point, OrbitDist<A, Weight>, Hash, Eq> dists;
    auto dist_of = [&](const typename A::Point& x) -> const OrbitDist<A, Weight>& {
        auto it = dists.find(x);
        if (it == dists.end()) it = dists.emplace(x, pushforward<A, Weight>(nu, x)).first;
        return it->second;
    };
    Weight measured = 0;
    for (const auto& [x, y] : neighbor_pairs_in<A>(K)) {
        Weight t = tv<A, Weight>(dist_of(x), dist_of(y));
        if (t > eps)
            throw CertificateError("coupling certificate failed: tv " + weight_to_string(t) +
                                   " exceeds bound " + weight_to_string(eps) + " at pair " +
                                   A::point_to_string(x) + ", " + A::point_to_string(y));
        if (t > measured) measured = t;
    }
    return measured;
}

// ---- dyadic-orbit family entries ----

// nu_n = uniform on the 2n+1 conjugates g^{-1} x0^k g, |k| <= n, where g carries
// the sorted window K onto deep ray points 1 - 2^{-(n+1+i)}
inline FamilyEntry<ThompsonAction> thompson_entry(const Dyadic& base, long n, long rho) {
    using A = ThompsonAction;
    FamilyEntry<A> entry;
    entry.n = n;

    auto ball = orbit_ball<A>(base, rho);
    entry.K = ball.vertices;
    std::sort(entry.K.begin(), entry.K.end(), A::point_less);
    entry.r_n = inradius<A>(ball, entry.K);

    long sz = long(entry.K.size());
    if (n < sz)
        throw DomainError("window parameter " + std::to_string(n) +
                          " below coupling set size " + std::to_string(sz));
    std::vector<Dyadic> targets;
    for (long i = 1; i <= sz; ++i) {
        long e = n + 1 + i;
        check_exponent(e);
        targets.push_back(dyadic_normalize((BigInt(1) << unsigned(e)) - 1, e));
    }
    PLMap g = map_tuple(entry.K, targets);
    entry.conjugator = g;

    PLMap gi = g.inverse();
    PLMap step = compose(gi, compose(plmap_x0(), g));  // g^{-1} x0 g
    std::vector<PLMap> conjugates{PLMap()};
    PLMap cur;
    for (long k = 1; k <= n; ++k) {
        cur = compose(step, cur);
        conjugates.push_back(cur);
        conjugates.push_back(cur.inverse());
    }
    entry.nu = uniform_on_set<A>(conjugates);
    if (entry.nu.entries.size() != size_t(2 * n + 1))
        throw CertificateError("conjugates are not distinct");

    entry.eps = Weight(2 * (sz - 1), 2 * n + 1);
    entry.measured_eps = certify_exhaustive<A>(entry.K, entry.nu, entry.eps);
    return entry;
}

// ---- lamplighter family entries ----

namespace detail {

// nu = uniform on the full lamp group over `window`; for x supported inside the
// window, a -> a xor x permutes that group, so nu.x is uniform on all of K
// regardless of x and every neighbor-pair tv vanishes. The window hypotheses
// are checked exhaustively, the identity itself on a sample of points.
template <class A, class Site>
Weight certify_lamp_coset(const std::vector<typename A::Point>& K, const GroupMeasure<A>& nu,
                          const std::vector<Site>& window_sites) {
    auto site_in_window = [&](const auto& s) {
        for (const auto& w : window_sites)
            if (w == s) return true;
        return false;
    };
    if (nu.entries.size() != (size_t(1) << window_sites.size()))
        throw CertificateError("lamp measure does not cover the full window group");
    for (const auto& [g, w] : nu.entries) {
        if (!A::is_identity(typename A::Elem{g.shift, {}}))
            throw CertificateError("lamp measure contains a nontrivial shift");
        for (const auto& s : g.lamps)
            if (!site_in_window(s)) throw CertificateError("lamp measure leaves the window");
        if (w != Weight(1, long(nu.entries.size())))
            throw CertificateError("lamp measure is not uniform");
    }
    for (const auto& x : K)
        for (const auto& s : x)
            if (!site_in_window(s))
                throw CertificateError("coupling set point outside the window: " +
                                       A::point_to_string(x));
    // direct spot check against the uniform distribution on K
    OrbitDist<A, Weight> uniformK;
    for (const auto& x : K) uniformK.entries.push_back({x, Weight(1, long(K.size()))});
    size_t stride = std::max<size_t>(1, K.size() / 16);
    for (size_t i = 0; i < K.size(); i += stride) {
        auto d = pushforward<A, Weight>(nu, K[i]);
        if (tv<A, Weight>(d, uniformK) != Weight(0))
            throw CertificateError("coset identity failed at " + A::point_to_string(K[i]));
    }
    return 0;
}

}  // namespace detail

// K_n = all configurations inside [-n, n]; nu_n = uniform on the lamp group
// over that window; r_n certified by ball enumeration; displacement bound 6n+1
inline FamilyEntry<LampZAction> lamplighter_z_entry(long n) {
    using A = LampZAction;
    if (n < 1 || n > 12) throw DomainError("window size out of range");
    FamilyEntry<A> entry;
    entry.n = n;

    std::vector<long long> sites;
    for (long long s = -n; s <= n; ++s) sites.push_back(s);
    size_t bits = sites.size();
    if (bits > 24) throw DomainError("window too wide to enumerate");
    std::vector<typename A::Elem> group;
    group.reserve(size_t(1) << bits);
    for (uint64_t mask = 0; mask < (uint64_t(1) << bits); ++mask) {
        std::vector<long long> lamps;
        for (size_t b = 0; b < bits; ++b)
            if ((mask >> b) & 1) lamps.push_back(sites[b]);
        entry.K.push_back(lamps);
        group.push_back({0, std::move(lamps)});
    }
    std::sort(entry.K.begin(), entry.K.end(), A::point_less);
    entry.nu = uniform_on_set<A>(group);

    auto ball = orbit_ball<A>({}, n + 2);
    entry.r_n = inradius<A>(ball, entry.K);
    if (entry.r_n != n + 1)
        throw CertificateError("inscribed radius " + std::to_string(entry.r_n) +
                               " differs from the expected " + std::to_string(n + 1));

    entry.eps = 0;
    entry.measured_eps = detail::certify_lamp_coset<A>(entry.K, entry.nu, sites);
    if (entry.K.size() <= 512) certify_exhaustive<A>(entry.K, entry.nu, entry.eps);
    entry.radius = 6 * n + 1;
    return entry;
}

// same over the rank-two free group: window = ball of radius n in the tree
inline FamilyEntry<LampF2Action> lamplighter_f2_entry(long n) {
    using A = LampF2Action;
    if (n < 1 || n > 3) throw DomainError("window size out of range");
    FamilyEntry<A> entry;
    entry.n = n;

    auto siteball = orbit_ball<FreeCayleyAction>({}, n);
    std::vector<FreeWord> sites = siteball.vertices;
    std::sort(sites.begin(), sites.end(), fw_shortlex_less);
    size_t bits = sites.size();
    if (bits > 24) throw DomainError("window too wide to enumerate");
    std::vector<typename A::Elem> group;
    group.reserve(size_t(1) << bits);
    for (uint64_t mask = 0; mask < (uint64_t(1) << bits); ++mask) {
        std::vector<FreeWord> lamps;
        for (size_t b = 0; b < bits; ++b)
            if ((mask >> b) & 1) lamps.push_back(sites[b]);
        entry.K.push_back(lamps);
        group.push_back({{}, std::move(lamps)});
    }
    std::sort(entry.K.begin(), entry.K.end(), A::point_less);
    entry.nu = uniform_on_set<A>(group);

    auto ball = orbit_ball<A>({}, n + 2);
    entry.r_n = inradius<A>(ball, entry.K);
    if (entry.r_n != n + 1)
        throw CertificateError("inscribed radius " + std::to_string(entry.r_n) +
                               " differs from the expected " + std::to_string(n + 1));

    entry.eps = 0;
    entry.measured_eps = detail::certify_lamp_coset<A>(entry.K, entry.nu, sites);
    if (entry.K.size() <= 512) certify_exhaustive<A>(entry.K, entry.nu, entry.eps);
    // tour of the site tree and back, flipping along the way
    entry.radius = 3 * long(bits) - 2;
    return entry;
}

// ---- displacement measurement ----

// Exact max over x in K, h in supp(nu) of d(x, h.x), computed inside growing
// balls around base; the ball is large enough once every in-ball distance is
// certified exact by d(base, x) + d_ball(x, image) <= R.
template <class A>
long measure_displacement_radius(const typename A::Point& base,
                                 const std::vector<typename A::Point>& K,
                                 const GroupMeasure<A>& nu, long max_radius = 48,
                                 size_t max_vertices = 2000000) {
    for (long R = 4; R <= max_radius; R += 2) {
        SchreierBall<A> ball;
        try {
            ball = orbit_ball<A>(base, R, max_vertices);
        } catch (const BallSizeLimit& e) {
            throw RadiusUnavailable(
                "displacement measurement over " + std::to_string(K.size()) +
                " points needs balls beyond the enumeration budget: " + e.what());
        }
        std::vector<std::vector<uint32_t>> adj(ball.vertices.size());
        for (const auto& e : ball.edges)
            if (e.src != e.dst) adj[e.src].push_back(e.dst);

        bool ok = true;
        long worst = 0;
        for (const auto& x : K) {
            auto xi = ball.find(x);
            if (!xi) {
                ok = false;
                break;
            }
            std::vector<long> dist(ball.vertices.size(), -1);
            std::vector<uint32_t> queue{uint32_t(*xi)};
            dist[*xi] = 0;
            for (size_t qi = 0; qi < queue.size(); ++qi) {
                uint32_t v = queue[qi];
                for (uint32_t u : adj[v])
                    if (dist[u] < 0) {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                    }
            }
            long disp = 0;
            for (const auto& [h, w] : nu.entries) {
                auto img = ball.find(A::act(h, x));
                if (!img || dist[*img] < 0) {
                    ok = false;
                    break;
                }
                disp = std::max(disp, dist[*img]);
            }
            if (!ok) break;
            if (ball.distance[*xi] + disp > R) {
                ok = false;  // in-ball distances not yet certified exact
                break;
            }
            worst = std::max(worst, disp);
        }
        if (ok) return worst;
    }
    throw RadiusUnavailable("displacement not certified within ball radius " +
                            std::to_string(max_radius) + " around " +
                            A::point_to_string(base));
}

// fill entry.radius if absent (measured exactly); returns the bound
template <class A>
long ensure_radius(CouplingFamily<A>& family, size_t idx, long max_radius = 48,
                   size_t max_vertices = 2000000) {
    auto& entry = family.entries.at(idx);
    if (!entry.radius)
        entry.radius =
            measure_displacement_radius<A>(family.base, entry.K, entry.nu, max_radius, max_vertices);
    return *entry.radius;
}

// structural invariants: strictly increasing n, nested K, non-increasing eps,
// base in every K
template <class A>
void validate_family(const CouplingFamily<A>& family) {
    const auto& es = family.entries;
    for (size_t i = 0; i < es.size(); ++i) {
        if (!point_set_contains<A>(es[i].K, family.base))
            throw CertificateError("basepoint missing from coupling set at level " + std::to_string(i));
        if (i == 0) continue;
        if (es[i].n <= es[i - 1].n) throw CertificateError("window sizes must increase");
        if (es[i].eps > es[i - 1].eps) throw CertificateError("coupling bounds must not increase");
        for (const auto& p : es[i - 1].K)
            if (!point_set_contains<A>(es[i].K, p))
                throw CertificateError("coupling sets must be nested");
    }
}

}  // namespace srw
