#pragma once
// Piecewise-linear homeomorphisms of [0,1] with dyadic breakpoints and
// power-of-two slopes, kept in canonical form (no collinear interior points).

#include <srw/dyadic.hpp>

#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

namespace srw {

struct Breakpoint {
    Dyadic x, y;
    friend bool operator==(const Breakpoint& a, const Breakpoint& b) {
        return a.x == b.x && a.y == b.y;
    }
};

namespace detail {

// slope of the segment between two breakpoints, as log2; throws if not a power of two
inline long segment_slope_log2(const Breakpoint& p, const Breakpoint& q) {
    SDyadic dx = sdy_sub(sdy(q.x), sdy(p.x));
    SDyadic dy = sdy_sub(sdy(q.y), sdy(p.y));
    if (dx.num <= 0 || dy.num <= 0)
        throw DomainError("breakpoints not strictly increasing");
    if (dx.num != dy.num)
        throw DomainError("segment slope is not a power of two");
    return dx.exp - dy.exp;
}

}  // namespace detail

class PLMap {
  public:
    PLMap() : bps_{{dyadic(0, 0), dyadic(0, 0)}, {dyadic(1, 0), dyadic(1, 0)}} {}

    explicit PLMap(std::vector<Breakpoint> bps) : bps_(std::move(bps)) {
        if (bps_.size() < 2 || !(bps_.front().x == dyadic(0, 0)) ||
            !(bps_.front().y == dyadic(0, 0)) || !(bps_.back().x == dyadic(1, 0)) ||
            !(bps_.back().y == dyadic(1, 0)))
            throw DomainError("breakpoint list must run from (0,0) to (1,1)");
        for (size_t i = 0; i + 1 < bps_.size(); ++i)
            detail::segment_slope_log2(bps_[i], bps_[i + 1]);  // validates monotonicity too
        canonicalize();
    }

    const std::vector<Breakpoint>& breakpoints() const { return bps_; }

    bool is_identity() const { return bps_.size() == 2; }

    Dyadic operator()(const Dyadic& t) const {
        size_t lo = 0, hi = bps_.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            if (bps_[mid].x <= t)
                lo = mid;
            else
                hi = mid;
        }
        long a = detail::segment_slope_log2(bps_[lo], bps_[lo + 1]);
        SDyadic off = sdy_sub(sdy(bps_[lo].y), sdy_scale(sdy(bps_[lo].x), a));
        return dyadic_affine(t, a, off);
    }

    PLMap inverse() const {
        std::vector<Breakpoint> inv(bps_.size());
        for (size_t i = 0; i < bps_.size(); ++i) inv[i] = {bps_[i].y, bps_[i].x};
        return PLMap(std::move(inv));
    }

    friend bool operator==(const PLMap& a, const PLMap& b) { return a.bps_ == b.bps_; }

    friend bool operator<(const PLMap& a, const PLMap& b) {
        auto cmp = [](const Breakpoint& p, const Breakpoint& q) {
            int c = dyadic_compare(p.x, q.x);
            if (c != 0) return c;
            return dyadic_compare(p.y, q.y);
        };
        size_t n = std::min(a.bps_.size(), b.bps_.size());
        for (size_t i = 0; i < n; ++i) {
            int c = cmp(a.bps_[i], b.bps_[i]);
            if (c != 0) return c < 0;
        }
        return a.bps_.size() < b.bps_.size();
    }

  private:
    void canonicalize() {
        std::vector<Breakpoint> out;
        out.push_back(bps_.front());
        for (size_t i = 1; i + 1 < bps_.size(); ++i) {
            long before = detail::segment_slope_log2(out.back(), bps_[i]);
            long after = detail::segment_slope_log2(bps_[i], bps_[i + 1]);
            if (before != after) out.push_back(bps_[i]);
        }
        out.push_back(bps_.back());
        bps_ = std::move(out);
    }

    std::vector<Breakpoint> bps_;
};

// g then h reads right to left: (compose(g,h))(t) = g(h(t)).
inline PLMap compose(const PLMap& g, const PLMap& h) {
    PLMap hinv = h.inverse();
    std::vector<Dyadic> xs;
    for (const auto& bp : h.breakpoints()) xs.push_back(bp.x);
    for (const auto& bp : g.breakpoints()) xs.push_back(hinv(bp.x));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Breakpoint> bps;
    bps.reserve(xs.size());
    for (const auto& x : xs) bps.push_back({x, g(h(x))});
    return PLMap(std::move(bps));
}

inline PLMap plmap_x0() {
    return PLMap({{dyadic(0, 0), dyadic(0, 0)},
                  {dyadic(1, 1), dyadic(1, 2)},
                  {dyadic(3, 2), dyadic(1, 1)},
                  {dyadic(1, 0), dyadic(1, 0)}});
}

inline PLMap plmap_x1() {
    return PLMap({{dyadic(0, 0), dyadic(0, 0)},
                  {dyadic(1, 1), dyadic(1, 1)},
                  {dyadic(3, 2), dyadic(5, 3)},
                  {dyadic(7, 3), dyadic(3, 2)},
                  {dyadic(1, 0), dyadic(1, 0)}});
}

// t = 1 - 2^{-m} with m >= 2, the discrete ray in the dyadic orbit
inline std::optional<long> hair_position(const Dyadic& t) {
    if (t.exp < 2) return std::nullopt;
    if (t.num == (BigInt(1) << unsigned(t.exp)) - 1) return t.exp;
    return std::nullopt;
}

inline std::string plmap_to_string(const PLMap& g) {
    std::ostringstream os;
    bool first = true;
    for (const auto& bp : g.breakpoints()) {
        if (!first) os << "; ";
        first = false;
        os << dyadic_to_string(bp.x) << ":" << dyadic_to_string(bp.y);
    }
    return os.str();
}

inline PLMap plmap_from_string(const std::string& s) {
    std::vector<Breakpoint> bps;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ';')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw DomainError("bad breakpoint: " + tok);
        auto trim = [](std::string v) {
            size_t b = v.find_first_not_of(" \t");
            size_t e = v.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        bps.push_back({dyadic_from_string(trim(tok.substr(0, colon))),
                       dyadic_from_string(trim(tok.substr(colon + 1)))});
    }
    return PLMap(std::move(bps));
}

// ---- standard dyadic partitions and the two-tuple representative ----

// minimal partition of [a,b] into standard dyadic intervals [k/2^q, (k+1)/2^q],
// greedy largest-piece-first
inline std::vector<Dyadic> std_dyadic_partition(const Dyadic& a, const Dyadic& b) {
    if (!(a < b)) throw DomainError("empty interval");
    std::vector<Dyadic> pts{a};
    Dyadic cur = a;
    while (cur < b) {
        long q = 0;
        for (;; ++q) {
            check_exponent(q);
            if (cur.exp > q) continue;  // not aligned to the 2^-q grid
            Dyadic next = sdy_to_dyadic(sdy_add(sdy(cur), {BigInt(1), q}));
            if (next <= b) {
                cur = next;
                break;
            }
        }
        pts.push_back(cur);
    }
    return pts;
}

// split the leftmost widest piece in half
inline void split_leftmost_largest(std::vector<Dyadic>& pts) {
    size_t best = 0;
    SDyadic bw = sdy_sub(sdy(pts[1]), sdy(pts[0]));
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        SDyadic w = sdy_sub(sdy(pts[i + 1]), sdy(pts[i]));
        if (sdy_sub(w, bw).num > 0) {
            best = i;
            bw = w;
        }
    }
    Dyadic mid = sdy_to_dyadic(sdy_add(sdy(pts[best]), sdy_scale(bw, -1)));
    pts.insert(pts.begin() + long(best) + 1, mid);
}

// The PL homeomorphism taking tuple A to tuple B: both strictly increasing
// dyadics in (0,1), same length. Each [a_i, a_{i+1}] maps to [b_i, b_{i+1}]
// through equalized minimal standard partitions.
inline PLMap map_tuple(const std::vector<Dyadic>& A, const std::vector<Dyadic>& B) {
    if (A.size() != B.size()) throw DomainError("tuple lengths differ");
    std::vector<Dyadic> ea{dyadic(0, 0)}, eb{dyadic(0, 0)};
    ea.insert(ea.end(), A.begin(), A.end());
    eb.insert(eb.end(), B.begin(), B.end());
    ea.push_back(dyadic(1, 0));
    eb.push_back(dyadic(1, 0));
    for (size_t i = 0; i + 1 < ea.size(); ++i) {
        if (!(ea[i] < ea[i + 1]) || !(eb[i] < eb[i + 1]))
            throw DomainError("tuples must be strictly increasing in (0,1)");
    }
    std::vector<Breakpoint> bps;
    for (size_t i = 0; i + 1 < ea.size(); ++i) {
        auto pa = std_dyadic_partition(ea[i], ea[i + 1]);
        auto pb = std_dyadic_partition(eb[i], eb[i + 1]);
        while (pa.size() < pb.size()) split_leftmost_largest(pa);
        while (pb.size() < pa.size()) split_leftmost_largest(pb);
        for (size_t k = 0; k + 1 < pa.size(); ++k) bps.push_back({pa[k], pb[k]});
    }
    bps.push_back({dyadic(1, 0), dyadic(1, 0)});
    return PLMap(std::move(bps));
}

}  // namespace srw
