#pragma once
// Balls in the Schreier graph of an action: BFS enumeration, labeled edges,
// distances, and inscribed-ball radius relative to a vertex subset.

#include <srw/action.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace srw {

struct BallSizeLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchreierEdge {
    uint32_t src;
    uint32_t gen;  // index into the ball's generator list
    uint32_t dst;
};

template <class A>
struct SchreierBall {
    using Point = typename A::Point;

    Point base;
    long radius = 0;
    std::vector<std::pair<std::string, typename A::Elem>> gens;  // S and inverses
    std::vector<Point> vertices;  // BFS shells, each shell sorted by point order
    std::vector<long> distance;   // parallel to vertices
    std::vector<SchreierEdge> edges;  // directed, one per (vertex, generator) staying inside

    std::optional<size_t> find(const Point& p) const {
        auto it = std::lower_bound(order_.begin(), order_.end(), p, [this](size_t i, const Point& x) {
            return A::point_less(vertices[i], x);
        });
        if (it == order_.end() || A::point_less(p, vertices[*it])) return std::nullopt;
        return *it;
    }

    void build_index() {
        order_.resize(vertices.size());
        for (size_t i = 0; i < order_.size(); ++i) order_[i] = i;
        std::sort(order_.begin(), order_.end(),
                  [this](size_t i, size_t j) { return A::point_less(vertices[i], vertices[j]); });
    }

  private:
    std::vector<size_t> order_;
};

// BFS ball of the given radius around base. max_vertices bounds enumeration;
// exceeding it is an error so callers cannot mistake truncation for a ball.
template <class A>
SchreierBall<A> orbit_ball(const typename A::Point& base, long radius,
                           size_t max_vertices = 5000000) {
    using Point = typename A::Point;
    struct Hash {
        size_t operator()(const Point& p) const noexcept { return A::point_hash(p); }
    };
    struct Eq {
        bool operator()(const Point& p, const Point& q) const noexcept {
            return !A::point_less(p, q) && !A::point_less(q, p);
        }
    };
    SchreierBall<A> ball;
    ball.base = base;
    ball.radius = radius;
    ball.gens = generators_with_inverses<A>();

    std::unordered_map<Point, uint32_t, Hash, Eq> index;
    ball.vertices.push_back(base);
    ball.distance.push_back(0);
    index.emplace(base, 0);
    size_t shell_begin = 0;
    for (long d = 1; d <= radius; ++d) {
        size_t shell_end = ball.vertices.size();
        std::vector<Point> next;
        for (size_t i = shell_begin; i < shell_end; ++i) {
            for (const auto& [label, g] : ball.gens) {
                Point u = A::act(g, ball.vertices[i]);
                if (!index.count(u)) {
                    index.emplace(u, 0);  // placeholder; real ids assigned after sorting
                    next.push_back(std::move(u));
                }
            }
        }
        std::sort(next.begin(), next.end(), A::point_less);
        for (auto& u : next) {
            if (ball.vertices.size() >= max_vertices)
                throw BallSizeLimit("ball enumeration exceeded " + std::to_string(max_vertices) +
                                    " vertices at distance " + std::to_string(d));
            index[u] = uint32_t(ball.vertices.size());
            ball.vertices.push_back(std::move(u));
            ball.distance.push_back(d);
        }
        shell_begin = shell_end;
        if (shell_begin == ball.vertices.size()) break;  // orbit exhausted
    }
    for (size_t i = 0; i < shell_begin; ++i) {
        // interior vertices: every generator image is inside by construction
        for (uint32_t k = 0; k < ball.gens.size(); ++k) {
            Point u = A::act(ball.gens[k].second, ball.vertices[i]);
            ball.edges.push_back({uint32_t(i), k, index.at(u)});
        }
    }
    for (size_t i = shell_begin; i < ball.vertices.size(); ++i) {
        for (uint32_t k = 0; k < ball.gens.size(); ++k) {
            Point u = A::act(ball.gens[k].second, ball.vertices[i]);
            auto it = index.find(u);
            if (it != index.end()) ball.edges.push_back({uint32_t(i), k, it->second});
        }
    }
    ball.build_index();
    return ball;
}

// Largest rho with B(base, rho) contained in K; K must consist of ball vertices.
// If all of the ball lies in K the ball radius itself is returned, which is
// only a lower bound for the true value.
template <class A>
long inradius(const SchreierBall<A>& ball, const std::vector<typename A::Point>& K) {
    struct Hash {
        size_t operator()(const typename A::Point& p) const noexcept { return A::point_hash(p); }
    };
    struct Eq {
        bool operator()(const typename A::Point& p, const typename A::Point& q) const noexcept {
            return !A::point_less(p, q) && !A::point_less(q, p);
        }
    };
    std::unordered_map<typename A::Point, bool, Hash, Eq> inK;
    for (const auto& p : K) inK.emplace(p, true);
    if (!inK.count(ball.base)) throw DomainError("subset does not contain the basepoint");
    // only the nearest point outside K matters, so members of K beyond the
    // ball are irrelevant; with no outside point in range the radius itself
    // is still a valid lower bound
    long best = ball.radius;
    for (size_t i = 0; i < ball.vertices.size(); ++i)
        if (!inK.count(ball.vertices[i])) best = std::min(best, ball.distance[i] - 1);
    return best;
}

// shells as vertex index ranges
template <class A>
std::vector<std::pair<size_t, size_t>> ball_shells(const SchreierBall<A>& ball) {
    std::vector<std::pair<size_t, size_t>> out;
    size_t i = 0;
    for (long d = 0; i < ball.vertices.size(); ++d) {
        size_t j = i;
        while (j < ball.vertices.size() && ball.distance[j] == d) ++j;
        out.push_back({i, j});
        i = j;
    }
    return out;
}

}  // namespace srw
