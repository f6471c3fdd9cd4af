#pragma once
// The four concrete group actions, behind one static interface:
//   Elem/Point types, identity/compose/invert/act, generator list,
//   orderings, hashing, and textual forms for points and elements.

#include <srw/dyadic.hpp>
#include <srw/freegroup.hpp>
#include <srw/lamp.hpp>
#include <srw/plmap.hpp>

#include <boost/functional/hash.hpp>

#include <string>
#include <utility>
#include <vector>

namespace srw {

struct ThompsonAction {
    using Elem = PLMap;
    using Point = Dyadic;

    static Elem identity() { return PLMap(); }
    static Elem compose(const Elem& g, const Elem& h) { return srw::compose(g, h); }
    static Elem invert(const Elem& g) { return g.inverse(); }
    static Point act(const Elem& g, const Point& x) { return g(x); }
    static bool is_identity(const Elem& g) { return g.is_identity(); }

    static std::vector<std::pair<std::string, Elem>> generators() {
        return {{"x0", plmap_x0()}, {"x1", plmap_x1()}};
    }

    static bool elem_less(const Elem& a, const Elem& b) { return a < b; }
    static bool point_less(const Point& a, const Point& b) { return a < b; }
    static size_t point_hash(const Point& p) { return DyadicHash()(p); }
    static std::string point_to_string(const Point& p) { return dyadic_to_string(p); }
    static Point point_from_string(const std::string& s) { return dyadic_from_string(s); }
    static std::string elem_to_string(const Elem& g) { return plmap_to_string(g); }
    static Elem elem_from_string(const std::string& s) { return plmap_from_string(s); }
};

struct FreeCayleyAction {
    using Elem = FreeWord;
    using Point = FreeWord;

    static Elem identity() { return {}; }
    static Elem compose(const Elem& g, const Elem& h) { return fw_mul(g, h); }
    static Elem invert(const Elem& g) { return fw_inv(g); }
    static Point act(const Elem& g, const Point& x) { return fw_mul(g, x); }
    static bool is_identity(const Elem& g) { return g.empty(); }

    static std::vector<std::pair<std::string, Elem>> generators() {
        return {{"a", FreeWord{1}}, {"b", FreeWord{2}}};
    }

    static bool elem_less(const Elem& a, const Elem& b) { return fw_shortlex_less(a, b); }
    static bool point_less(const Point& a, const Point& b) { return fw_shortlex_less(a, b); }
    static size_t point_hash(const Point& p) {
        return boost::hash_range(p.begin(), p.end());
    }
    static std::string point_to_string(const Point& p) { return fw_to_string(p); }
    static Point point_from_string(const std::string& s) { return fw_from_string(s); }
    static std::string elem_to_string(const Elem& g) { return fw_to_string(g); }
    static Elem elem_from_string(const std::string& s) { return fw_from_string(s); }
};

struct LampZAction {
    using Elem = WreathElem<long long, long long>;
    using Point = std::vector<long long>;  // sorted lit sites

    static Elem identity() { return {0, {}}; }

    static Point shift_config(long long g, const Point& x) {
        Point out(x);
        for (auto& s : out) s += g;
        return out;
    }

    static Elem compose(const Elem& g, const Elem& h) {
        return {g.shift + h.shift,
                config_xor(g.lamps, shift_config(g.shift, h.lamps), std::less<long long>())};
    }
    static Elem invert(const Elem& g) {
        return {-g.shift, shift_config(-g.shift, g.lamps)};
    }
    static Point act(const Elem& g, const Point& x) {
        return config_xor(g.lamps, shift_config(g.shift, x), std::less<long long>());
    }
    static bool is_identity(const Elem& g) { return g.shift == 0 && g.lamps.empty(); }

    static std::vector<std::pair<std::string, Elem>> generators() {
        return {{"t", {1, {}}}, {"f", {0, {0}}}};
    }

    static bool elem_less(const Elem& a, const Elem& b) {
        if (a.shift != b.shift) return a.shift < b.shift;
        return a.lamps < b.lamps;
    }
    static bool point_less(const Point& a, const Point& b) { return a < b; }
    static size_t point_hash(const Point& p) {
        return boost::hash_range(p.begin(), p.end());
    }
    static std::string point_to_string(const Point& p) { return zconfig_to_string(p); }
    static Point point_from_string(const std::string& s) { return zconfig_from_string(s); }
    static std::string elem_to_string(const Elem& g) {
        return "(" + std::to_string(g.shift) + "," + zconfig_to_string(g.lamps) + ")";
    }
    static Elem elem_from_string(const std::string& s) {
        auto comma = s.find(',');
        if (s.size() < 4 || s.front() != '(' || s.back() != ')' || comma == std::string::npos)
            throw DomainError("bad lamp element: " + s);
        return {std::stoll(s.substr(1, comma - 1)),
                zconfig_from_string(s.substr(comma + 1, s.size() - comma - 2))};
    }
};

struct LampF2Action {
    using Elem = WreathElem<FreeWord, FreeWord>;
    using Point = std::vector<FreeWord>;  // shortlex-sorted lit sites

    static Elem identity() { return {{}, {}}; }

    static Point shift_config(const FreeWord& g, const Point& x) {
        Point out;
        out.reserve(x.size());
        for (const auto& s : x) out.push_back(fw_mul(g, s));
        std::sort(out.begin(), out.end(), fw_shortlex_less);
        return out;
    }

    static Elem compose(const Elem& g, const Elem& h) {
        return {fw_mul(g.shift, h.shift),
                config_xor(g.lamps, shift_config(g.shift, h.lamps), fw_shortlex_less)};
    }
    static Elem invert(const Elem& g) {
        FreeWord gi = fw_inv(g.shift);
        return {gi, shift_config(gi, g.lamps)};
    }
    static Point act(const Elem& g, const Point& x) {
        return config_xor(g.lamps, shift_config(g.shift, x), fw_shortlex_less);
    }
    static bool is_identity(const Elem& g) { return g.shift.empty() && g.lamps.empty(); }

    static std::vector<std::pair<std::string, Elem>> generators() {
        return {{"ta", {{1}, {}}}, {"tb", {{2}, {}}}, {"f", {{}, {FreeWord{}}}}};
    }

    static bool elem_less(const Elem& a, const Elem& b) {
        if (!(a.shift == b.shift)) return fw_shortlex_less(a.shift, b.shift);
        if (a.lamps.size() != b.lamps.size()) return a.lamps.size() < b.lamps.size();
        for (size_t i = 0; i < a.lamps.size(); ++i)
            if (!(a.lamps[i] == b.lamps[i])) return fw_shortlex_less(a.lamps[i], b.lamps[i]);
        return false;
    }
    static bool point_less(const Point& a, const Point& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = 0; i < a.size(); ++i)
            if (!(a[i] == b[i])) return fw_shortlex_less(a[i], b[i]);
        return false;
    }
    static size_t point_hash(const Point& p) {
        size_t seed = 0;
        for (const auto& w : p) boost::hash_combine(seed, boost::hash_range(w.begin(), w.end()));
        return seed;
    }
    static std::string point_to_string(const Point& p) { return wconfig_to_string(p); }
    static Point point_from_string(const std::string& s) { return wconfig_from_string(s); }
    static std::string elem_to_string(const Elem& g) {
        return "(" + fw_to_string(g.shift) + "," + wconfig_to_string(g.lamps) + ")";
    }
    static Elem elem_from_string(const std::string& s) {
        auto comma = s.find(',');
        if (s.size() < 4 || s.front() != '(' || s.back() != ')' || comma == std::string::npos)
            throw DomainError("bad lamp element: " + s);
        return {fw_from_string(s.substr(1, comma - 1)),
                wconfig_from_string(s.substr(comma + 1, s.size() - comma - 2))};
    }
};

// S together with the missing inverses, labels suffixed "^-1"; involutions kept once
template <class A>
std::vector<std::pair<std::string, typename A::Elem>> generators_with_inverses() {
    auto gens = A::generators();
    std::vector<std::pair<std::string, typename A::Elem>> out = gens;
    for (const auto& [label, g] : gens) {
        auto gi = A::invert(g);
        bool present = false;
        for (const auto& [l2, h] : out)
            if (h == gi) present = true;
        if (!present) out.push_back({label + "^-1", gi});
    }
    return out;
}

}  // namespace srw
