#pragma once
// Exact dyadic rationals p/2^q confined to [0,1], plus exact rational weights.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/functional/hash.hpp>
#include <compare>
#include <stdexcept>
#include <string>

namespace srw {

using BigInt = boost::multiprecision::cpp_int;
using Weight = boost::multiprecision::cpp_rational;

struct ExponentLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runaway compositions must fail loudly, not exhaust memory.
inline long& exponent_limit() {
    static long limit = 1000000;
    return limit;
}

inline void check_exponent(long e) {
    if (e > exponent_limit())
        throw ExponentLimitError("dyadic exponent " + std::to_string(e) + " exceeds limit");
}

// Value = num / 2^exp with num odd or (num, exp) = (0, 0); confined to [0,1].
struct Dyadic {
    BigInt num;
    long exp = 0;

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exp == b.exp && a.num == b.num;
    }
};

inline Dyadic dyadic_normalize(BigInt num, long exp) {
    if (num < 0 || exp < 0)
        throw DomainError("dyadic out of range");
    check_exponent(exp);
    if (num == 0) return {BigInt(0), 0};
    while ((num & 1) == 0 && exp > 0) {
        num >>= 1;
        --exp;
    }
    if (num > (BigInt(1) << unsigned(exp)))
        throw DomainError("dyadic out of range");
    return {std::move(num), exp};
}

inline int dyadic_compare(const Dyadic& a, const Dyadic& b) {
    long e = std::max(a.exp, b.exp);
    BigInt an = a.num << unsigned(e - a.exp);
    BigInt bn = b.num << unsigned(e - b.exp);
    return an < bn ? -1 : (an == bn ? 0 : 1);
}

inline bool operator<(const Dyadic& a, const Dyadic& b) { return dyadic_compare(a, b) < 0; }
inline bool operator<=(const Dyadic& a, const Dyadic& b) { return dyadic_compare(a, b) <= 0; }
inline bool operator>(const Dyadic& a, const Dyadic& b) { return dyadic_compare(a, b) > 0; }
inline bool operator>=(const Dyadic& a, const Dyadic& b) { return dyadic_compare(a, b) >= 0; }

inline Dyadic dyadic(long num, long exp) { return dyadic_normalize(BigInt(num), exp); }

// Signed dyadic scratch value for PL-map arithmetic; not confined to [0,1].
struct SDyadic {
    BigInt num;
    long exp = 0;
};

inline SDyadic sdy(const Dyadic& d) { return {d.num, d.exp}; }

inline SDyadic sdy_normalize(SDyadic v) {
    if (v.num == 0) return {BigInt(0), 0};
    while ((v.num & 1) == 0 && v.exp > 0) {
        v.num >>= 1;
        --v.exp;
    }
    return v;
}

inline SDyadic sdy_add(const SDyadic& a, const SDyadic& b) {
    long e = std::max(a.exp, b.exp);
    check_exponent(e);
    return sdy_normalize({(a.num << unsigned(e - a.exp)) + (b.num << unsigned(e - b.exp)), e});
}

inline SDyadic sdy_sub(const SDyadic& a, const SDyadic& b) {
    return sdy_add(a, {-b.num, b.exp});
}

inline SDyadic sdy_scale(SDyadic v, long slope_log2) {
    if (v.num == 0) return v;
    if (slope_log2 >= 0)
        v.num <<= unsigned(slope_log2);
    else {
        v.exp += -slope_log2;
        check_exponent(v.exp);
    }
    return sdy_normalize(v);
}

inline Dyadic sdy_to_dyadic(const SDyadic& v) {
    return dyadic_normalize(v.num, v.exp);
}

// 2^a * t + offset, exact; result must land in [0,1].
inline Dyadic dyadic_affine(const Dyadic& t, long slope_log2, const SDyadic& offset) {
    return sdy_to_dyadic(sdy_add(sdy_scale(sdy(t), slope_log2), offset));
}

struct DyadicHash {
    size_t operator()(const Dyadic& d) const {
        size_t seed = boost::hash<BigInt>()(d.num);
        boost::hash_combine(seed, d.exp);
        return seed;
    }
};

// Textual form "p/q" with q a power of two; e.g. "1/2", "15/16", "0/1".
inline std::string dyadic_to_string(const Dyadic& d) {
    BigInt den = BigInt(1) << unsigned(d.exp);
    return d.num.str() + "/" + den.str();
}

inline Dyadic dyadic_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (s == "0") return {BigInt(0), 0};
        if (s == "1") return {BigInt(1), 0};
        throw DomainError("cannot parse dyadic: " + s);
    }
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den <= 0) throw DomainError("cannot parse dyadic: " + s);
    unsigned e = msb(den);
    if ((BigInt(1) << e) != den)
        throw DomainError("denominator not a power of two: " + s);
    return dyadic_normalize(std::move(num), long(e));
}

inline std::string weight_to_string(const Weight& w) {
    return numerator(w).str() + "/" + denominator(w).str();
}

inline Weight weight_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Weight(BigInt(s));
    return Weight(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

}  // namespace srw
