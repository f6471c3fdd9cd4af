#pragma once
// Reduced words in a finitely generated free group.

#include <srw/dyadic.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace srw {

// letters +1,-1,+2,-2,... for a, a^{-1}, b, b^{-1}, ...; always reduced
using FreeWord = std::vector<int8_t>;

inline FreeWord fw_mul(const FreeWord& u, const FreeWord& v) {
    FreeWord out = u;
    for (int8_t c : v) {
        if (!out.empty() && out.back() == -c)
            out.pop_back();
        else
            out.push_back(c);
    }
    return out;
}

inline FreeWord fw_inv(const FreeWord& u) {
    FreeWord out(u.rbegin(), u.rend());
    for (auto& c : out) c = int8_t(-c);
    return out;
}

inline bool fw_shortlex_less(const FreeWord& u, const FreeWord& v) {
    if (u.size() != v.size()) return u.size() < v.size();
    for (size_t i = 0; i < u.size(); ++i) {
        // order a < A < b < B
        int cu = (std::abs(u[i]) - 1) * 2 + (u[i] < 0);
        int cv = (std::abs(v[i]) - 1) * 2 + (v[i] < 0);
        if (cu != cv) return cu < cv;
    }
    return false;
}

// lowercase = generator, uppercase = inverse; "" and "e" both mean the identity
inline std::string fw_to_string(const FreeWord& u) {
    if (u.empty()) return "e";
    std::string s;
    for (int8_t c : u) s += char((c > 0 ? 'a' : 'A') + std::abs(c) - 1);
    return s;
}

inline FreeWord fw_from_string(const std::string& s) {
    if (s == "e" || s.empty()) return {};
    FreeWord out;
    for (char ch : s) {
        int8_t c;
        if (ch >= 'a' && ch <= 'z')
            c = int8_t(ch - 'a' + 1);
        else if (ch >= 'A' && ch <= 'Z')
            c = int8_t(-(ch - 'A' + 1));
        else
            throw DomainError(std::string("bad word letter: ") + ch);
        if (!out.empty() && out.back() == -c)
            out.pop_back();
        else
            out.push_back(c);
    }
    return out;
}

// |B(e,r)| in the free group of the given rank
inline BigInt ball_count_free(int rank, int r) {
    if (rank < 1 || r < 0) throw DomainError("bad ball parameters");
    if (rank == 1) return BigInt(2 * r + 1);
    // 1 + 2k * ((2k-1)^r - 1) / (2k-2)
    BigInt q = 2 * rank - 1, p = 1;
    for (int i = 0; i < r; ++i) p *= q;
    return 1 + BigInt(2 * rank) * (p - 1) / BigInt(2 * rank - 2);
}

}  // namespace srw
