#pragma once
// Wreath products (Z/2Z) wr G acting on finite lamp configurations over G.

#include <srw/dyadic.hpp>
#include <srw/freegroup.hpp>

#include <algorithm>
#include <sstream>
#include <vector>

namespace srw {

// sorted vector of lit sites; xor = symmetric difference
template <class Site, class Less>
std::vector<Site> config_xor(const std::vector<Site>& a, const std::vector<Site>& b, Less less) {
    std::vector<Site> out;
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (less(*ia, *ib))
            out.push_back(*ia++);
        else if (less(*ib, *ia))
            out.push_back(*ib++);
        else {
            ++ia;
            ++ib;
        }
    }
    out.insert(out.end(), ia, a.end());
    out.insert(out.end(), ib, b.end());
    return out;
}

template <class Base, class Site>
struct WreathElem {
    Base shift;
    std::vector<Site> lamps;  // sorted
    friend bool operator==(const WreathElem& x, const WreathElem& y) {
        return x.shift == y.shift && x.lamps == y.lamps;
    }
};

// "[-1,0,2]" for integer sites, "[e,a,ab]" for word sites
inline std::string zconfig_to_string(const std::vector<long long>& c) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << ']';
    return os.str();
}

inline std::vector<long long> zconfig_from_string(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw DomainError("bad config: " + s);
    std::vector<long long> out;
    std::istringstream is(s.substr(1, s.size() - 2));
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(std::stoll(tok));
    if (!std::is_sorted(out.begin(), out.end()) ||
        std::adjacent_find(out.begin(), out.end()) != out.end())
        throw DomainError("config sites must be sorted and distinct: " + s);
    return out;
}

inline std::string wconfig_to_string(const std::vector<FreeWord>& c) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << fw_to_string(c[i]);
    os << ']';
    return os.str();
}

inline std::vector<FreeWord> wconfig_from_string(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw DomainError("bad config: " + s);
    std::vector<FreeWord> out;
    std::istringstream is(s.substr(1, s.size() - 2));
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(fw_from_string(tok));
    if (!std::is_sorted(out.begin(), out.end(), fw_shortlex_less))
        throw DomainError("config sites must be sorted: " + s);
    return out;
}

}  // namespace srw
