#pragma once
// Schedule selection and assembly of the layered measure, plus runtime
// verification of the coupling bounds along the walk.
//
// Weights c_j follow a fixed geometric profile summing to one; truncation at
// level J renormalizes to c'_j. Level j couples through family entry n_j,
// chosen so that m_j walk steps of the lower levels stay inside K_{n_j} and
// the coupling cost m_j * radius_{n_{j-1}} * eps_{n_j} is under 1/j.

#include <srw/family.hpp>

#include <sstream>

namespace srw {

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScheduleRow {
    long j = 0;
    long n_j = 0;
    size_t entry = 0;  // index into the family
    long m_j = 1;
    Weight c;        // geometric weight of level j
    Weight cp;       // renormalized after truncation
    Weight eps;      // eps_{n_j}
    long radius_prev = 1;  // displacement bound of the previous level
    long r_n = 0;
    Weight B;        // 2 (sum_{i<j} c'_i)^{m_j} + 2 (m_j - 1) radius_prev eps_{n_j}
    Weight nominal;  // 3/j
};

struct Schedule {
    Weight ratio;
    long J = 0;
    Weight c0, cp0;
    std::vector<ScheduleRow> rows;
};

// least m >= 1 with (sum of c_i below level j)^m <= 1/j
inline long select_m(const Weight& partial_below, long j, long cap = 1000000) {
    if (j < 1) throw ScheduleError("level index must be positive");
    if (partial_below < 0 || partial_below >= 1)
        throw ScheduleError("partial sum must lie in [0,1)");
    Weight target(1, j), p = partial_below;
    for (long m = 1; m <= cap; ++m) {
        if (p <= target) return m;
        p *= partial_below;
    }
    throw ScheduleError("no admissible power below the cap");
}

// least family index past `prev` whose entry satisfies both schedule conditions;
// the thrown message carries what was needed, for diagnosing exhausted grids
template <class A>
size_t select_n(const CouplingFamily<A>& family, long j, long m_j, long radius_prev,
                std::optional<size_t> prev) {
    Weight budget(1, j);
    long reach = m_j * radius_prev;
    for (size_t idx = prev ? *prev + 1 : 0; idx < family.entries.size(); ++idx) {
        const auto& e = family.entries[idx];
        if (e.r_n < reach) continue;
        if (Weight(reach) * e.eps > budget) continue;
        return idx;
    }
    std::ostringstream os;
    os << "family exhausted at level " << j << ": need inscribed radius >= " << reach
       << " and coupling bound <= " << weight_to_string(budget / reach)
       << " in an entry past index " << (prev ? long(*prev) : -1);
    throw ScheduleError(os.str());
}

template <class A>
Schedule build_schedule(CouplingFamily<A>& family, const Weight& ratio, long J,
                        long radius_cap = 48, size_t radius_vertex_cap = 2000000) {
    if (ratio <= 0 || ratio >= 1) throw ScheduleError("ratio must lie in (0,1)");
    if (J < 0) throw ScheduleError("negative truncation level");
    Schedule s;
    s.ratio = ratio;
    s.J = J;
    s.c0 = 1 - ratio;

    Weight below = s.c0;  // sum of c_i for i < j
    Weight cj = s.c0;
    std::optional<size_t> prev;
    long prev_m = 1;
    for (long j = 1; j <= J; ++j) {
        ScheduleRow row;
        row.j = j;
        cj *= ratio;
        row.c = cj;
        row.m_j = select_m(below, j);
        if (row.m_j < prev_m) throw ScheduleError("powers must not decrease");
        prev_m = row.m_j;
        row.radius_prev = (j == 1) ? 1 : ensure_radius(family, *prev, radius_cap, radius_vertex_cap);
        row.entry = select_n<A>(family, j, row.m_j, row.radius_prev, prev);
        const auto& e = family.entries[row.entry];
        row.n_j = e.n;
        row.eps = e.eps;
        row.r_n = e.r_n;
        row.nominal = Weight(3, j);
        prev = row.entry;
        below += cj;
        s.rows.push_back(row);
    }

    Weight total = s.c0;
    for (const auto& row : s.rows) total += row.c;
    s.cp0 = s.c0 / total;
    Weight prefix = s.cp0;
    for (auto& row : s.rows) {
        row.cp = row.c / total;
        // prefix here is sum_{i<j} c'_i
        Weight drift = prefix;
        Weight b = 2;
        for (long t = 0; t < row.m_j; ++t) b *= drift;
        row.B = b + Weight(2 * (row.m_j - 1) * row.radius_prev) * row.eps;
        prefix += row.cp;
    }
    return s;
}

// base step distribution: uniform on S and inverses as a set
template <class A>
GroupMeasure<A> base_measure() {
    std::vector<typename A::Elem> sup;
    for (auto& [label, g] : generators_with_inverses<A>()) sup.push_back(g);
    return uniform_on_set<A>(sup);
}

// c'_0 nu_0 + sum_j c'_j nu_{n_j}; refuses families whose certificates fail
template <class A>
GroupMeasure<A> assemble(const CouplingFamily<A>& family, const Schedule& s) {
    validate_family<A>(family);
    auto nu0 = base_measure<A>();
    std::vector<std::pair<Weight, const GroupMeasure<A>*>> parts{{s.cp0, &nu0}};
    for (const auto& row : s.rows) {
        const auto& e = family.entries.at(row.entry);
        if (e.measured_eps > e.eps)
            throw CertificateError("entry n=" + std::to_string(e.n) +
                                   " violates its advertised coupling bound");
        if (!symmetrize_check<A>(e.nu))
            throw CertificateError("entry n=" + std::to_string(e.n) + " is not symmetric");
        parts.push_back({row.cp, &e.nu});
    }
    auto mu = mix<A>(parts);
    if (total_mass<A>(mu) != Weight(1)) throw CertificateError("assembled mass is not one");
    for (const auto& [g, w] : nu0.entries)
        if (!measure_supports<A>(mu, g))
            throw CertificateError("assembled measure misses a base generator");
    if (!symmetrize_check<A>(mu)) throw CertificateError("assembled measure is not symmetric");
    return mu;
}

template <class W>
struct BoundRow {
    long j = 0;
    long m_j = 1;
    std::string neighbor;
    W T{};           // tv(mu^(m_j).x, mu^(m_j).y)
    Weight B;        // certified bound
    Weight nominal;  // 3/j
    bool contained = false;
    W err{};  // 2 * (pruned mass of both walks); zero in exact mode
    std::optional<W> residual;  // T - (c'_0)^{m_j} tv of the pure base walk
};

template <class A, class W>
struct BoundReport {
    std::vector<typename A::Point> neighbors;
    std::vector<BoundRow<W>> rows;
    bool all_ok = true;
};

// walks mu m_J steps from base and from every S-neighbor, checking T_j <= B_j
// (plus pruning slack in float mode) at each checkpoint, and that the walk of
// the sub-level mixture stays inside K_{n_j} through its first m_j - 1 steps
template <class A, class W>
BoundReport<A, W> verify_bound(const CouplingFamily<A>& family, const Schedule& s,
                               const GroupMeasure<A>& mu, const typename A::Point& base,
                               const StepOptions& opt = {}, bool with_residual = true) {
    BoundReport<A, W> report;
    for (auto& [label, g] : generators_with_inverses<A>()) {
        auto y = A::act(g, base);
        bool seen = !A::point_less(y, base) && !A::point_less(base, y);
        for (const auto& z : report.neighbors)
            if (!A::point_less(y, z) && !A::point_less(z, y)) seen = true;
        if (!seen) report.neighbors.push_back(y);
    }

    long mmax = s.rows.empty() ? 0 : s.rows.back().m_j;
    auto nu0 = base_measure<A>();

    // per start point: distributions after each step count up to mmax
    auto walk = [&](const typename A::Point& z) {
        std::vector<OrbitDist<A, W>> out{dirac<A, W>(z)};
        for (long t = 1; t <= mmax; ++t) out.push_back(step<A, W>(out.back(), mu, opt));
        return out;
    };
    auto walk_x = walk(base);

    for (const auto& y : report.neighbors) {
        auto walk_y = walk(y);
        for (const auto& row : s.rows) {
            BoundRow<W> r;
            r.j = row.j;
            r.m_j = row.m_j;
            r.neighbor = A::point_to_string(y);
            r.B = row.B;
            r.nominal = row.nominal;
            const auto& dx = walk_x[size_t(row.m_j)];
            const auto& dy = walk_y[size_t(row.m_j)];
            r.T = tv<A, W>(dx, dy);
            r.err = W(2) * (dx.deficit + dy.deficit);

            // low-prefix containment: the mixture of levels below j, walked
            // m_j - 1 steps from either endpoint, must stay inside K_{n_j}
            std::vector<std::pair<Weight, const GroupMeasure<A>*>> parts{{s.cp0, &nu0}};
            Weight pmass = s.cp0;
            for (const auto& prow : s.rows) {
                if (prow.j >= row.j) break;
                parts.push_back({prow.cp, &family.entries.at(prow.entry).nu});
                pmass += prow.cp;
            }
            for (auto& [c, m] : parts) c /= pmass;
            auto prefix = mix<A>(parts);
            const auto& K = family.entries.at(row.entry).K;
            r.contained = true;
            for (const auto& z : {base, y}) {
                auto d = dirac<A, Weight>(z);
                for (long t = 0; t < row.m_j && r.contained; ++t) {
                    for (const auto& e : d.entries)
                        if (!point_set_contains<A>(K, e.first)) {
                            r.contained = false;
                            break;
                        }
                    if (t + 1 < row.m_j) d = step<A, Weight>(d, prefix);
                }
                if (!r.contained) break;
            }

            if (with_residual) {
                auto bx = dirac<A, W>(base);
                auto by = dirac<A, W>(y);
                for (long t = 0; t < row.m_j; ++t) {
                    bx = step<A, W>(bx, nu0, opt);
                    by = step<A, W>(by, nu0, opt);
                }
                W scale{1};
                for (long t = 0; t < row.m_j; ++t)
                    scale = scale * W(weight_cast(s.cp0, (W*)nullptr));
                r.residual = r.T - scale * tv<A, W>(bx, by);
            }
            if constexpr (std::is_same_v<W, Weight>) {
                if (r.T > r.B || !r.contained) report.all_ok = false;
            } else {
                if (double(r.T) > double(r.B) + double(r.err) || !r.contained)
                    report.all_ok = false;
            }
            report.rows.push_back(std::move(r));
        }
    }
    return report;
}

template <class W>
struct DecayRow {
    long m = 0;
    std::string neighbor;
    W t{};
    size_t support_x = 0;
    size_t support_y = 0;
    W pruned{};
};

// tv against every neighbor for m = 1..horizon
template <class A, class W>
std::vector<DecayRow<W>> run_decay(const GroupMeasure<A>& mu, const typename A::Point& base,
                                   const std::vector<typename A::Point>& neighbors, long horizon,
                                   const StepOptions& opt = {}) {
    std::vector<DecayRow<W>> rows;
    auto dx = dirac<A, W>(base);
    std::vector<OrbitDist<A, W>> dys;
    for (const auto& y : neighbors) dys.push_back(dirac<A, W>(y));
    for (long m = 1; m <= horizon; ++m) {
        dx = step<A, W>(dx, mu, opt);
        for (size_t i = 0; i < neighbors.size(); ++i) {
            dys[i] = step<A, W>(dys[i], mu, opt);
            DecayRow<W> r;
            r.m = m;
            r.neighbor = A::point_to_string(neighbors[i]);
            r.t = tv<A, W>(dx, dys[i]);
            r.support_x = dx.entries.size();
            r.support_y = dys[i].entries.size();
            r.pruned = dx.deficit + dys[i].deficit;
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

}  // namespace srw
