// Command line front end: orbit graphs, coupling families, walk schedules,
// decay experiments, isoperimetry reports, and run comparison.
//
// Exit codes: 0 success and all asserted bounds hold, 1 bound or schedule
// failure, 2 configuration problems.

#include <srw/io.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace srw;

namespace {

struct GroupTag {
    enum Kind { thompson, lamp_z, lamp_f2 } kind;
};

GroupTag parse_group(const Config& cfg) {
    auto g = cfg_require(cfg, "group");
    if (g == "thompson") return {GroupTag::thompson};
    if (g == "lamplighter-z") return {GroupTag::lamp_z};
    if (g == "lamplighter-f2") return {GroupTag::lamp_f2};
    throw ConfigError("unknown group: " + g);
}

// applies f to a value of type X<A> choosing A by the group key
template <class F>
int with_group(const Config& cfg, F&& f) {
    switch (parse_group(cfg).kind) {
        case GroupTag::thompson:
            return f(static_cast<ThompsonAction*>(nullptr));
        case GroupTag::lamp_z:
            return f(static_cast<LampZAction*>(nullptr));
        case GroupTag::lamp_f2:
            return f(static_cast<LampF2Action*>(nullptr));
    }
    return 2;
}

template <class A>
typename A::Point parse_basepoint(const Config& cfg) {
    std::string dflt = std::is_same_v<A, ThompsonAction> ? "1/2" : "[]";
    return A::point_from_string(cfg_get(cfg, "basepoint", dflt));
}

Config overlay(Config cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
        cfg[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
    }
    return cfg;
}

void write_meta(const std::filesystem::path& dir, const Config& cfg, const std::string& mode) {
    std::string meta = csv_row({"schema_version", kSchemaVersion}) + csv_row({"mode", mode});
    for (const char* k : {"group", "basepoint", "ratio", "J", "horizon", "grid", "preset"}) {
        auto it = cfg.find(k);
        if (it != cfg.end()) meta += csv_row({k, it->second});
    }
    write_file(dir / "meta.csv", meta);
}

bool has_out(const Config& cfg) {
    auto it = cfg.find("out");
    return it != cfg.end() && !it->second.empty();
}

std::filesystem::path out_dir(const Config& cfg) {
    auto out = cfg_require(cfg, "out");
    if (out.empty()) throw ConfigError("out must name a directory");
    std::filesystem::create_directories(out);
    return out;
}

// family per config: either loaded from a manifest directory (and recertified)
// or built fresh from the grid
template <class A>
CouplingFamily<A> obtain_family(const Config& cfg) {
    if (cfg.count("family")) {
        auto fam = load_family<A>(cfg.at("family"));
        recertify_family<A>(fam);
        return fam;
    }
    CouplingFamily<A> fam;
    fam.base = parse_basepoint<A>(cfg);
    auto grid = parse_grid(cfg_require(cfg, "grid"));
    for (auto [n, rho] : grid) {
        if constexpr (std::is_same_v<A, ThompsonAction>) {
            if (rho <= 0) throw ConfigError("thompson grid entries need n:rho");
            fam.entries.push_back(thompson_entry(fam.base, n, rho));
        } else if constexpr (std::is_same_v<A, LampZAction>) {
            fam.entries.push_back(lamplighter_z_entry(n));
        } else {
            fam.entries.push_back(lamplighter_f2_entry(n));
        }
    }
    validate_family<A>(fam);
    return fam;
}

int cmd_build_graph(const Config& cfg) {
    return with_group(cfg, [&](auto* tag) {
        using A = std::remove_pointer_t<decltype(tag)>;
        auto base = parse_basepoint<A>(cfg);
        long radius = cfg_long(cfg, "radius", 4);
        auto ball = orbit_ball<A>(base, radius, size_t(cfg_long(cfg, "max_vertices", 5000000)));
        auto dir = out_dir(cfg);
        write_file(dir / "vertices.csv", vertices_csv<A>(ball));
        write_file(dir / "edges.csv", edges_csv<A>(ball));
        write_meta(dir, cfg, "exact");
        std::cout << "ball of radius " << radius << " around " << A::point_to_string(base)
                  << ": " << ball.vertices.size() << " vertices, " << ball.edges.size()
                  << " half-edges -> " << dir.string() << "\n";
        return 0;
    });
}

int cmd_make_family(const Config& cfg) {
    return with_group(cfg, [&](auto* tag) {
        using A = std::remove_pointer_t<decltype(tag)>;
        auto fam = obtain_family<A>(cfg);
        if (cfg_long(cfg, "measure_radius", 0) != 0)
            for (size_t i = 0; i < fam.entries.size(); ++i) ensure_radius<A>(fam, i);
        auto dir = out_dir(cfg);
        save_family<A>(fam, dir);
        write_meta(dir, cfg, "exact");
        for (const auto& e : fam.entries)
            std::cout << "n=" << e.n << " |K|=" << e.K.size() << " r_n=" << e.r_n
                      << " eps=" << weight_to_string(e.eps)
                      << " certified=" << weight_to_string(e.measured_eps) << "\n";
        std::cout << "family manifest -> " << dir.string() << "\n";
        return 0;
    });
}

int cmd_schedule(const Config& cfg) {
    return with_group(cfg, [&](auto* tag) {
        using A = std::remove_pointer_t<decltype(tag)>;
        auto fam = obtain_family<A>(cfg);
        auto s = build_schedule<A>(fam, cfg_weight(cfg, "ratio", Weight(1, 2)),
                                   cfg_long(cfg, "J", 2));
        auto text = schedule_csv(s);
        if (has_out(cfg)) {
            auto dir = out_dir(cfg);
            write_file(dir / "schedule.csv", text);
            write_meta(dir, cfg, "exact");
            std::cout << "schedule -> " << dir.string() << "\n";
        } else {
            std::cout << text;
        }
        return 0;
    });
}

std::string cheeger_rows_for(const Config& cfg) {
    std::string rows;
    with_group(cfg, [&](auto* tag) {
        using A = std::remove_pointer_t<decltype(tag)>;
        auto base = parse_basepoint<A>(cfg);
        auto radii = parse_grid(cfg_get(cfg, "cheeger_radius", "4"));
        for (auto [r, unused] : radii) {
            auto ball = orbit_ball<A>(base, r, size_t(cfg_long(cfg, "max_vertices", 5000000)));
            auto rep = cheeger_report<A>(ball, size_t(cfg_long(cfg, "exhaustive_limit", 20)));
            rows += cheeger_csv_line(
                cfg_require(cfg, "group") + " B(" + A::point_to_string(base) + "," +
                    std::to_string(r) + ")",
                rep);
        }
        return 0;
    });
    return rows;
}

int cmd_cheeger(const Config& cfg) {
    auto text = cheeger_csv_header() + cheeger_rows_for(cfg);
    if (has_out(cfg)) {
        auto dir = out_dir(cfg);
        write_file(dir / "cheeger.csv", text);
        write_meta(dir, cfg, "exact");
        std::cout << "cheeger report -> " << dir.string() << "\n";
    }
    std::cout << text;
    return 0;
}

// decay table and chart plus, for assembled runs, the schedule and per-level
// bound verification; this is the experiment driver behind the presets
template <class A, class W>
int run_typed(const Config& cfg, const std::string& mode) {
    auto base = parse_basepoint<A>(cfg);
    StepOptions opt;
    opt.workers = int(cfg_long(cfg, "workers", 1));
    opt.prune = cfg_double(cfg, "prune", mode == "float" ? 1e-15 : 0.0);
    if (mode == "exact" && opt.prune != 0)
        throw ConfigError("pruning requires mode=float");

    auto dir = out_dir(cfg);
    write_meta(dir, cfg, mode);
    std::string preset = cfg_get(cfg, "preset", "assembled");
    bool ok = true;

    GroupMeasure<A> mu;
    long horizon = cfg_long(cfg, "horizon", 2);
    if (preset == "contrast") {
        mu = lazify<A>(base_measure<A>(), cfg_weight(cfg, "lazy", Weight(1, 2)));
    } else if (preset == "assembled") {
        auto fam = obtain_family<A>(cfg);
        auto s = build_schedule<A>(fam, cfg_weight(cfg, "ratio", Weight(1, 2)),
                                   cfg_long(cfg, "J", 2));
        write_file(dir / "schedule.csv", schedule_csv(s));
        mu = assemble<A>(fam, s);
        auto rep = verify_bound<A, W>(fam, s, mu, base, opt);
        write_file(dir / "bounds.csv", bounds_csv<A, W>(rep));
        for (const auto& r : rep.rows) {
            std::cout << "j=" << r.j << " m=" << r.m_j << " y=" << r.neighbor
                      << " tv=" << format_value<W>(r.T) << " bound=" << format_weight_exact(r.B)
                      << " nominal=" << format_weight_exact(r.nominal)
                      << (r.contained ? "" : " CONTAINMENT-FAILED") << "\n";
        }
        if (!rep.all_ok) ok = false;
        if (!s.rows.empty()) horizon = std::max(horizon, s.rows.back().m_j);
    } else {
        throw ConfigError("unknown preset: " + preset);
    }

    std::vector<typename A::Point> nbrs;
    for (auto& [label, g] : generators_with_inverses<A>()) {
        auto y = A::act(g, base);
        bool seen = !A::point_less(y, base) && !A::point_less(base, y);
        for (const auto& z : nbrs)
            if (!A::point_less(y, z) && !A::point_less(z, y)) seen = true;
        if (!seen) nbrs.push_back(y);
    }
    auto decay = run_decay<A, W>(mu, base, nbrs, horizon, opt);
    write_file(dir / "tv_decay.csv", tv_decay_csv<W>(decay));

    write_file(dir / "cheeger.csv", cheeger_csv_header() + cheeger_rows_for(cfg));

    if (cfg_long(cfg, "svg", 1) != 0) {
        std::vector<SvgSeries> series;
        for (const auto& y : nbrs) series.push_back({"y=" + A::point_to_string(y), {}});
        for (const auto& r : decay)
            for (auto& s : series)
                if (s.label == "y=" + r.neighbor)
                    s.points.push_back({double(r.m), double(r.t)});
        write_file(dir / "decay.svg",
                   svg_line_chart(cfg_require(cfg, "group") + " walk decay", series));
    }

    // one-step contraction holds up to the float-mode pruning allowance
    for (const auto& y : nbrs) {
        std::string key = A::point_to_string(y);
        const DecayRow<W>* prev = nullptr;
        for (const auto& r : decay) {
            if (r.neighbor != key) continue;
            if (prev && double(r.t) > double(prev->t) + 2 * double(r.pruned) + 1e-12) {
                std::cout << "decay not monotone at m=" << r.m << " y=" << key << "\n";
                ok = false;
            }
            prev = &r;
        }
    }

    std::cout << "artifacts -> " << dir.string() << (ok ? "" : " (BOUND FAILURE)") << "\n";
    return ok ? 0 : 1;
}

int cmd_run(const Config& cfg) {
    return with_group(cfg, [&](auto* tag) {
        using A = std::remove_pointer_t<decltype(tag)>;
        auto mode = cfg_get(cfg, "mode", "exact");
        if (mode == "exact") return run_typed<A, Weight>(cfg, mode);
        if (mode == "float") return run_typed<A, double>(cfg, mode);
        throw ConfigError("unknown mode: " + mode);
    });
}

int cmd_compare(const std::string& d1, const std::string& d2) {
    auto rep = compare_runs(d1, d2);
    if (!rep.schema_ok) {
        std::cerr << "schema mismatch: " << rep.note << "\n";
        return 2;
    }
    for (const auto& d : rep.diffs)
        std::cout << d.file << " row " << d.row << " col " << d.col << ": " << d.left << " vs "
                  << d.right << " (delta " << d.delta << ")\n";
    if (rep.diffs.empty())
        std::cout << "runs identical\n";
    else
        std::cout << rep.diffs.size() << " differing fields, "
                  << (rep.within_tolerance ? "within tolerance" : "OUT OF TOLERANCE") << "\n";
    return rep.within_tolerance ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schreier graph random walk experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string dir1, dir2;

    auto add_cfg = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "key=value config file")->required();
        sub->add_option("--set", sets, "override config entries (key=value)");
    };
    auto* c_graph = app.add_subcommand("build-graph", "enumerate an orbit ball");
    add_cfg(c_graph);
    auto* c_family = app.add_subcommand("make-family", "build and cache a coupling family");
    add_cfg(c_family);
    auto* c_sched = app.add_subcommand("schedule", "select powers and window sizes");
    add_cfg(c_sched);
    auto* c_run = app.add_subcommand("run", "full decay experiment with artifacts");
    add_cfg(c_run);
    auto* c_cheeger = app.add_subcommand("cheeger", "isoperimetry of orbit balls");
    add_cfg(c_cheeger);
    auto* c_cmp = app.add_subcommand("compare", "diff two run directories");
    c_cmp->add_option("dir1", dir1)->required();
    c_cmp->add_option("dir2", dir2)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_cmp->parsed()) return cmd_compare(dir1, dir2);
        auto cfg = overlay(load_config(config_path), sets);
        if (c_graph->parsed()) return cmd_build_graph(cfg);
        if (c_family->parsed()) return cmd_make_family(cfg);
        if (c_sched->parsed()) return cmd_schedule(cfg);
        if (c_run->parsed()) return cmd_run(cfg);
        if (c_cheeger->parsed()) return cmd_cheeger(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
