#pragma once
// Flat key=value config files, CSV artifacts, family manifests, a small SVG
// line chart, and the run-directory comparator.

#include <srw/cheeger.hpp>
#include <srw/liouville.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace srw {

inline constexpr const char* kSchemaVersion = "1";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Config = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// lines of key=value; '#' starts a comment; blank lines skipped
inline Config parse_config(std::istream& in) {
    Config cfg;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (cfg.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key " + key);
        cfg[key] = val;
    }
    return cfg;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config(in);
}

inline std::string cfg_get(const Config& c, const std::string& key, const std::string& dflt) {
    auto it = c.find(key);
    return it == c.end() ? dflt : it->second;
}

inline std::string cfg_require(const Config& c, const std::string& key) {
    auto it = c.find(key);
    if (it == c.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

inline long cfg_long(const Config& c, const std::string& key, long dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    try {
        size_t pos = 0;
        long v = std::stol(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not an integer: " + it->second);
    }
}

inline Weight cfg_weight(const Config& c, const std::string& key, const Weight& dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    try {
        return weight_from_string(it->second);
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not a rational: " + it->second);
    }
}

inline double cfg_double(const Config& c, const std::string& key, double dflt) {
    auto it = c.find(key);
    if (it == c.end()) return dflt;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + " is not a number: " + it->second);
    }
}

// n:rho pairs ("3:1,9:2") or bare window sizes ("1,2,3")
inline std::vector<std::pair<long, long>> parse_grid(const std::string& text) {
    std::vector<std::pair<long, long>> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto colon = item.find(':');
        try {
            if (colon == std::string::npos)
                grid.push_back({std::stol(item), 0});
            else
                grid.push_back({std::stol(item.substr(0, colon)), std::stol(item.substr(colon + 1))});
        } catch (const std::exception&) {
            throw ConfigError("bad grid entry: " + item);
        }
    }
    if (grid.empty()) throw ConfigError("empty grid");
    return grid;
}

// ---- CSV ----

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_quote(fields[i]);
    }
    out += '\n';
    return out;
}

// one logical row; quoted fields may contain commas and escaped quotes
inline std::vector<std::string> csv_parse_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<std::vector<std::string>> csv_parse(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(csv_parse_row(line));
    }
    return rows;
}

inline std::vector<std::vector<std::string>> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    return csv_parse(in);
}

// numeric field per mode: exact ratios as "num/den", floats as shortest round trip
inline std::string format_weight_exact(const Weight& w) { return weight_to_string(w); }

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

template <class W>
std::string format_value(const W& v) {
    if constexpr (std::is_same_v<W, Weight>)
        return format_weight_exact(v);
    else
        return format_double(v);
}

// ---- artifact writers (string builders, written by the callers) ----

inline std::string schedule_csv(const Schedule& s) {
    std::string out = csv_row({"j", "n_j", "m_j", "c_j", "cp_j", "eps_n", "radius_prev", "r_n",
                               "bound", "nominal"});
    for (const auto& r : s.rows)
        out += csv_row({std::to_string(r.j), std::to_string(r.n_j), std::to_string(r.m_j),
                        format_weight_exact(r.c), format_weight_exact(r.cp),
                        format_weight_exact(r.eps), std::to_string(r.radius_prev),
                        std::to_string(r.r_n), format_weight_exact(r.B),
                        format_weight_exact(r.nominal)});
    return out;
}

template <class W>
std::string tv_decay_csv(const std::vector<DecayRow<W>>& rows) {
    std::string out = csv_row({"m", "neighbor_key", "tv", "support_x", "support_y", "pruned_mass"});
    for (const auto& r : rows)
        out += csv_row({std::to_string(r.m), r.neighbor, format_value<W>(r.t),
                        std::to_string(r.support_x), std::to_string(r.support_y),
                        format_value<W>(r.pruned)});
    return out;
}

template <class A, class W>
std::string bounds_csv(const BoundReport<A, W>& rep) {
    std::string out = csv_row(
        {"j", "m_j", "neighbor_key", "tv", "bound", "nominal", "contained", "pruned_mass",
         "residual"});
    for (const auto& r : rep.rows)
        out += csv_row({std::to_string(r.j), std::to_string(r.m_j), r.neighbor,
                        format_value<W>(r.T), format_weight_exact(r.B),
                        format_weight_exact(r.nominal), r.contained ? "1" : "0",
                        format_value<W>(r.err),
                        r.residual ? format_value<W>(*r.residual) : ""});
    return out;
}

inline std::string cheeger_csv_header() {
    return csv_row(
        {"graph", "vertices", "edges", "connected", "h", "phi", "lambda1", "band_lo", "band_hi"});
}

inline std::string cheeger_csv_line(const std::string& name, const CheegerReport& rep) {
    return csv_row({name, std::to_string(rep.vertices), std::to_string(rep.edges),
                    rep.connected ? "1" : "0",
                    rep.h_exact ? format_weight_exact(*rep.h_exact) : "",
                    rep.phi_exact ? format_weight_exact(*rep.phi_exact) : "",
                    format_double(rep.lambda1), format_double(rep.band_lo),
                    format_double(rep.band_hi)});
}

template <class A>
std::string vertices_csv(const SchreierBall<A>& ball) {
    std::string out = csv_row({"key", "distance"});
    for (size_t i = 0; i < ball.vertices.size(); ++i)
        out += csv_row({A::point_to_string(ball.vertices[i]), std::to_string(ball.distance[i])});
    return out;
}

template <class A>
std::string edges_csv(const SchreierBall<A>& ball) {
    std::string out = csv_row({"src_key", "generator_label", "dst_key"});
    for (const auto& e : ball.edges)
        out += csv_row({A::point_to_string(ball.vertices[e.src]), ball.gens[e.gen].first,
                        A::point_to_string(ball.vertices[e.dst])});
    return out;
}

template <class A>
std::string measure_csv(const GroupMeasure<A>& mu) {
    std::string out = csv_row({"element", "weight"});
    for (const auto& [g, w] : mu.entries)
        out += csv_row({A::elem_to_string(g), format_weight_exact(w)});
    return out;
}

template <class A>
GroupMeasure<A> measure_from_csv(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty() || rows[0] != std::vector<std::string>{"element", "weight"})
        throw ConfigError("bad measure file header");
    std::vector<std::pair<typename A::Elem, Weight>> entries;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 2) throw ConfigError("bad measure row");
        entries.push_back({A::elem_from_string(rows[i][0]), weight_from_string(rows[i][1])});
    }
    return make_measure<A>(std::move(entries));
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ---- family manifests ----

template <class A>
void save_family(const CouplingFamily<A>& family, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::string manifest = csv_row(
        {"n", "r_n", "eps", "measured_eps", "radius", "k_file", "nu_file", "conjugator"});
    for (const auto& e : family.entries) {
        std::string kf = "K_" + std::to_string(e.n) + ".csv";
        std::string nf = "nu_" + std::to_string(e.n) + ".csv";
        std::string kout = csv_row({"key"});
        for (const auto& p : e.K) kout += csv_row({A::point_to_string(p)});
        write_file(dir / kf, kout);
        write_file(dir / nf, measure_csv<A>(e.nu));
        manifest += csv_row({std::to_string(e.n), std::to_string(e.r_n),
                             format_weight_exact(e.eps), format_weight_exact(e.measured_eps),
                             e.radius ? std::to_string(*e.radius) : "", kf, nf,
                             e.conjugator ? A::elem_to_string(*e.conjugator) : ""});
    }
    write_file(dir / "family.csv", manifest);
    write_file(dir / "base.txt", A::point_to_string(family.base) + "\n");
}

// reads the manifest back; certificates are NOT trusted from disk — call
// recertify afterwards before scheduling against the result
template <class A>
CouplingFamily<A> load_family(const std::filesystem::path& dir) {
    CouplingFamily<A> family;
    family.base = A::point_from_string(trim(read_file(dir / "base.txt")));
    auto rows = load_csv((dir / "family.csv").string());
    std::vector<std::string> header{"n",      "r_n",    "eps",     "measured_eps",
                                    "radius", "k_file", "nu_file", "conjugator"};
    if (rows.empty() || rows[0] != header) throw ConfigError("bad family manifest header");
    for (size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != header.size()) throw ConfigError("bad family manifest row");
        FamilyEntry<A> e;
        e.n = std::stol(r[0]);
        e.r_n = std::stol(r[1]);
        e.eps = weight_from_string(r[2]);
        e.measured_eps = weight_from_string(r[3]);
        if (!r[4].empty()) e.radius = std::stol(r[4]);
        auto krows = load_csv((dir / r[5]).string());
        if (krows.empty() || krows[0] != std::vector<std::string>{"key"})
            throw ConfigError("bad vertex file header in " + r[5]);
        for (size_t k = 1; k < krows.size(); ++k)
            e.K.push_back(A::point_from_string(krows[k].at(0)));
        std::sort(e.K.begin(), e.K.end(), A::point_less);
        e.nu = measure_from_csv<A>(load_csv((dir / r[6]).string()));
        if (!r[7].empty()) e.conjugator = A::elem_from_string(r[7]);
        family.entries.push_back(std::move(e));
    }
    validate_family<A>(family);
    return family;
}

// re-runs the coupling certificate of every entry against its stored eps;
// loaded manifests must pass before they are eligible for scheduling
template <class A>
void recertify_family(CouplingFamily<A>& family) {
    for (auto& e : family.entries)
        e.measured_eps = certify_exhaustive<A>(e.K, e.nu, e.eps);
}

// ---- SVG line chart ----

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// fixed-size decay chart; log-free, annotated axes, one polyline per series
inline std::string svg_line_chart(const std::string& title, const std::vector<SvgSeries>& series) {
    const double W = 720, H = 420, L = 70, R = 20, T = 40, B = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    ymin = std::min(ymin, 0.0);
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    const char* colors[] = {"#1b6ca8", "#c0392b", "#27873b", "#8e44ad", "#b7791f", "#16747e"};
    std::ostringstream os;
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"15\">"
       << title << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"#444\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
       << "\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = xmin + (xmax - xmin) * i / 4, yv = ymin + (ymax - ymin) * i / 4;
        os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << xv
           << "</text>\n";
        os << "<text x=\"" << L - 8 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << yv
           << "</text>\n";
        os << "<line x1=\"" << L << "\" y1=\"" << py(yv) << "\" x2=\"" << W - R << "\" y2=\""
           << py(yv) << "\" stroke=\"#ddd\" stroke-dasharray=\"3,4\"/>\n";
    }
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.points.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << colors[si % 6]
           << "\" stroke-width=\"1.8\" points=\"";
        for (auto [x, y] : s.points) os << px(x) << "," << py(y) << " ";
        os << "\"/>\n";
        for (auto [x, y] : s.points)
            os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.6\" fill=\""
               << colors[si % 6] << "\"/>\n";
        os << "<text x=\"" << W - R - 8 << "\" y=\"" << T + 16 + 16 * double(si)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
           << colors[si % 6] << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// ---- run comparison ----

struct CompareDiff {
    std::string file;
    size_t row = 0;
    size_t col = 0;
    std::string left, right;
    double delta = 0;
};

struct CompareReport {
    bool schema_ok = true;
    std::string note;
    std::vector<CompareDiff> diffs;
    bool within_tolerance = true;
};

namespace detail {

inline bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            out = double(weight_from_string(s));
            return true;
        }
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace detail

// field-by-field diff of the artifact CSVs in two run directories; exact-mode
// pairs must match bit for bit, mixed runs within the reported pruned mass
inline CompareReport compare_runs(const std::filesystem::path& d1,
                                  const std::filesystem::path& d2) {
    CompareReport rep;
    auto meta1p = d1 / "meta.csv";
    auto meta2p = d2 / "meta.csv";
    if (!std::filesystem::exists(meta1p) || !std::filesystem::exists(meta2p)) {
        rep.schema_ok = false;
        rep.note = "missing meta.csv";
        return rep;
    }
    auto meta_map = [](const std::filesystem::path& p) {
        std::map<std::string, std::string> m;
        for (const auto& r : load_csv(p.string()))
            if (r.size() == 2) m[r[0]] = r[1];
        return m;
    };
    auto m1 = meta_map(meta1p), m2 = meta_map(meta2p);
    if (m1["schema_version"] != m2["schema_version"]) {
        rep.schema_ok = false;
        rep.note = "schema version mismatch: " + m1["schema_version"] + " vs " +
                   m2["schema_version"];
        return rep;
    }
    bool both_exact = m1["mode"] == "exact" && m2["mode"] == "exact";

    for (const char* name : {"schedule.csv", "tv_decay.csv", "bounds.csv", "cheeger.csv"}) {
        auto p1 = d1 / name, p2 = d2 / name;
        bool e1 = std::filesystem::exists(p1), e2 = std::filesystem::exists(p2);
        if (e1 != e2) {
            rep.schema_ok = false;
            rep.note = std::string(name) + " present in only one run";
            return rep;
        }
        if (!e1) continue;
        auto r1 = load_csv(p1.string()), r2 = load_csv(p2.string());
        if (r1.empty() || r2.empty() || r1[0] != r2[0]) {
            rep.schema_ok = false;
            rep.note = std::string(name) + ": header mismatch";
            return rep;
        }
        if (r1.size() != r2.size()) {
            rep.schema_ok = false;
            rep.note = std::string(name) + ": row count differs";
            return rep;
        }
        // per-row allowance: both runs' reported pruned mass
        int prune_col = -1;
        for (size_t c = 0; c < r1[0].size(); ++c)
            if (r1[0][c] == "pruned_mass") prune_col = int(c);
        for (size_t i = 1; i < r1.size(); ++i) {
            if (r1[i].size() != r2[i].size()) {
                rep.schema_ok = false;
                rep.note = std::string(name) + ": ragged row";
                return rep;
            }
            double allowance = 1e-12;
            if (prune_col >= 0) {
                double a = 0, b = 0;
                detail::parse_number(r1[i][size_t(prune_col)], a);
                detail::parse_number(r2[i][size_t(prune_col)], b);
                allowance += 2 * (a + b);
            }
            for (size_t c = 0; c < r1[i].size(); ++c) {
                if (r1[i][c] == r2[i][c]) continue;
                CompareDiff diff{name, i, c, r1[i][c], r2[i][c], 0};
                double a, b;
                bool numeric =
                    detail::parse_number(r1[i][c], a) && detail::parse_number(r2[i][c], b);
                if (numeric) diff.delta = std::abs(a - b);
                rep.diffs.push_back(diff);
                if (both_exact || !numeric || diff.delta > allowance)
                    rep.within_tolerance = false;
            }
        }
    }
    return rep;
}

}  // namespace srw
