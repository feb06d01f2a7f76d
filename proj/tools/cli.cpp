#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "casimir/cross_section.hpp"
#include "casimir/error.hpp"
#include "casimir/parallel.hpp"
#include "casimir/rect_piston.hpp"
#include "casimir/spectral.hpp"
#include "casimir/thermal.hpp"

namespace casimir::cli {

namespace {

constexpr double kPi = std::numbers::pi;
const double kZ4 = kPi * kPi * kPi * kPi / 90.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kUnitsNote =
    "# units: hbar = c = k_B = 1; lengths and beta in L, frequencies and energies in 1/L, forces in 1/L^2";

double parse_length(const std::string& text, const char* name) {
    if (text == "inf" || text == "infinity") return kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || used == 0) throw DomainError(std::string(name) + ": not a number: '" + text + "'");
    return v;
}

struct Common {
    std::string field = "em";
    double a = std::numeric_limits<double>::quiet_NaN();
    double b = 1.0, c = 1.0;
    std::string h = "inf";
    std::vector<std::string> sweep;
    std::string format = "csv";
    std::string output;
    double rel_tol = 1e-12;
};

void add_common(CLI::App* app, Common& o, bool scalar_a = true) {
    app->add_option("--field", o.field, "dirichlet | neumann | em")->capture_default_str();
    if (scalar_a) app->add_option("--a", o.a, "partition height a [L]");
    app->add_option("--b", o.b, "cross-section side b [L]")->capture_default_str();
    app->add_option("--c", o.c, "cross-section side c [L]")->capture_default_str();
    app->add_option("--h", o.h, "piston height h [L], or inf")->capture_default_str();
    app->add_option("--sweep", o.sweep, "VAR START:STOP:POINTS[:lin|:log]")->expected(2);
    app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app->add_option("--output,-o", o.output, "output file (default stdout)");
    app->add_option("--rel-tol", o.rel_tol, "series relative tolerance")->capture_default_str();
}

Accuracy accuracy_of(const Common& o) {
    Accuracy acc;
    acc.rel_tol = o.rel_tol;
    acc.validate();
    return acc;
}

Representation parse_rep(const std::string& s) {
    if (s == "auto") return Representation::Auto;
    if (s == "closed") return Representation::ClosedSeries;
    if (s == "modes") return Representation::WaveguideModes;
    throw DomainError("representation must be auto, closed or modes");
}

const char* rep_name(Representation r) {
    switch (r) {
        case Representation::Auto: return "auto";
        case Representation::ClosedSeries: return "closed";
        case Representation::WaveguideModes: return "modes";
    }
    return "?";
}

// Sweep values, or a single NaN placeholder when there is no sweep.
struct Points {
    std::string variable;
    std::vector<double> values;
};

Points points_of(const Common& o, std::initializer_list<const char*> allowed) {
    if (o.sweep.empty()) return {"", {std::numeric_limits<double>::quiet_NaN()}};
    bool ok = false;
    std::string names;
    for (const char* v : allowed) {
        ok = ok || o.sweep[0] == v;
        names += names.empty() ? v : std::string(", ") + v;
    }
    if (!ok) throw DomainError("--sweep variable must be one of: " + names);
    const SweepSpec s = SweepSpec::parse(o.sweep[0], o.sweep[1]);
    return {s.variable, s.values()};
}

template <class F>
std::vector<Record> sweep_records(const Points& p, F&& at) {
    std::vector<Record> rows(p.values.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        rows[i] = at(p.values[i]);
        rows[i].fields.insert(rows[i].fields.begin(), {"index", static_cast<long long>(i)});
    });
    return rows;
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
    return s;
}

void emit(const Common& o, const std::vector<Record>& rows, std::ostream& out) {
    std::ofstream file;
    std::ostream* dst = &out;
    if (!o.output.empty()) {
        file.open(o.output);
        if (!file) throw DomainError("cannot open output file '" + o.output + "'");
        dst = &file;
    }
    if (o.format == "json")
        write_json(rows, *dst);
    else
        write_csv(rows, *dst);
}

void need(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

// ---- force ----

struct ForceOpts {
    bool box = false;
    std::string normalize = "none";
    std::string representation = "auto";
};

Record force_record(const PistonGeometry& g, Field field, const ForceOpts& fo, const Accuracy& acc) {
    Record r;
    r.add("field", field_name(field));
    r.add("a", g.a);
    r.add("b", g.b);
    r.add("c", g.c);
    r.add("h", g.h);
    const double A = g.area();
    const double pp = (field == Field::EM ? -3.0 : -1.5) * kZ4 * A / (8.0 * kPi * kPi * std::pow(g.a, 4));
    double norm = 1.0;
    if (fo.normalize == "parallel") norm = pp;
    if (fo.normalize == "fprime") norm = (field == Field::EM ? 3.0 : 1.5) * kZ4 / (8.0 * kPi * kPi * A);
    std::vector<std::pair<std::string, double>> normalized;

    if (g.infinite()) {
        const Representation rep = parse_rep(fo.representation);
        const ForceResult fr = field == Field::EM ? force_em(g, acc, rep) : force_scalar(g, field, acc, rep);
        const double regj = fr.terms.at("region_II_J");
        const double box = fr.total - regj;
        const double power = fr.terms.at("parallel_plate") + fr.terms.at("perimeter") + fr.terms.at("edge") +
                             fr.terms.at("one_dim_EM");
        r.add("force", fo.box ? box : fr.total);
        r.add("force_piston", fr.total);
        r.add("force_box", box);
        for (const char* k : {"parallel_plate", "perimeter", "edge", "one_dim_EM", "region_II_J", "exp_series"})
            r.add(k, fr.terms.at(k));
        r.add("power_terms", power);
        r.add("power_terms_const", power + regj);
        r.add("series_bound", fr.series_bound);
        r.add("representation", rep_name(fr.representation));
        normalized = {{"normalized", fo.box ? box : fr.total},
                      {"normalized_piston", fr.total},
                      {"normalized_box", box},
                      {"normalized_power_terms", power},
                      {"normalized_power_terms_const", power + regj}};
    } else {
        need(!fo.box, "--box needs h = inf");
        const FiniteForce ff = force_finite_h(g, field, acc);
        r.add("force", ff.total);
        r.add("region_I", ff.region_I);
        r.add("region_II", ff.region_II);
        r.add("one_dim_EM", ff.one_dim_EM);
        r.add("series_bound", ff.series_bound);
        normalized = {{"normalized", ff.total}};
    }
    if (fo.normalize != "none") {
        r.add("normalization", fo.normalize);
        for (const auto& [k, v] : normalized) r.add(k, v / norm);
    }
    return r;
}

// ---- thermal ----

struct ThermalOpts {
    double beta = std::numeric_limits<double>::quiet_NaN();
    std::string normalize = "none";
    std::string asymptote = "none";
    std::string representation = "auto";
};

Record thermal_record(const PistonGeometry& g, const ThermalState& t, Field field, const ThermalOpts& to,
                      const Accuracy& acc) {
    Record r;
    r.add("field", field_name(field));
    r.add("a", g.a);
    r.add("b", g.b);
    r.add("c", g.c);
    r.add("h", g.h);
    r.add("beta", t.beta);
    r.add("beta_over_b", t.beta / g.b);
    const ThermalResult tr = thermal_force(g, t, field, acc, parse_rep(to.representation));
    r.add("force", tr.value);
    r.add("series_bound", tr.series_bound);
    if (!g.infinite()) {
        const ThermalResult fe = field == Field::EM ? free_energy_em(g, t, acc) : free_energy_scalar(g, t, field, acc);
        r.add("free_energy", fe.value);
    }
    const double sb = -(field == Field::EM ? 2.0 : 1.0) * kZ4 * g.area() / (kPi * kPi * std::pow(t.beta, 4));
    if (to.normalize == "sb") {
        r.add("force_sb", sb);
        r.add("normalized", tr.value / sb);
    }
    if (to.asymptote == "low-temp") {
        const double asy = low_temp_asymptote_force(g, t, field);
        r.add("asymptote", asy);
        if (to.normalize == "sb") r.add("normalized_asymptote", asy / sb);
    }
    r.add("warnings", join(tr.warnings));
    return r;
}

// ---- oracle ----

struct OracleOpts {
    std::string mode = "fit";
    double k_max = std::numeric_limits<double>::quiet_NaN();
    int points = 16;
    double lambda_scale = 6.0;
    double beta = std::numeric_limits<double>::quiet_NaN();
    std::string dump;
};

Record oracle_fit_record(const Box& box, Field field, const OracleOpts& oo) {
    std::vector<double> grid = default_lambda_grid(box, oo.points);
    if (!std::isnan(oo.k_max)) {
        need(oo.k_max > 0.0 && std::isfinite(oo.k_max), "--kmax must be positive and finite");
        const double scale = oo.k_max / 44.0 / grid.back();
        for (double& l : grid) l *= scale;
    }
    const CutoffFit fit = fit_cutoff_expansion(box, field, grid);
    Record r;
    r.add("field", field_name(field));
    r.add("a", box.a);
    r.add("b", box.b);
    r.add("c", box.c);
    r.add("k_max", fit.k_max);
    r.add("lambda_lo", grid.front());
    r.add("lambda_hi", grid.back());
    r.add("points", static_cast<long long>(grid.size()));
    r.add("c4", fit.c4);
    r.add("c3", fit.c3);
    r.add("c2", fit.c2);
    r.add("E_tilde", fit.E_tilde);
    r.add("residual", fit.residual);
    const double w = field == Field::EM ? 2.0 : 1.0;
    r.add("c4_ratio", fit.c4 / (w * 1.5 * box.volume() / (kPi * kPi)));
    if (field != Field::EM) {
        r.add("c3_ratio", fit.c3 / (eta(field) * box.surface() / (8.0 * kPi)));
        const double closed = tilde_energy(box.a, box.b, box.c, field);
        r.add("E_tilde_closed", closed);
        r.add("rel_delta", (fit.E_tilde - closed) / std::fabs(closed));
    }
    if (!oo.dump.empty()) {
        std::ofstream f(oo.dump);
        if (!f) throw DomainError("cannot open spectrum file '" + oo.dump + "'");
        write_spectrum(enumerate_modes(box, field, fit.k_max), f);
    }
    return r;
}

Record oracle_force_record(const PistonGeometry& g, Field field, const OracleOpts& oo) {
    need(!g.infinite(), "oracle force needs a finite --h");
    OracleOptions opt;
    opt.lambda_scale = oo.lambda_scale;
    opt.points = oo.points;
    const NumericForce o = oracle_force(g, field, opt);
    const double closed = force_finite_h(g, field).total;
    Record r;
    r.add("field", field_name(field));
    r.add("a", g.a);
    r.add("b", g.b);
    r.add("c", g.c);
    r.add("h", g.h);
    r.add("oracle_force", o.value);
    r.add("oracle_error", o.error);
    r.add("closed_force", closed);
    r.add("rel_delta", (o.value - closed) / std::fabs(closed));
    return r;
}

Record oracle_thermal_record(const PistonGeometry& g, const ThermalState& t, Field field) {
    need(!g.infinite(), "oracle thermal needs a finite --h");
    const NumericForce o = oracle_thermal_force(g, t, field);
    const double closed = thermal_force(g, t, field).value;
    const DirectSum direct = oracle_free_energy(g, t, field);
    Record r;
    r.add("field", field_name(field));
    r.add("a", g.a);
    r.add("b", g.b);
    r.add("c", g.c);
    r.add("h", g.h);
    r.add("beta", t.beta);
    r.add("oracle_force", o.value);
    r.add("oracle_error", o.error);
    r.add("closed_force", closed);
    r.add("rel_delta", (o.value - closed) / std::fabs(closed));
    r.add("free_energy_direct", direct.value);
    r.add("free_energy_bound", direct.truncation_bound);
    return r;
}

// ---- shape ----

Record shape_record(const CrossSection& s, Field field, double a) {
    Record r;
    r.add("field", field_name(field));
    r.add("area", s.area);
    r.add("boundary_length", s.perimeter);
    r.add("corners", static_cast<long long>(s.corners.size()));
    r.add("arcs", static_cast<long long>(s.arcs.size()));
    r.add("chi", chi(s));
    const ChiLimits lim = chi_rounding_limits(s);
    r.add("chi_sharp", lim.sharp);
    r.add("chi_smooth", lim.smooth);
    if (!std::isnan(a)) {
        const ForceResult f = field == Field::EM ? force_asymptotic_em(a, s) : force_asymptotic_scalar(a, s, field);
        r.add("a", a);
        r.add("F_parallel_plate", f.terms.at("parallel_plate"));
        r.add("F_perimeter", f.terms.at("perimeter"));
        r.add("F_edge", f.terms.at("edge"));
        r.add("F_one_dim_EM", f.terms.at("one_dim_EM"));
        r.add("force", f.total);
    }
    return r;
}

int dispatch(CLI::App& app, std::ostream& out, std::ostream& err, int argc, const char* const* argv) {
    Common force_c, thermal_c, oracle_c, shape_c;
    ForceOpts fo;
    ThermalOpts to;
    OracleOpts oo;
    std::string shape_file;
    std::vector<double> shape_a;

    app.set_help_flag("--help", "print help and exit");
    auto* force = app.add_subcommand("force", "zero-temperature piston or box force");
    add_common(force, force_c);
    force->add_flag("--box", fo.box, "report the single-box force (region II ignored) as 'force'");
    force->add_option("--normalize", fo.normalize, "none | parallel | fprime")
        ->transform(CLI::CheckedTransformer(std::map<std::string, std::string>{
            {"none", "none"}, {"parallel", "parallel"}, {"parallel_plates", "parallel"}, {"fprime", "fprime"},
            {"F_prime", "fprime"}}))
        ->capture_default_str();
    force->add_option("--representation", fo.representation, "auto | closed | modes")->capture_default_str();

    auto* thermal = app.add_subcommand("thermal", "thermal force on the partition");
    add_common(thermal, thermal_c);
    thermal_c.a = 0.01;
    thermal->add_option("--beta", to.beta, "inverse temperature [L]");
    thermal->add_option("--normalize", to.normalize, "none | sb")->check(CLI::IsMember({"none", "sb"}))->capture_default_str();
    thermal->add_option("--asymptote", to.asymptote, "none | low-temp")
        ->check(CLI::IsMember({"none", "low-temp"}))
        ->capture_default_str();
    thermal->add_option("--representation", to.representation, "auto | closed | modes")->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "mode-sum oracle: cutoff fit, force or thermal check");
    add_common(oracle, oracle_c);
    oracle_c.field = "dirichlet";
    oracle->add_option("--mode", oo.mode, "fit | force | thermal")
        ->check(CLI::IsMember({"fit", "force", "thermal"}))
        ->capture_default_str();
    oracle->add_option("--kmax", oo.k_max, "enumeration radius for fit mode [1/L]");
    oracle->add_option("--points", oo.points, "cutoff grid points")->capture_default_str();
    oracle->add_option("--lambda-scale", oo.lambda_scale, "force mode: lambda_hi times shortest side")
        ->capture_default_str();
    oracle->add_option("--beta", oo.beta, "inverse temperature for thermal mode [L]");
    oracle->add_option("--dump-spectrum", oo.dump, "fit mode: write 'omega multiplicity' lines to this file");

    auto* shape = app.add_subcommand("shape", "chi and small-a force terms for a cross-section file");
    add_common(shape, shape_c, false);
    shape->add_option("file,--file", shape_file, "shape file (text or JSON)")->required();
    shape->add_option("--a", shape_a, "a values for the force terms [L]");

    app.require_subcommand(1);
    app.parse(argc, argv);

    if (force->parsed()) {
        const Common& o = force_c;
        const Field field = parse_field(o.field);
        const Accuracy acc = accuracy_of(o);
        const double h = parse_length(o.h, "--h");
        const Points p = points_of(o, {"a", "a_over_b"});
        need(!p.variable.empty() || !std::isnan(o.a), "force needs --a or --sweep a|a_over_b");
        emit(o, sweep_records(p, [&](double v) {
                 PistonGeometry g{o.a, o.b, o.c, h};
                 if (p.variable == "a") g.a = v;
                 if (p.variable == "a_over_b") g.a = v * o.b;
                 return force_record(g, field, fo, acc);
             }), out);
        return 0;
    }
    if (thermal->parsed()) {
        const Common& o = thermal_c;
        const Field field = parse_field(o.field);
        const Accuracy acc = accuracy_of(o);
        const double h = parse_length(o.h, "--h");
        const Points p = points_of(o, {"beta", "beta_over_b", "a"});
        need(p.variable == "beta" || p.variable == "beta_over_b" || !std::isnan(to.beta),
             "thermal needs --beta or --sweep beta|beta_over_b");
        emit(o, sweep_records(p, [&](double v) {
                 PistonGeometry g{o.a, o.b, o.c, h};
                 ThermalState t{to.beta};
                 if (p.variable == "beta") t.beta = v;
                 if (p.variable == "beta_over_b") t.beta = v * o.b;
                 if (p.variable == "a") g.a = v;
                 return thermal_record(g, t, field, to, acc);
             }), out);
        return 0;
    }
    if (oracle->parsed()) {
        const Common& o = oracle_c;
        const Field field = parse_field(o.field);
        const double h = parse_length(o.h, "--h");
        const Points p = points_of(o, {"a", "a_over_b"});
        need(!p.variable.empty() || !std::isnan(o.a), "oracle needs --a or --sweep a|a_over_b");
        need(oo.dump.empty() || (oo.mode == "fit" && p.variable.empty()), "--dump-spectrum needs fit mode without a sweep");
        if (oo.mode == "thermal") need(!std::isnan(oo.beta), "oracle thermal mode needs --beta");
        emit(o, sweep_records(p, [&](double v) {
                 PistonGeometry g{o.a, o.b, o.c, h};
                 if (p.variable == "a") g.a = v;
                 if (p.variable == "a_over_b") g.a = v * o.b;
                 if (oo.mode == "fit") return oracle_fit_record({g.a, g.b, g.c}, field, oo);
                 if (oo.mode == "force") return oracle_force_record(g, field, oo);
                 return oracle_thermal_record(g, {oo.beta}, field);
             }), out);
        return 0;
    }
    if (shape->parsed()) {
        const Common& o = shape_c;
        const Field field = parse_field(o.field);
        const CrossSection s = load_shape(shape_file);
        Points p = points_of(o, {"a"});
        if (p.variable.empty() && !shape_a.empty()) p = {"a", shape_a};
        emit(o, sweep_records(p, [&](double v) { return shape_record(s, field, v); }), out);
        return 0;
    }
    err << "casimir: error: no subcommand\n";
    return 1;
}

}  // namespace

const Value& Record::at(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return v;
    throw std::out_of_range("no column '" + key + "'");
}

SweepSpec SweepSpec::parse(const std::string& variable, const std::string& range) {
    SweepSpec s;
    s.variable = variable;
    std::vector<std::string> parts;
    std::stringstream in(range);
    for (std::string item; std::getline(in, item, ':');) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4) throw DomainError("sweep range must be START:STOP:POINTS[:lin|:log]");
    s.start = parse_length(parts[0], "sweep start");
    s.stop = parse_length(parts[1], "sweep stop");
    const double pts = parse_length(parts[2], "sweep points");
    if (pts != std::floor(pts) || pts < 2 || pts > 1e6) throw DomainError("sweep points must be an integer >= 2");
    s.points = static_cast<int>(pts);
    if (parts.size() == 4) {
        if (parts[3] != "lin" && parts[3] != "log") throw DomainError("sweep spacing must be lin or log");
        s.log = parts[3] == "log";
    }
    if (!std::isfinite(s.start) || !std::isfinite(s.stop) || !(s.start < s.stop))
        throw DomainError("sweep needs finite start < stop");
    if (s.log && !(s.start > 0.0)) throw DomainError("log sweep needs start > 0");
    return s;
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) {
        const double f = double(i) / (points - 1);
        v[i] = log ? start * std::pow(stop / start, f) : start + (stop - start) * f;
    }
    v.back() = stop;
    return v;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string unit_of(const std::string& column) {
    static const std::map<std::string, std::string> units = {
        {"a", "L"}, {"b", "L"}, {"c", "L"}, {"h", "L"}, {"beta", "L"}, {"area", "L^2"}, {"boundary_length", "L"},
        {"k_max", "1/L"}, {"lambda_lo", "1/L"}, {"lambda_hi", "1/L"}, {"c4", "L^3"}, {"c3", "L^2"}, {"c2", "L"},
        {"E_tilde", "1/L"}, {"E_tilde_closed", "1/L"}, {"residual", "1/L"}, {"free_energy", "1/L"},
        {"free_energy_direct", "1/L"}, {"free_energy_bound", "1/L"}, {"beta_over_b", "1"}, {"chi", "1"},
        {"chi_sharp", "1"}, {"chi_smooth", "1"}, {"c4_ratio", "1"}, {"c3_ratio", "1"}, {"rel_delta", "1"}};
    if (auto it = units.find(column); it != units.end()) return it->second;
    if (column.rfind("normalized", 0) == 0) return "1";
    for (const char* f : {"force", "parallel_plate", "perimeter", "edge", "one_dim_EM", "region_", "exp_series",
                          "power_terms", "series_bound", "asymptote", "oracle_", "closed_force", "F_"})
        if (column.find(f) != std::string::npos) return "1/L^2";
    return "";
}

void write_csv(const std::vector<Record>& rows, std::ostream& out) {
    out << kUnitsNote << '\n';
    if (rows.empty()) return;
    auto cell = [](const Value& v) -> std::string {
        if (const double* d = std::get_if<double>(&v)) return format_number(*d);
        if (const long long* n = std::get_if<long long>(&v)) return std::to_string(*n);
        const std::string& s = std::get<std::string>(v);
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    const auto& head = rows.front().fields;
    for (std::size_t i = 0; i < head.size(); ++i) {
        const std::string u = unit_of(head[i].first);
        out << (i ? "," : "") << head[i].first << (u.empty() ? "" : "[" + u + "]");
    }
    out << '\n';
    for (const auto& r : rows) {
        if (r.fields.size() != head.size()) throw std::logic_error("csv rows have different columns");
        for (std::size_t i = 0; i < r.fields.size(); ++i) out << (i ? "," : "") << cell(r.fields[i].second);
        out << '\n';
    }
}

void write_json(const std::vector<Record>& rows, std::ostream& out) {
    out << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << (i ? ",\n " : "\n ") << "{";
        const auto& f = rows[i].fields;
        for (std::size_t j = 0; j < f.size(); ++j) {
            out << (j ? ", " : "") << nlohmann::json(f[j].first).dump() << ": ";
            const Value& v = f[j].second;
            if (const double* d = std::get_if<double>(&v))
                out << (std::isfinite(*d) ? format_number(*d) : nlohmann::json(format_number(*d)).dump());
            else if (const long long* n = std::get_if<long long>(&v))
                out << *n;
            else
                out << nlohmann::json(std::get<std::string>(v)).dump();
        }
        out << "}";
    }
    out << (rows.empty() ? "]\n" : "\n]\n");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Casimir forces on a rectangular piston (hbar = c = k_B = 1)", "casimir"};
    app.footer(
        "Exit codes: 0 ok, 1 input error, 2 convergence/capacity error.\n"
        "CASIMIR_THREADS caps the number of worker threads.");
    try {
        return dispatch(app, out, err, argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "casimir: error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "casimir: error: " << e.what() << '\n';
        return 1;
    } catch (const ConvergenceError& e) {
        err << "casimir: convergence error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        err << "casimir: capacity error: " << e.what() << '\n';
        return 2;
    } catch (const IllConditioned& e) {
        err << "casimir: ill-conditioned: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "casimir: error: " << e.what() << '\n';
        return 2;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("casimir");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace casimir::cli
