#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "kgring/angular.hpp"
#include "kgring/error.hpp"
#include "kgring/potential.hpp"
#include "kgring/radial.hpp"
#include "kgring/spectrum.hpp"
#include "kgring/verify.hpp"

namespace kgring::cli {

namespace {

using io::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    std::vector<double> points() const {
        std::vector<double> v(count);
        for (int i = 0; i < count; ++i) v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
        return v;
    }
};

// locale-independent number parsing for the compound flags
double parse_number(const std::string& s, const char* flag) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw UsageError(std::string(flag) + ": '" + s + "' is not a finite number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        parts.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return parts;
}

std::pair<double, double> parse_window(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 2) throw UsageError("--energy-window: expected lo:hi");
    return {parse_number(parts[0], "--energy-window"), parse_number(parts[1], "--energy-window")};
}

GridSpec parse_grid(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw UsageError("--grid: expected start:stop:count");
    GridSpec g{parse_number(parts[0], "--grid"), parse_number(parts[1], "--grid"), 0};
    const double count = parse_number(parts[2], "--grid");
    if (count < 1 || count != std::floor(count) || count > 1e7) throw UsageError("--grid: count must be a positive integer");
    g.count = static_cast<int>(count);
    if (g.count > 1 && !(g.start < g.stop)) throw UsageError("--grid: need start < stop");
    return g;
}

const CLI::Validator finite_number(
    [](std::string& s) -> std::string {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return "value must be a finite number";
        return {};
    },
    "FINITE");

struct Options {
    PotentialParams params;
    std::optional<int> m;
    std::optional<int> m_max;
    int N_max = 0;
    int nr_max = 0;
    int N = 0;
    int nr = 0;
    std::string energy_window;
    int scan_points = 2001;
    double tol = 1e-12;
    std::string format = "json";
    std::string out_path;
    std::string grid;
    std::string input;
    int state_index = 0;
    std::string part = "radial";
    double eta = 1.0;
    double theta = std::numbers::pi / 2;
    std::string suite = "all";
    double verify_tol = 1e-6;
};

void add_params(CLI::App* app, Options& o) {
    app->add_option("--M", o.params.M, "rest mass")->check(finite_number);
    app->add_option("--b", o.params.b, "screening length")->check(finite_number);
    app->add_option("--alpha", o.params.alpha, "shape parameter")->check(finite_number);
    app->add_option("--A", o.params.A, "potential strength")->check(finite_number);
    app->add_option("--C0", o.params.C0, "centrifugal-approximation constant")->check(finite_number);
    app->add_option("--beta", o.params.beta, "ring strength of the cos(theta) term")->check(finite_number);
    app->add_option("--beta-prime", o.params.beta_prime, "ring strength of the 1/sin^2 term")->check(finite_number);
}

void add_m_selection(CLI::App* app, Options& o) {
    auto* m = app->add_option("--m", o.m, "single magnetic number");
    auto* mm = app->add_option("--m-max", o.m_max, "scan m over -m_max..m_max")->check(CLI::NonNegativeNumber);
    m->excludes(mm);
}

void add_output(CLI::App* app, Options& o) {
    app->add_option("--format", o.format, "output encoding")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--out", o.out_path, "output file (default: stdout)");
}

std::pair<int, int> m_range(const Options& o) {
    if (o.m_max) return {-*o.m_max, *o.m_max};
    const int m = o.m.value_or(0);
    return {m, m};
}

SpectrumRequest make_request(const Options& o) {
    SpectrumRequest req;
    req.params = o.params;
    req.n_r_max = o.nr_max;
    req.N_max = o.N_max;
    std::tie(req.m_min, req.m_max) = m_range(o);
    if (!o.energy_window.empty()) req.energy_window = parse_window(o.energy_window);
    req.scan_points = o.scan_points;
    req.tol = o.tol;
    return req;
}

void emit(const Options& o, const json& doc, const std::vector<std::string>& cols, const json& rows, std::ostream& out) {
    std::ostringstream buf;
    if (o.format == "csv")
        io::write_csv(buf, cols, rows);
    else {
        io::write_json(buf, doc);
        buf << '\n';
    }
    if (o.out_path.empty()) {
        out << buf.str();
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw UsageError("--out: cannot open '" + o.out_path + "'");
    f << buf.str();
    if (!f) throw UsageError("--out: write failed for '" + o.out_path + "'");
}

int cmd_spectrum(const Options& o, std::ostream& out) {
    const SpectrumRequest req = make_request(o);
    const SpectrumResult res = solve_states(req);
    const json doc = io::spectrum_json(req, res);
    json rows = json::array();
    for (const auto& r : doc["states"]) rows.push_back(r);
    for (const auto& r : doc["rejected"]) rows.push_back(r);
    emit(o, doc, io::state_columns(), rows, out);
    return exit_ok;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UsageError("--input: cannot open '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError(std::string("--input: ") + e.what());
    }
}

std::pair<PotentialParams, BoundState> select_state(const Options& o) {
    if (!o.input.empty()) {
        const json doc = read_json_file(o.input);
        try {
            const PotentialParams p = io::params_from_json(doc.at("params"));
            const json& states = doc.at("states");
            if (o.state_index < 0 || o.state_index >= static_cast<int>(states.size()))
                throw UsageError("--state-index: out of range for the input's states list");
            const json& s = states.at(o.state_index);
            const QuantumNumbers q{s.at("n_r").get<int>(), s.at("N").get<int>(), s.at("m").get<int>()};
            return {p, make_state(p, q, s.at("E").get<double>())};
        } catch (const json::exception& e) {
            throw UsageError(std::string("--input: ") + e.what());
        }
    }
    SpectrumRequest req = make_request(o);
    req.n_r_max = o.nr;
    req.N_max = o.N;
    req.m_min = req.m_max = o.m.value_or(0);
    std::vector<BoundState> match;
    for (const BoundState& st : solve_states(req).states)
        if (st.quantum.n_r == o.nr && st.quantum.N == o.N) match.push_back(st);
    if (o.state_index < 0 || o.state_index >= static_cast<int>(match.size()))
        throw DomainError(ErrorKind::inadmissible, "wavefunction: no admissible state for the selected quantum numbers");
    return {req.params, match[o.state_index]};
}

int cmd_wavefunction(const Options& o, std::ostream& out) {
    const auto [p, st] = select_state(o);
    if (!st.admissible()) throw DomainError(ErrorKind::inadmissible, "wavefunction: state is not admissible");
    const bool radial = o.part == "radial";
    const GridSpec g = o.grid.empty() ? (radial ? GridSpec{0.01 * p.b, 20.0 * p.b, 200} : GridSpec{0.01, 3.13, 200})
                                      : parse_grid(o.grid);
    json rows = json::array();
    for (double x : g.points()) {
        if (radial) {
            const double chi = chi_eval(st, x);
            rows.push_back(json{{"r", x}, {"chi", chi}, {"density", chi * chi}});
        } else {
            if (!(x >= 0.0 && x <= std::numbers::pi)) throw UsageError("--grid: theta must lie in [0, pi]");
            rows.push_back(json{{"theta", x}, {"Theta", theta_eval(st.angular, st.quantum.N, std::cos(x))}});
        }
    }
    json doc;
    doc["params"] = io::params_json(p);
    doc["state"] = io::state_json(st);
    doc["part"] = o.part;
    doc["grid"] = rows;
    const std::vector<std::string> cols =
        radial ? std::vector<std::string>{"r", "chi", "density"} : std::vector<std::string>{"theta", "Theta"};
    emit(o, doc, cols, rows, out);
    return exit_ok;
}

int cmd_angular(const Options& o, std::ostream& out) {
    const auto [m_lo, m_hi] = m_range(o);
    json rows = json::array();
    for (int m = m_lo; m <= m_hi; ++m)
        for (int N = 0; N <= o.N_max; ++N) {
            const AngularSolution s = solve_angular({0, N, m}, o.params, o.eta);
            rows.push_back(json{{"m", m}, {"N", N}, {"eta", s.eta}, {"u", s.u}, {"zeta", s.zeta}, {"lambda", s.lambda},
                                {"l_eff", s.l_eff}, {"B", s.B}, {"C", s.C}, {"norm", s.norm}});
        }
    json doc;
    doc["params"] = io::params_json(o.params);
    doc["solutions"] = rows;
    emit(o, doc, {"m", "N", "eta", "u", "zeta", "lambda", "l_eff", "B", "C", "norm"}, rows, out);
    return exit_ok;
}

int cmd_potential_scan(const Options& o, std::ostream& out) {
    o.params.validate();
    const GridSpec g = o.grid.empty() ? GridSpec{0.05 * o.params.b, 10.0 * o.params.b, 100} : parse_grid(o.grid);
    if (!(o.theta > 0.0 && o.theta < std::numbers::pi)) throw UsageError("--theta: must lie in (0, pi)");
    const std::vector<double> r = g.points();
    const auto approx = approx_error_scan(o.params.b, o.params.C0, r);
    json rows = json::array();
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double radial = manning_rosen_shape(o.params, r[i]) / (2.0 * o.params.M * o.params.b * o.params.b);
        rows.push_back(json{{"r", r[i]},
                            {"V", eval_potential(o.params, r[i], o.theta)},
                            {"V_radial", radial},
                            {"centrifugal_exact", approx[i].exact},
                            {"centrifugal_approx", approx[i].approx},
                            {"rel_error", approx[i].rel_error}});
    }
    json doc;
    doc["params"] = io::params_json(o.params);
    doc["theta"] = o.theta;
    doc["scan"] = rows;
    emit(o, doc, {"r", "V", "V_radial", "centrifugal_exact", "centrifugal_approx", "rel_error"}, rows, out);
    return exit_ok;
}

std::vector<int> parse_suite(const std::string& s) {
    if (s == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<int> ids;
    for (const std::string& part : split(s, ',')) {
        const double v = parse_number(part, "--suite");
        if (v != std::floor(v) || v < 1 || v > 9) throw UsageError("--suite: expected 'all' or ids 1..9");
        ids.push_back(static_cast<int>(v));
    }
    return ids;
}

int cmd_verify(const Options& o, std::ostream& out) {
    if (!(o.verify_tol > 0.0)) throw UsageError("--tol: must be positive");
    verify::Options vo;
    vo.oracle_tol = o.verify_tol;
    const auto results = verify::run_suite(parse_suite(o.suite), vo);
    json rows = json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        rows.push_back(json{{"id", r.id},           {"name", r.name},         {"passed", r.passed},
                            {"metric", r.metric},   {"threshold", r.threshold}, {"seconds", r.seconds},
                            {"time_limit", r.time_limit}, {"detail", r.detail}});
    }
    json doc;
    doc["passed"] = all;
    doc["criteria"] = rows;
    emit(o, doc, {"id", "name", "passed", "metric", "threshold", "seconds", "time_limit", "detail"}, rows, out);
    return all ? exit_ok : exit_verification;
}

void write_error(std::ostream& err, const std::string& type, const std::string& message,
                 const std::string& kind = {}) {
    json j;
    j["error"] = type;
    if (!kind.empty()) j["kind"] = kind;
    j["message"] = message;
    err << j.dump() << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Bound states of the Klein-Gordon equation with Manning-Rosen plus ring-shaped potential", "kgring"};
    app.require_subcommand(1);

    auto* spectrum = app.add_subcommand("spectrum", "solve the energy spectrum");
    add_params(spectrum, o);
    add_m_selection(spectrum, o);
    spectrum->add_option("--N-max", o.N_max, "largest angular node count")->check(CLI::NonNegativeNumber);
    spectrum->add_option("--nr-max", o.nr_max, "largest radial node count")->check(CLI::NonNegativeNumber);
    spectrum->add_option("--energy-window", o.energy_window, "energy scan window lo:hi");
    spectrum->add_option("--scan-points", o.scan_points, "scan grid size")->check(CLI::Range(3, 10000000));
    spectrum->add_option("--tol", o.tol, "root and edge tolerance")->check(finite_number)->check(CLI::PositiveNumber);
    add_output(spectrum, o);

    auto* wave = app.add_subcommand("wavefunction", "tabulate a radial or angular wavefunction");
    add_params(wave, o);
    wave->add_option("--m", o.m, "magnetic number");
    wave->add_option("--N", o.N, "angular node count")->check(CLI::NonNegativeNumber);
    wave->add_option("--nr", o.nr, "radial node count")->check(CLI::NonNegativeNumber);
    wave->add_option("--energy-window", o.energy_window, "energy scan window lo:hi");
    wave->add_option("--scan-points", o.scan_points, "scan grid size")->check(CLI::Range(3, 10000000));
    wave->add_option("--tol", o.tol, "root and edge tolerance")->check(finite_number)->check(CLI::PositiveNumber);
    wave->add_option("--input", o.input, "spectrum JSON to take the state from");
    wave->add_option("--state-index", o.state_index, "index into the selected states")->check(CLI::NonNegativeNumber);
    wave->add_option("--part", o.part, "radial or angular table")->check(CLI::IsMember({"radial", "angular"}));
    wave->add_option("--grid", o.grid, "start:stop:count in r (radial) or theta (angular)");
    add_output(wave, o);

    auto* ang = app.add_subcommand("angular", "solve the polar-angle problem");
    add_params(ang, o);
    add_m_selection(ang, o);
    ang->add_option("--N-max", o.N_max, "largest angular node count")->check(CLI::NonNegativeNumber);
    ang->add_option("--eta", o.eta, "energy factor (M + E)/M")->check(finite_number);
    add_output(ang, o);

    auto* ver = app.add_subcommand("verify", "run the acceptance checks");
    ver->add_option("--suite", o.suite, "'all' or comma-separated criterion ids");
    ver->add_option("--tol", o.verify_tol, "relative gate for analytic vs oracle energies")->check(finite_number);
    add_output(ver, o);

    auto* scan = app.add_subcommand("potential-scan", "tabulate the potential and the centrifugal approximation");
    add_params(scan, o);
    scan->add_option("--grid", o.grid, "start:stop:count in r");
    scan->add_option("--theta", o.theta, "polar angle for the full potential")->check(finite_number);
    add_output(scan, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.what());
        return exit_usage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(o, out);
        if (wave->parsed()) return cmd_wavefunction(o, out);
        if (ang->parsed()) return cmd_angular(o, out);
        if (ver->parsed()) return cmd_verify(o, out);
        if (scan->parsed()) return cmd_potential_scan(o, out);
    } catch (const UsageError& e) {
        write_error(err, "usage", e.what());
        return exit_usage;
    } catch (const DomainError& e) {
        write_error(err, "domain", e.what(), std::string(to_string(e.kind())));
        return exit_domain;
    }
    write_error(err, "usage", "no subcommand given");
    return exit_usage;
}

} // namespace kgring::cli
