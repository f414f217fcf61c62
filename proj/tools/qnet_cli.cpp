// qnet: reproducible spectral analysis of CNOT qubit networks.
//
// Subcommands: connectivity, trajectory, group, bounds, fit. Every output
// embeds the resolved configuration, seeds and tool version as JSON
// metadata ('#'-prefixed header lines in CSV mode), so a run can be
// reproduced from its own output.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qnet/analysis.hpp"
#include "qnet/channel.hpp"
#include "qnet/graph_json.hpp"
#include "qnet/groupwalk.hpp"
#include "qnet/induced_graph.hpp"
#include "qnet/interaction_graph.hpp"
#include "qnet/spectral.hpp"

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 0;
    int threads = 1;
    bool no_assert = false;
};

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// parse "3..13" or "7" into [lo, hi]
std::pair<int, int> parse_range(const std::string& s) {
    const auto pos = s.find("..");
    if (pos == std::string::npos) {
        const int n = std::stoi(s);
        return {n, n};
    }
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
}

std::pair<double, double> parse_exponents(const std::string& s) {
    const auto pos = s.find(',');
    if (pos == std::string::npos)
        throw CLI::ValidationError("--fit", "expected two comma-separated exponents");
    return {std::stod(s.substr(0, pos)), std::stod(s.substr(pos + 1))};
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void emit_csv_metadata(std::ostream& os, const json& meta) {
    os << "# " << meta.dump() << "\n";
}

json base_metadata(const std::string& command, const CommonOpts& common,
                   double runtime_seconds) {
    return {{"tool", "qnet"},
            {"version", kVersion},
            {"command", command},
            {"seed", common.seed},
            {"rng", qnet::SplitMix64::name()},
            {"threads", common.threads},
            {"runtime_seconds", runtime_seconds}};
}

// Config file support: a JSON object whose keys are long option names
// (without the leading dashes); command-line flags override it.
json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw std::runtime_error(std::string("cannot read config: ") + argv[i + 1]);
            json j;
            in >> j;
            return j;
        }
    return json::object();
}

template <typename T>
void config_default(const json& cfg, const std::string& key, T& target) {
    if (cfg.contains(key)) target = cfg.at(key).get<T>();
}

struct ExitStatus {
    bool bound_violation = false;
    bool failed = false;
};

// ---------------------------------------------------------------------------

int cmd_connectivity(const json& cfg_file, CommonOpts common, std::string topology,
                     std::string range, double epsilon, int replicas,
                     std::string fit_exps, int fit_min, bool both_orientations) {
    const auto t0 = std::chrono::steady_clock::now();

    qnet::ScanConfig cfg;
    cfg.topology = qnet::topology_from_name(topology);
    std::tie(cfg.n_lo, cfg.n_hi) = parse_range(range);
    if (cfg.n_lo < (cfg.topology == qnet::Topology::Complete ? 2 : 3) || cfg.n_hi < cfg.n_lo)
        throw CLI::ValidationError("--n", "invalid qubit range " + range);
    cfg.noise_epsilon = epsilon;
    cfg.replicas = replicas;
    cfg.seed = common.seed;
    cfg.threads = common.threads;
    (void)cfg_file;
    if (both_orientations && cfg.topology != qnet::Topology::Circle)
        throw CLI::ValidationError("--both-orientations", "only valid with --topology circle");

    auto points = cfg.topology == qnet::Topology::Circle && both_orientations
                      ? [&] {
                            // bespoke scan for the both-orientation cycle variant
                            std::vector<qnet::ScanPoint> pts;
                            for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
                                auto g = qnet::make_cycle(n, true);
                                auto ig = qnet::build_induced_graph(g);
                                qnet::ScanPoint pt;
                                pt.n = n;
                                pt.diameter = qnet::unweighted_diameter(ig);
                                pt.bound_diameter = qnet::diameter_bound(ig, pt.diameter);
                                pt.gamma_mean = qnet::algebraic_connectivity(ig).gamma;
                                pt.bound_diameter_holds =
                                    pt.bound_diameter <= pt.gamma_mean + 1e-10;
                                pt.bounds_hold = pt.bound_diameter_holds;
                                pts.push_back(pt);
                            }
                            return pts;
                        }()
                      : qnet::scan_connectivity(cfg);

    bool bounds_ok = true;
    for (const auto& p : points) bounds_ok = bounds_ok && p.bounds_hold;

    json fit_json;
    if (!fit_exps.empty()) {
        auto [e1, e2] = parse_exponents(fit_exps);
        std::vector<std::pair<double, double>> data;
        for (const auto& p : points) data.push_back({p.n, p.gamma_mean});
        auto fit = qnet::power_law_fit(data, e1, e2, fit_min);
        fit_json = {{"e1", fit.e1},     {"e2", fit.e2},       {"a", fit.a},
                    {"b", fit.b},       {"rss", fit.rss},     {"n_min", fit.n_min},
                    {"n_points", fit.n_points}};
    }

    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json meta = base_metadata("connectivity", common, dt);
    meta["config"] = {{"topology", topology},      {"n", range},
                      {"epsilon", epsilon},        {"replicas", replicas},
                      {"fit", fit_exps},           {"fit_min", fit_min},
                      {"both_orientations", both_orientations}};
    if (!fit_json.is_null()) meta["fit"] = fit_json;
    meta["bounds_hold"] = bounds_ok;

    Output out(common.output);
    if (common.format == "json") {
        json rows = json::array();
        for (const auto& p : points)
            rows.push_back({{"n", p.n},
                            {"gamma_mean", p.gamma_mean},
                            {"gamma_std", p.gamma_std},
                            {"bound19", p.bound_diameter},
                            {"bound21", p.bound_min_weight},
                            {"diameter", p.diameter},
                            {"bounds_hold", p.bounds_hold}});
        out.stream() << json{{"metadata", meta}, {"points", rows}}.dump(2) << "\n";
    } else {
        emit_csv_metadata(out.stream(), meta);
        out.stream() << "N,gamma_mean,gamma_std,bound19,bound21\n";
        for (const auto& p : points)
            out.stream() << p.n << ',' << fmt_double(p.gamma_mean) << ','
                         << fmt_double(p.gamma_std) << ',' << fmt_double(p.bound_diameter)
                         << ',' << fmt_double(p.bound_min_weight) << "\n";
    }

    if (!bounds_ok && !common.no_assert) {
        std::cerr << "qnet: bound violated in scan (use --no-assert to downgrade)\n";
        return 2;
    }
    if (!bounds_ok) std::cerr << "qnet: warning: bound violated in scan\n";
    return 0;
}

int cmd_trajectory(CommonOpts common, int n, std::string init_csv, int steps,
                   std::string graph_path) {
    const auto t0 = std::chrono::steady_clock::now();
    qnet::InteractionGraph g = [&] {
        if (!graph_path.empty()) {
            std::ifstream in(graph_path);
            if (!in) throw std::runtime_error("cannot read graph file: " + graph_path);
            json j;
            in >> j;
            return qnet::graph_from_json(j);
        }
        return qnet::make_complete(n);
    }();
    if (g.n_qubits() > 6)
        throw CLI::ValidationError("--n", "trajectory bound curve requires N <= 6");

    std::vector<std::string> inits;
    {
        std::stringstream ss(init_csv);
        std::string item;
        while (std::getline(ss, item, ',')) inits.push_back(item);
    }
    if (inits.empty()) throw CLI::ValidationError("--init", "no initial states given");

    qnet::AttractorProjection proj(g);
    qnet::LanczosConfig lcfg;
    lcfg.seed = common.seed == 0 ? 12345 : common.seed;
    const double beta = qnet::channel_beta_star(g, proj, lcfg);

    std::vector<qnet::Trajectory> trajectories;
    for (const auto& label : inits) {
        if (static_cast<int>(label.size()) != g.n_qubits())
            throw CLI::ValidationError("--init", "state " + label + " has wrong length");
        auto rho0 = qnet::DensityMatrix::basis_projector(g.n_qubits(),
                                                         qnet::state_from_label(label));
        auto tr = qnet::trajectory(g, rho0, steps, proj, beta, true);
        tr.initial_label = label;
        trajectories.push_back(std::move(tr));
    }

    bool bound_ok = true;
    for (const auto& tr : trajectories)
        for (const auto& pt : tr.points)
            if (pt.distance > pt.bound + 1e-9) bound_ok = false;

    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json meta = base_metadata("trajectory", common, dt);
    meta["config"] = {{"n", g.n_qubits()}, {"init", init_csv}, {"steps", steps}};
    meta["graph"] = qnet::graph_to_json(g);
    meta["beta_star"] = beta;
    meta["bound_holds"] = bound_ok;

    Output out(common.output);
    if (common.format == "json") {
        json curves = json::array();
        for (const auto& tr : trajectories) {
            json pts = json::array();
            for (const auto& pt : tr.points)
                pts.push_back({{"step", pt.step}, {"distance", pt.distance}, {"bound", pt.bound}});
            curves.push_back({{"init", tr.initial_label}, {"points", pts}});
        }
        out.stream() << json{{"metadata", meta}, {"curves", curves}}.dump(2) << "\n";
    } else {
        emit_csv_metadata(out.stream(), meta);
        out.stream() << "init,step,distance,bound\n";
        for (const auto& tr : trajectories)
            for (const auto& pt : tr.points)
                out.stream() << tr.initial_label << ',' << pt.step << ','
                             << fmt_double(pt.distance) << ',' << fmt_double(pt.bound) << "\n";
    }

    if (!bound_ok && !common.no_assert) {
        std::cerr << "qnet: trajectory exceeded the subleading-eigenvalue bound\n";
        return 2;
    }
    return 0;
}

int cmd_group(CommonOpts common, int n, double p, int max_power) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<qnet::GF2Matrix> gens;
    std::vector<double> probs;
    qnet::InteractionGraph g = qnet::make_complete(n);
    if (n == 2) {
        gens = {qnet::cnot_gf2(0, 1, 2), qnet::cnot_gf2(1, 0, 2)};
        probs = {p, 1 - p};
        g = qnet::InteractionGraph(2, {{0, 1, p}, {1, 0, 1 - p}});
    } else {
        for (const auto& l : g.links()) {
            gens.push_back(qnet::cnot_gf2(l.control, l.target, n));
            probs.push_back(l.probability);
        }
    }

    auto gt = qnet::generate_group(gens);
    auto w = qnet::build_walk_matrix(gt, probs);
    auto bip = qnet::bipartiteness_check(gt, w);

    json result;
    result["group_order"] = gt.order();
    result["bipartite"] = bip.bipartite;

    if (!w.dense.empty()) {
        auto spec = qnet::walk_spectrum(w);
        result["spectrum"] = spec.values;
        double sub = 0;
        for (double v : spec.values)
            if (std::abs(v) < 1.0 - 1e-9) sub = std::max(sub, std::abs(v));
        result["subleading"] = sub;
        if (w.m <= 64) {
            json rows = json::array();
            for (std::size_t a = 0; a < w.m; ++a) {
                json row = json::array();
                for (std::size_t b = 0; b < w.m; ++b) row.push_back(w.at(a, b));
                rows.push_back(row);
            }
            result["walk_matrix"] = rows;
        }
    }

    // Tr(phi^n) comparison: group expansion vs direct sparse powering
    {
        const std::size_t dim = std::size_t{1} << n;
        std::vector<std::vector<qnet::BasisState>> perms;
        std::vector<double> pp;
        for (const auto& l : g.links()) {
            perms.push_back(qnet::gate_permutation(n, l.control, l.target));
            pp.push_back(l.probability);
        }
        json table = json::array();
        // direct: power the 2^N x 2^N matrix (small N only)
        std::vector<double> phi(dim * dim, 0.0);
        for (std::size_t i = 0; i < perms.size(); ++i)
            for (std::size_t x = 0; x < dim; ++x)
                phi[perms[i][x] * dim + x] += pp[i];
        std::vector<double> acc(dim * dim, 0.0), next(dim * dim);
        for (std::size_t i = 0; i < dim; ++i) acc[i * dim + i] = 1.0;
        for (int step = 0; step <= max_power; ++step) {
            double direct = 0;
            for (std::size_t i = 0; i < dim; ++i) direct += acc[i * dim + i];
            const double expansion = qnet::trace_phi_power(gt, w, step);
            table.push_back({{"n", step},
                             {"trace_group_expansion", expansion},
                             {"trace_direct", direct},
                             {"abs_diff", std::abs(expansion - direct)}});
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) {
                    double v = 0;
                    for (std::size_t k = 0; k < dim; ++k)
                        v += phi[i * dim + k] * acc[k * dim + j];
                    next[i * dim + j] = v;
                }
            acc.swap(next);
        }
        result["trace_comparison"] = table;
    }

    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json meta = base_metadata("group", common, dt);
    meta["config"] = {{"n", n}, {"p", p}, {"max_power", max_power}};

    Output out(common.output);
    out.stream() << json{{"metadata", meta}, {"result", result}}.dump(2) << "\n";
    return 0;
}

int cmd_bounds(CommonOpts common, std::string topology, std::string range) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto topo = qnet::topology_from_name(topology);
    auto [lo, hi] = parse_range(range);

    json rows = json::array();
    bool all_hold = true;
    for (int n = lo; n <= hi; ++n) {
        auto g = qnet::make_topology(topo, n);
        auto ig = qnet::build_induced_graph(g);
        const double gamma = qnet::algebraic_connectivity(ig).gamma;
        auto rep = qnet::check_bounds(g, ig, gamma);
        all_hold = all_hold && rep.diameter_bound_holds && rep.min_weight_bound_holds;
        rows.push_back({{"n", n},
                        {"gamma", rep.gamma},
                        {"diameter", rep.diameter},
                        {"bound19", rep.bound_diameter},
                        {"bound19_holds", rep.diameter_bound_holds},
                        {"bound21", rep.has_min_weight_bound ? json(rep.bound_min_weight) : json()},
                        {"bound21_holds", rep.min_weight_bound_holds}});
    }

    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json meta = base_metadata("bounds", common, dt);
    meta["config"] = {{"topology", topology}, {"n", range}};
    meta["bounds_hold"] = all_hold;

    Output out(common.output);
    if (common.format == "json") {
        out.stream() << json{{"metadata", meta}, {"rows", rows}}.dump(2) << "\n";
    } else {
        emit_csv_metadata(out.stream(), meta);
        out.stream() << "N,gamma,diameter,bound19,bound21\n";
        for (const auto& r : rows)
            out.stream() << r["n"].get<int>() << ',' << fmt_double(r["gamma"].get<double>())
                         << ',' << r["diameter"].get<int>() << ','
                         << fmt_double(r["bound19"].get<double>()) << ','
                         << (r["bound21"].is_null() ? std::string("")
                                                    : fmt_double(r["bound21"].get<double>()))
                         << "\n";
    }
    if (!all_hold && !common.no_assert) return 2;
    return 0;
}

int cmd_fit(CommonOpts common, std::string input, std::string exps, int fit_min) {
    const auto t0 = std::chrono::steady_clock::now();
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot read input: " + input);

    // accepts the connectivity CSV: skips '#' metadata and a header line
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'N') continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        const double n = std::stod(cell);
        std::getline(ss, cell, ',');
        const double gamma = std::stod(cell);
        pts.push_back({n, gamma});
    }

    auto [e1, e2] = parse_exponents(exps);
    auto fit = qnet::power_law_fit(pts, e1, e2, fit_min);

    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json meta = base_metadata("fit", common, dt);
    meta["config"] = {{"input", input}, {"exponents", exps}, {"fit_min", fit_min}};

    Output out(common.output);
    out.stream() << json{{"metadata", meta},
                         {"fit",
                          {{"e1", fit.e1},
                           {"e2", fit.e2},
                           {"a", fit.a},
                           {"b", fit.b},
                           {"rss", fit.rss},
                           {"n_min", fit.n_min},
                           {"n_points", fit.n_points},
                           {"residuals", fit.residuals}}}}.dump(2)
                 << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qnet: relaxation analysis of CNOT qubit networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("qnet ") + kVersion);

    json cfg = json::object();
    try {
        cfg = load_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "qnet: " << e.what() << "\n";
        return 1;
    }

    CommonOpts common;
    config_default(cfg, "format", common.format);
    config_default(cfg, "output", common.output);
    config_default(cfg, "seed", common.seed);
    config_default(cfg, "threads", common.threads);

    std::string config_path; // consumed by load_config, registered for help only
    app.add_option("--config", config_path, "JSON config file with option defaults");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output,-o", common.output, "output path (default stdout)");
        sub->add_option("--seed", common.seed, "master seed");
        sub->add_option("--threads", common.threads, "worker threads for scans")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--no-assert", common.no_assert,
                      "downgrade bound violations to warnings");
        sub->add_option("--config", config_path, "JSON config file with option defaults");
    };

    // connectivity
    auto* conn = app.add_subcommand("connectivity", "scan algebraic connectivity over N");
    std::string topology = "complete", range = "3..13", fit_exps;
    double epsilon = 0.0;
    int replicas = 20, fit_min = 8;
    bool both_orientations = false;
    config_default(cfg, "topology", topology);
    config_default(cfg, "n", range);
    config_default(cfg, "epsilon", epsilon);
    config_default(cfg, "replicas", replicas);
    config_default(cfg, "fit", fit_exps);
    config_default(cfg, "fit-min", fit_min);
    conn->add_option("--topology", topology, "complete|circle|star|unbalanced");
    conn->add_option("--n", range, "qubit range, e.g. 3..13");
    conn->add_option("--epsilon", epsilon, "noise amplitude in [0,1]");
    conn->add_option("--replicas", replicas, "noise replicas per N");
    conn->add_option("--fit", fit_exps, "power-law exponents, e.g. 1,2");
    conn->add_option("--fit-min", fit_min, "smallest N included in the fit");
    conn->add_flag("--both-orientations", both_orientations,
                   "circle topology with both link orientations");
    add_common(conn);

    // trajectory
    auto* traj = app.add_subcommand("trajectory", "iterated-channel distance to the attractor");
    int traj_n = 6, steps = 50;
    std::string init_csv = "000001", graph_path;
    config_default(cfg, "steps", steps);
    config_default(cfg, "init", init_csv);
    traj->add_option("--n", traj_n, "qubit count (complete topology)");
    traj->add_option("--init", init_csv, "comma-separated initial basis states");
    traj->add_option("--steps", steps, "iteration count")->check(CLI::PositiveNumber);
    traj->add_option("--graph", graph_path, "JSON interaction graph file (overrides --n)");
    add_common(traj);

    // group
    auto* grp = app.add_subcommand("group", "group walk: W matrix, spectrum, trace table");
    int grp_n = 2, max_power = 10;
    double grp_p = 0.5;
    grp->add_option("--n", grp_n, "qubit count (full CNOT set; N <= 4)");
    grp->add_option("--p", grp_p, "first-gate probability for the N=2 example")
        ->check(CLI::Range(0.0, 1.0));
    grp->add_option("--max-power", max_power, "largest n in the Tr(phi^n) table");
    add_common(grp);

    // bounds
    auto* bnd = app.add_subcommand("bounds", "evaluate connectivity lower bounds");
    std::string bnd_topology = "complete", bnd_range = "3..10";
    bnd->add_option("--topology", bnd_topology, "complete|circle|star|unbalanced");
    bnd->add_option("--n", bnd_range, "qubit range");
    add_common(bnd);

    // fit
    auto* fit = app.add_subcommand("fit", "power-law fit of a connectivity CSV");
    std::string fit_input, fit_exponents = "1,2";
    int fit_min2 = 8;
    fit->add_option("--input", fit_input, "CSV with N,gamma columns")->required();
    fit->add_option("--exponents", fit_exponents, "e1,e2");
    fit->add_option("--min", fit_min2, "smallest N included");
    add_common(fit);

    CLI11_PARSE(app, argc, argv);

    try {
        if (conn->parsed())
            return cmd_connectivity(cfg, common, topology, range, epsilon, replicas,
                                    fit_exps, fit_min, both_orientations);
        if (traj->parsed()) return cmd_trajectory(common, traj_n, init_csv, steps, graph_path);
        if (grp->parsed()) return cmd_group(common, grp_n, grp_p, max_power);
        if (bnd->parsed()) return cmd_bounds(common, bnd_topology, bnd_range);
        if (fit->parsed()) return cmd_fit(common, fit_input, fit_exponents, fit_min2);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "qnet: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
