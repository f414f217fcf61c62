#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qnet/induced_graph.hpp"
#include "qnet/interaction_graph.hpp"
#include "qnet/rng.hpp"
#include "qnet/spectral.hpp"

namespace qnet {

// gamma >= 4 / ((2^N - 1) diam), valid for any interaction graph.
inline double diameter_bound(const InducedGraph& ig) {
    const int diam = unweighted_diameter(ig);
    const double nv = static_cast<double>((std::size_t{1} << ig.n_qubits) - 1);
    return 4.0 / (nv * diam);
}

inline double diameter_bound(const InducedGraph& ig, int diam) {
    const double nv = static_cast<double>((std::size_t{1} << ig.n_qubits) - 1);
    return 4.0 / (nv * diam);
}

// gamma >= min p_ij, valid only for complete interaction topologies (the
// derivation compares the skeleton with the hypercube).
inline double min_weight_bound(const InteractionGraph& g) {
    if (!g.is_complete())
        throw std::invalid_argument("min_weight_bound: requires a complete interaction topology");
    return g.min_probability();
}

struct BoundReport {
    double gamma = 0.0;
    int diameter = 0;
    double bound_diameter = 0.0;           // 4 / ((2^N - 1) diam)
    bool has_min_weight_bound = false;
    double bound_min_weight = 0.0;
    bool diameter_bound_holds = false;
    bool min_weight_bound_holds = true;
    double slack_diameter = 0.0;           // gamma / bound
    double slack_min_weight = 0.0;
};

inline BoundReport check_bounds(const InteractionGraph& g, const InducedGraph& ig,
                                double gamma, double tol = 1e-10) {
    BoundReport rep;
    rep.gamma = gamma;
    rep.diameter = unweighted_diameter(ig);
    rep.bound_diameter = diameter_bound(ig, rep.diameter);
    rep.diameter_bound_holds = rep.bound_diameter <= gamma + tol;
    rep.slack_diameter = gamma / rep.bound_diameter;
    if (g.is_complete()) {
        rep.has_min_weight_bound = true;
        rep.bound_min_weight = g.min_probability();
        rep.min_weight_bound_holds = rep.bound_min_weight <= gamma + tol;
        rep.slack_min_weight = gamma / rep.bound_min_weight;
    }
    return rep;
}

// Two-term power-law least squares: gamma ~ a N^-e1 + b N^-e2 with the
// exponents fixed, so the problem is linear and the normal equations are
// solved in closed form.
struct FitResult {
    double e1 = 0.0, e2 = 0.0;
    double a = 0.0, b = 0.0;
    double rss = 0.0;
    int n_min = 0;
    std::size_t n_points = 0;
    std::vector<double> residuals;
};

inline FitResult power_law_fit(const std::vector<std::pair<double, double>>& points,
                               double e1, double e2, int n_min) {
    if (e1 >= e2) throw std::invalid_argument("power_law_fit: need e1 < e2");
    std::vector<std::pair<double, double>> sel;
    for (const auto& [n, g] : points)
        if (n >= n_min) sel.push_back({n, g});
    if (sel.size() < 3)
        throw std::invalid_argument("power_law_fit: need at least 3 points with N >= n_min");

    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    for (const auto& [n, g] : sel) {
        const double x1 = std::pow(n, -e1), x2 = std::pow(n, -e2);
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        r1 += x1 * g;
        r2 += x2 * g;
    }
    const double det = s11 * s22 - s12 * s12;
    if (std::abs(det) < 1e-300 * std::max(s11 * s22, 1.0) || det == 0.0)
        throw std::invalid_argument("power_law_fit: rank-deficient design matrix");
    FitResult fit;
    fit.e1 = e1;
    fit.e2 = e2;
    fit.n_min = n_min;
    fit.n_points = sel.size();
    fit.a = (s22 * r1 - s12 * r2) / det;
    fit.b = (s11 * r2 - s12 * r1) / det;
    for (const auto& [n, g] : sel) {
        const double res = g - fit.a * std::pow(n, -e1) - fit.b * std::pow(n, -e2);
        fit.residuals.push_back(res);
        fit.rss += res * res;
    }
    return fit;
}

// Single-power comparison fit, gamma ~ a N^-e1 (for the "other functional
// forms do worse" check).
inline double single_power_rss(const std::vector<std::pair<double, double>>& points,
                               double e1, int n_min) {
    double sxx = 0, sxy = 0;
    std::vector<std::pair<double, double>> sel;
    for (const auto& [n, g] : points)
        if (n >= n_min) sel.push_back({n, g});
    for (const auto& [n, g] : sel) {
        const double x = std::pow(n, -e1);
        sxx += x * x;
        sxy += x * g;
    }
    const double a = sxy / sxx;
    double rss = 0;
    for (const auto& [n, g] : sel) {
        const double r = g - a * std::pow(n, -e1);
        rss += r * r;
    }
    return rss;
}

enum class Topology { Complete, Circle, Star, Unbalanced };

inline InteractionGraph make_topology(Topology t, int n) {
    switch (t) {
        case Topology::Complete: return make_complete(n);
        case Topology::Circle: return make_cycle(n);
        case Topology::Star: return make_star(n);
        case Topology::Unbalanced: return make_unbalanced(n);
    }
    throw std::invalid_argument("make_topology: unknown topology");
}

inline std::string topology_name(Topology t) {
    switch (t) {
        case Topology::Complete: return "complete";
        case Topology::Circle: return "circle";
        case Topology::Star: return "star";
        case Topology::Unbalanced: return "unbalanced";
    }
    return "?";
}

inline Topology topology_from_name(const std::string& s) {
    if (s == "complete") return Topology::Complete;
    if (s == "circle" || s == "cycle") return Topology::Circle;
    if (s == "star") return Topology::Star;
    if (s == "unbalanced") return Topology::Unbalanced;
    throw std::invalid_argument("unknown topology: " + s);
}

struct ScanPoint {
    int n = 0;
    double gamma_mean = 0.0;
    double gamma_std = 0.0;
    int replicas = 1;
    double bound_diameter = 0.0;
    double bound_min_weight = 0.0; // 0 when inapplicable
    int diameter = 0;
    bool bound_diameter_holds = true;
    bool bound_min_weight_holds = true;
    bool bounds_hold = true;
};

struct ScanConfig {
    Topology topology = Topology::Complete;
    int n_lo = 3, n_hi = 13;
    double noise_epsilon = 0.0;
    std::uint64_t seed = 0;
    int replicas = 1;
    int threads = 1;
    LanczosConfig lanczos{};
    double bound_tol = 1e-10;
};

// Per N: build the graph (noisy replicas share the replica-indexed seed
// stream across epsilon values), compute gamma, and report mean/std plus
// the two lower bounds. Replica work is parallelized; aggregation order
// is deterministic.
inline std::vector<ScanPoint> scan_connectivity(const ScanConfig& cfg) {
    std::vector<ScanPoint> out;
    const int replicas = cfg.noise_epsilon > 0.0 ? cfg.replicas : 1;
    for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
        ScanPoint pt;
        pt.n = n;
        pt.replicas = replicas;
        const InteractionGraph base = make_topology(cfg.topology, n);
        {
            const auto skeleton = build_induced_graph(base);
            pt.diameter = unweighted_diameter(skeleton);
            pt.bound_diameter = diameter_bound(skeleton, pt.diameter);
        }

        std::vector<double> gammas(static_cast<std::size_t>(replicas));
        std::vector<double> min_ps(static_cast<std::size_t>(replicas));
        auto run_replica = [&](int r) {
            InteractionGraph g = base;
            if (cfg.noise_epsilon > 0.0) {
                NoiseSpec spec{cfg.noise_epsilon,
                               derive_seed(cfg.seed, static_cast<std::uint64_t>(r))};
                g = apply_noise(g, spec);
            }
            min_ps[static_cast<std::size_t>(r)] = g.min_probability();
            const auto ig = build_induced_graph(g);
            gammas[static_cast<std::size_t>(r)] =
                algebraic_connectivity(ig, cfg.lanczos).gamma;
        };
        if (cfg.threads > 1 && replicas > 1) {
            std::vector<std::future<void>> tasks;
            std::atomic<int> next{0};
            const int workers = std::min(cfg.threads, replicas);
            for (int w = 0; w < workers; ++w)
                tasks.push_back(std::async(std::launch::async, [&] {
                    for (int r = next.fetch_add(1); r < replicas; r = next.fetch_add(1))
                        run_replica(r);
                }));
            for (auto& t : tasks) t.get();
        } else {
            for (int r = 0; r < replicas; ++r) run_replica(r);
        }

        double sum = 0, sum2 = 0;
        for (double g : gammas) {
            sum += g;
            sum2 += g * g;
        }
        pt.gamma_mean = sum / replicas;
        pt.gamma_std = replicas > 1
                           ? std::sqrt(std::max(0.0, (sum2 - sum * sum / replicas) /
                                                         (replicas - 1)))
                           : 0.0;

        for (int r = 0; r < replicas; ++r) {
            if (pt.bound_diameter > gammas[static_cast<std::size_t>(r)] + cfg.bound_tol)
                pt.bound_diameter_holds = false;
            if (base.is_complete()) {
                if (min_ps[static_cast<std::size_t>(r)] >
                    gammas[static_cast<std::size_t>(r)] + cfg.bound_tol)
                    pt.bound_min_weight_holds = false;
            }
        }
        pt.bounds_hold = pt.bound_diameter_holds && pt.bound_min_weight_holds;
        if (base.is_complete()) {
            double mp = 0;
            for (double p : min_ps) mp += p;
            pt.bound_min_weight = mp / replicas;
        }
        out.push_back(pt);
    }
    return out;
}

} // namespace qnet
