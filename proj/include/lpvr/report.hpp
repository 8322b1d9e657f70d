#pragma once

#include <cmath>
#include <string>

#include "json.hpp"

#include "lpvr/analysis.hpp"
#include "lpvr/version.hpp"

namespace lpvr {

namespace report_detail {

using ojson = nlohmann::ordered_json;

inline ojson number(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    return v;
}

inline ojson vec(const Eigen::VectorXd& v) {
    auto out = ojson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(number(v[i]));
    }
    return out;
}

inline ojson complex_pair(Complex c) { return ojson::array({c.real(), c.imag()}); }

/// Basis as a list of column vectors.
inline ojson columns(const Matrix& m) {
    auto out = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out.push_back(vec(m.col(j)));
    }
    return out;
}

inline ojson rows(const Matrix& m) {
    auto out = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out.push_back(vec(m.row(i).transpose()));
    }
    return out;
}

inline ojson axes(const std::vector<GridAxis>& g) {
    auto out = ojson::array();
    for (const auto& a : g) {
        ojson o;
        o["lo"] = a.lo;
        o["hi"] = a.hi;
        o["count"] = a.count;
        out.push_back(o);
    }
    return out;
}

inline ojson config(const AnalysisConfig& c) {
    ojson o;
    o["grid"] = axes(c.grid);
    o["grid_points_per_dim"] = c.grid_points_per_dim;
    o["rank_epsilon_scale"] = c.rank_epsilon_scale;
    o["horizon"] = c.horizon;
    o["trial_count"] = c.trial_count;
    o["seed"] = c.seed;
    return o;
}

inline ojson reachability(const ReachabilityVerdict& v) {
    ojson o;
    o["structurally_reachable"] = to_string(v.structurally_reachable);
    o["witness_p"] = v.witness_p ? vec(*v.witness_p) : ojson(nullptr);
    o["lti_unreachable"] = v.lti_unreachable;
    o["rule"] = v.rule;
    o["k_used"] = v.k_used;
    auto pts = ojson::array();
    for (const auto& r : v.points) {
        ojson p;
        p["p"] = vec(r.p);
        p["evaluated"] = r.evaluated;
        if (!r.error.empty()) {
            p["error"] = r.error;
        }
        p["pass"] = r.pass;
        if (r.rank_b0 >= 0) {
            p["rank_b0"] = r.rank_b0;
        } else {
            auto roots = ojson::array();
            for (auto s : r.roots) {
                roots.push_back(complex_pair(s));
            }
            p["roots_tested"] = roots;
            p["zero_root_count"] = r.zero_root_count;
            auto failed = ojson::array();
            for (const auto& c : r.failed_roots()) {
                ojson f;
                f["sigma"] = complex_pair(c.sigma);
                f["evaluated_at"] = complex_pair(c.evaluated_at);
                f["multiplicity"] = c.multiplicity;
                f["rank"] = c.rank;
                f["singular_values"] = vec(c.singular_values);
                f["tolerance"] = c.tolerance;
                failed.push_back(f);
            }
            p["failed_roots"] = failed;
            p["coprime"] = r.coprime;
            p["rank_well_posed"] = r.rank_well_posed;
            p["well_posed"] = r.well_posed;
        }
        pts.push_back(p);
    }
    o["points"] = pts;
    return o;
}

inline ojson observability(const ObservabilityVerdict& v) {
    ojson o;
    o["observable"] = to_string(v.observable);
    o["rule"] = v.rule;
    o["max_rank_found"] = v.max_rank_found;
    o["reconstructible_in"] = v.reconstruction.reconstructible ? ojson(v.reconstruction.steps) : ojson("failed");
    o["reconstruction_max_residual"] = v.reconstruction.max_residual;
    auto trials = ojson::array();
    for (const auto& t : v.trials) {
        ojson j;
        j["length"] = t.length;
        j["evaluated"] = t.evaluated;
        if (!t.error.empty()) {
            j["error"] = t.error;
        }
        j["rank"] = t.rank;
        j["kernel_basis"] = columns(t.kernel_basis);
        trials.push_back(j);
    }
    o["trials"] = trials;
    if (!v.coefficient_ranks.empty()) {
        auto cr = ojson::array();
        for (const auto& c : v.coefficient_ranks) {
            ojson j;
            j["p"] = vec(c.p);
            j["evaluated"] = c.evaluated;
            if (!c.error.empty()) {
                j["error"] = c.error;
            }
            j["rank"] = c.rank;
            cr.push_back(j);
        }
        o["coefficient_ranks"] = cr;
    }
    return o;
}

inline ojson frozen(const FrozenPointAnalysis& f) {
    ojson o;
    o["p"] = vec(f.kalman.p);
    o["evaluated"] = f.evaluated;
    if (!f.error.empty()) {
        o["error"] = f.error;
        return o;
    }
    o["minimal_order"] = f.kalman.minimal_order;
    o["reachable_dim"] = f.kalman.reachable_dim;
    o["observable_dim"] = f.kalman.observable_dim;
    o["unreachable_basis"] = columns(f.kalman.unreachable_basis);
    o["unobservable_basis"] = columns(f.kalman.unobservable_basis);
    o["stability"] = to_string(f.stability.status);
    if (f.stability.solved) {
        o["lyapunov_min_eigenvalue"] = f.stability.min_eigenvalue;
        o["lyapunov_max_eigenvalue"] = f.stability.max_eigenvalue;
    }
    return o;
}

} // namespace report_detail

inline nlohmann::ordered_json report_to_json(const AnalysisReport& rep) {
    using report_detail::ojson;
    ojson o;
    o["tool"] = "lpvr";
    o["version"] = kVersion;
    o["config"] = report_detail::config(rep.config);
    ojson resolved;
    resolved["grid"] = report_detail::axes(rep.resolved_grid);
    resolved["horizon"] = rep.horizon;
    resolved["grid_point_count"] = rep.grid_points.size();
    o["resolved"] = resolved;
    ojson tol;
    tol["rank_epsilon"] = rep.config.rank_epsilon();
    tol["rank_policy"] = "relative: eps * max(rows, cols) * sigma_max; coefficient tests floor sigma_max at the data scale";
    tol["root_zero_threshold"] = kRootZeroThreshold;
    tol["root_cluster_radius"] = kRootClusterRadius;
    tol["reconstruction_residual"] = kReconstructionTolerance;
    tol["lyapunov_relative_min_eigenvalue"] = 1e-10;
    o["tolerances"] = tol;
    ojson model;
    model["n_y"] = rep.n_y;
    model["n_u"] = rep.n_u;
    model["n_p"] = rep.n_p;
    model["n_a"] = rep.n_a;
    model["n_b"] = rep.n_b;
    model["time_invariant"] = rep.time_invariant;
    auto dom = ojson::array();
    for (const auto& iv : rep.domain) {
        dom.push_back(ojson::array({report_detail::number(iv.lo), report_detail::number(iv.hi)}));
    }
    model["domain"] = dom;
    o["model"] = model;
    o["kind"] = to_string(rep.kind);
    o["n_x"] = rep.n_x;
    o["reachability"] = report_detail::reachability(rep.reachability);
    o["observability"] = report_detail::observability(rep.observability);
    auto fr = ojson::array();
    for (const auto& f : rep.frozen) {
        fr.push_back(report_detail::frozen(f));
    }
    o["frozen"] = fr;
    return o;
}

inline std::string report_to_text(const AnalysisReport& rep) { return report_to_json(rep).dump(2) + "\n"; }

} // namespace lpvr
