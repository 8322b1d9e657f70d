#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpvr/error.hpp"
#include "lpvr/model.hpp"
#include "lpvr/numerics.hpp"
#include "lpvr/realization.hpp"

namespace lpvr {

// ---------------------------------------------------------------------------
// Matrix builders along a scheduling trajectory

/// Columns [prod_{j=i+1}^{k-1} F(p_j) G(p_i)]_{i=0..k-1}; the last block is G(p_{k-1}).
inline Matrix reachability_matrix(const DirectRealization& r, const SchedulingTrajectory& traj) {
    if (traj.size() == 0) {
        throw DimensionError("reachability_matrix: trajectory is empty");
    }
    const auto nx = static_cast<Eigen::Index>(r.n_x());
    const auto nu = static_cast<Eigen::Index>(r.n_u());
    const auto k = static_cast<Eigen::Index>(traj.size());
    Matrix out(nx, nu * k);
    Matrix tail = Matrix::Identity(nx, nx);
    for (Eigen::Index i = k - 1; i >= 0; --i) {
        const auto m = eval_realization(r, traj[static_cast<std::size_t>(i)]);
        out.middleCols(i * nu, nu) = tail * m.G;
        tail = tail * m.F;
    }
    return out;
}

/// Block rows H(p_j) prod_{i=0}^{j-1} F(p_i), j = 0..k-1.
inline Matrix observability_matrix(const DirectRealization& r, const SchedulingTrajectory& traj) {
    if (traj.size() == 0) {
        throw DimensionError("observability_matrix: trajectory is empty");
    }
    const auto nx = static_cast<Eigen::Index>(r.n_x());
    const auto ny = static_cast<Eigen::Index>(r.n_y());
    const auto k = static_cast<Eigen::Index>(traj.size());
    Matrix out(ny * k, nx);
    Matrix phi = Matrix::Identity(nx, nx);
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto m = eval_realization(r, traj[static_cast<std::size_t>(j)]);
        out.middleRows(j * ny, ny) = m.H * phi;
        phi = m.F * phi;
    }
    return out;
}

/// State transition prod_{j=0}^{k-1} F(p_j) (latest factor on the left).
inline Matrix transition_product(const DirectRealization& r, const SchedulingTrajectory& traj, std::size_t k) {
    const auto nx = static_cast<Eigen::Index>(r.n_x());
    Matrix phi = Matrix::Identity(nx, nx);
    for (std::size_t j = 0; j < k; ++j) {
        phi = eval_realization(r, traj[j]).F * phi;
    }
    return phi;
}

struct TransformedObservability {
    Matrix T;
    Matrix Obar;
};

/// Obar_k with block rows H(p_j) F^j = [-A(p_j) F_a^j | B(p_j) F_b^j] and the
/// unit lower block triangular T_k (blocks -H(p_j) F^{j-1-i} G) with
/// T_k O_k = Obar_k.
inline TransformedObservability transformed_observability(const DirectRealization& r,
                                                          const SchedulingTrajectory& traj) {
    if (traj.size() == 0) {
        throw DimensionError("transformed_observability: trajectory is empty");
    }
    const auto& s = r.structural();
    const auto nx = static_cast<Eigen::Index>(r.n_x());
    const auto ny = static_cast<Eigen::Index>(r.n_y());
    const auto k = static_cast<Eigen::Index>(traj.size());

    std::vector<Matrix> fpow{Matrix::Identity(nx, nx)};
    for (Eigen::Index j = 1; j < k; ++j) {
        fpow.push_back(s.F * fpow.back());
    }

    TransformedObservability out;
    out.Obar = Matrix(ny * k, nx);
    out.T = Matrix::Identity(ny * k, ny * k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const Matrix h = r.H(traj[static_cast<std::size_t>(j)]);
        out.Obar.middleRows(j * ny, ny) = h * fpow[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < j; ++i) {
            out.T.block(j * ny, i * ny, ny, ny) = -h * fpow[static_cast<std::size_t>(j - 1 - i)] * s.G;
        }
    }
    return out;
}

/// PBH pencil [F(p) - sigma I | G(p)].
inline CMatrix pbh_matrix(const DirectRealization& r, const Vector& p, Complex sigma) {
    const auto m = eval_realization(r, p);
    const auto nx = m.F.rows();
    CMatrix out(nx, nx + m.G.cols());
    out.leftCols(nx) = m.F.cast<Complex>() - sigma * CMatrix::Identity(nx, nx);
    out.rightCols(m.G.cols()) = m.G.cast<Complex>();
    return out;
}

/// Frozen coefficient values at one scheduling point.
struct FrozenCoefficients {
    std::vector<Matrix> A; // A_1..A_na
    std::vector<Matrix> B; // B_0..B_{nb-1}
};

inline FrozenCoefficients freeze(const LpvIoModel& m, const Vector& p) {
    FrozenCoefficients c;
    for (std::size_t i = 1; i <= m.n_a(); ++i) {
        c.A.push_back(eval_coefficient(m, CoefficientKind::A, i, p));
    }
    for (std::size_t i = 0; i < m.n_b(); ++i) {
        c.B.push_back(eval_coefficient(m, CoefficientKind::B, i, p));
    }
    return c;
}

/// [I + sum sigma^{-i} A_i | sum sigma^{-i} B_i] for sigma != 0.
inline CMatrix coprimeness_matrix(const FrozenCoefficients& c, Complex sigma) {
    const auto ny = c.B.front().rows();
    const auto nu = c.B.front().cols();
    CMatrix out = CMatrix::Zero(ny, ny + nu);
    out.leftCols(ny).setIdentity();
    Complex w = 1.0;
    const Complex inv = 1.0 / sigma;
    for (std::size_t i = 0; i < std::max(c.A.size(), c.B.size()); ++i) {
        if (i < c.B.size()) {
            out.rightCols(nu) += w * c.B[i].cast<Complex>();
        }
        w *= inv;
        if (i < c.A.size()) {
            out.leftCols(ny) += w * c.A[i].cast<Complex>();
        }
    }
    return out;
}

/// Data scale 1 + sum |sigma|^{-i} |A_i| + sum |sigma|^{-i} |B_i| of the coprimeness matrix.
inline double coprimeness_scale(const FrozenCoefficients& c, double abs_sigma) {
    double scale = 1.0;
    double w = 1.0;
    for (std::size_t i = 0; i < std::max(c.A.size(), c.B.size()); ++i) {
        if (i < c.B.size()) {
            scale += w * c.B[i].norm();
        }
        w /= abs_sigma;
        if (i < c.A.size()) {
            scale += w * c.A[i].norm();
        }
    }
    return scale;
}

/// [-A_na | B_{nb-1}].
inline Matrix well_posedness_matrix(const FrozenCoefficients& c) {
    const auto ny = c.B.front().rows();
    const auto nu = c.B.front().cols();
    Matrix out = Matrix::Zero(ny, ny + nu);
    if (!c.A.empty()) {
        out.leftCols(ny) = -c.A.back();
    }
    out.rightCols(nu) = c.B.back();
    return out;
}

/// Rank of a coefficient-level matrix with the tolerance floored by the data
/// scale, so an exact cancellation (all entries ~ eps) reads as rank 0.
template <typename Derived>
auto coefficient_rank(const Eigen::MatrixBase<Derived>& m, double eps, double data_scale) {
    const double smax = m.size() == 0 ? 0.0 : numerical_rank(m, RankPolicy::absolute(0.0)).singular_values[0];
    const double tau = eps * static_cast<double>(std::max(m.rows(), m.cols())) * std::max(smax, data_scale);
    return numerical_rank(m, RankPolicy::absolute(tau));
}

// ---------------------------------------------------------------------------
// Tolerances

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();
inline constexpr double kRootZeroThreshold = 1e-10;
inline constexpr double kRootClusterRadius = 1e-6;
inline constexpr double kReconstructionTolerance = 1e-10;
inline constexpr double kSubspaceAngleTolerance = 1e-8;

// ---------------------------------------------------------------------------
// Reachability

enum class ReachabilityStatus { Yes, NotEstablished };

inline const char* to_string(ReachabilityStatus s) { return s == ReachabilityStatus::Yes ? "yes" : "not-established"; }

struct RootCheck {
    Complex sigma;        // root instance from the eigensolver
    Complex evaluated_at; // its cluster centroid
    std::size_t multiplicity = 1;
    Eigen::Index rank = 0;
    Eigen::VectorXd singular_values;
    double tolerance = 0.0;
    bool pass = false;
};

struct ReachabilityPointRecord {
    Vector p;
    bool evaluated = false;
    std::string error;
    std::vector<Complex> roots;
    std::size_t zero_root_count = 0;
    std::vector<RootCheck> root_checks;
    Eigen::Index rank_well_posed = -1;
    Eigen::Index rank_b0 = -1;
    bool coprime = false;
    bool well_posed = false;
    bool pass = false;

    std::vector<RootCheck> failed_roots() const {
        std::vector<RootCheck> out;
        for (const auto& c : root_checks) {
            if (!c.pass) {
                out.push_back(c);
            }
        }
        return out;
    }
};

struct ReachabilityVerdict {
    ReachabilityStatus structurally_reachable = ReachabilityStatus::NotEstablished;
    std::optional<Vector> witness_p;
    std::vector<ReachabilityPointRecord> points;
    std::size_t k_used = 0;
    std::string rule;
    /// Constant-coefficient model whose frozen test failed; the test is
    /// necessary there, so this is a proof of unreachability.
    bool lti_unreachable = false;
};

/// Coprimeness at every nonzero root and well-posedness at one frozen point.
inline ReachabilityPointRecord coprimeness_check(const LpvIoModel& model, const Vector& p, double eps) {
    ReachabilityPointRecord rec;
    rec.p = p;
    const auto c = freeze(model, p);
    const auto ny = static_cast<Eigen::Index>(model.n_y());

    const auto roots = matrix_poly_roots(std::span<const Matrix>(c.A), kRootZeroThreshold);
    rec.roots = roots.roots;
    rec.zero_root_count = roots.zero_root_count;
    rec.coprime = true;
    for (const auto& cl : cluster_roots(roots.roots, kRootClusterRadius)) {
        const CMatrix m = coprimeness_matrix(c, cl.center);
        const auto rr = coefficient_rank(m, eps, coprimeness_scale(c, std::abs(cl.center)));
        for (auto idx : cl.members) {
            RootCheck chk;
            chk.sigma = roots.roots[idx];
            chk.evaluated_at = cl.center;
            chk.multiplicity = cl.multiplicity;
            chk.rank = rr.rank;
            chk.singular_values = rr.singular_values;
            chk.tolerance = rr.tolerance_used;
            chk.pass = rr.rank == ny;
            rec.coprime = rec.coprime && chk.pass;
            rec.root_checks.push_back(std::move(chk));
        }
    }

    const Matrix w = well_posedness_matrix(c);
    const double scale = 1.0 + (c.A.empty() ? 0.0 : c.A.back().norm()) + c.B.back().norm();
    rec.rank_well_posed = coefficient_rank(w, eps, scale).rank;
    rec.well_posed = rec.rank_well_posed == ny;
    rec.evaluated = true;
    rec.pass = rec.coprime && rec.well_posed;
    return rec;
}

inline ReachabilityVerdict check_reachability(const DirectRealization& r, const std::vector<Vector>& grid,
                                              double eps = 1e3 * kMachineEps) {
    if (grid.empty()) {
        throw DimensionError("check_reachability: grid is empty");
    }
    const auto& model = r.model();
    ReachabilityVerdict v;
    v.k_used = r.n_x();

    if (r.kind() == StructureKind::Fir) {
        v.rule = "fir: shift-register state is always reachable";
        v.structurally_reachable = ReachabilityStatus::Yes;
        return v;
    }

    const auto ny = static_cast<Eigen::Index>(model.n_y());
    v.rule = r.kind() == StructureKind::InverseFir ? "inverse-fir: rank B0(p) = n_y at some grid point"
                                                   : "general: coprime at all nonzero roots and rank [-A_na | B_nb-1] = n_y "
                                                     "at some grid point";
    for (const auto& p : grid) {
        ReachabilityPointRecord rec;
        rec.p = p;
        try {
            if (r.kind() == StructureKind::InverseFir) {
                const Matrix b0 = eval_coefficient(model, CoefficientKind::B, 0, p);
                rec.rank_b0 = coefficient_rank(b0, eps, 1.0 + b0.norm()).rank;
                rec.evaluated = true;
                rec.pass = rec.rank_b0 == ny;
            } else {
                rec = coprimeness_check(model, p, eps);
            }
        } catch (const Error& e) {
            rec.evaluated = false;
            rec.error = e.what();
        }
        if (rec.pass && !v.witness_p) {
            v.witness_p = p;
            v.structurally_reachable = ReachabilityStatus::Yes;
        }
        v.points.push_back(std::move(rec));
    }
    v.lti_unreachable = model.is_time_invariant() && v.structurally_reachable == ReachabilityStatus::NotEstablished;
    return v;
}

// ---------------------------------------------------------------------------
// Observability and reconstructability

enum class ObservabilityStatus { No, Structurally, Completely, NotEstablished };

inline const char* to_string(ObservabilityStatus s) {
    switch (s) {
    case ObservabilityStatus::No:
        return "no";
    case ObservabilityStatus::Structurally:
        return "structurally";
    case ObservabilityStatus::Completely:
        return "completely";
    case ObservabilityStatus::NotEstablished:
        return "not-established";
    }
    return "not-established";
}

struct ObservabilityTrial {
    std::size_t length = 0;
    bool evaluated = false;
    std::string error;
    Eigen::Index rank = 0;
    Matrix kernel_basis;
    Eigen::VectorXd singular_values;
    double tolerance = 0.0;
};

struct CoefficientRankRecord {
    Vector p;
    bool evaluated = false;
    std::string error;
    Eigen::Index rank = 0;
};

struct ReconstructabilityResult {
    bool reconstructible = false;
    std::size_t steps = 0;
    double max_residual = 0.0;
    std::size_t trials_tested = 0;
};

struct ObservabilityVerdict {
    ObservabilityStatus observable = ObservabilityStatus::NotEstablished;
    std::string rule;
    Eigen::Index max_rank_found = 0;
    std::vector<ObservabilityTrial> trials;
    /// rank A_na (inverse FIR) or B_{nb-1} (FIR) at each tested point.
    std::vector<CoefficientRankRecord> coefficient_ranks;
    ReconstructabilityResult reconstruction;
};

/// Complete reconstructability in shift_depth() steps: the transition product
/// must annihilate ker O_steps on every trial.
inline ReconstructabilityResult check_reconstructability(const DirectRealization& r,
                                                         const std::vector<SchedulingTrajectory>& trials,
                                                         RankPolicy policy = RankPolicy::standard()) {
    ReconstructabilityResult out;
    out.steps = r.shift_depth();
    out.reconstructible = true;
    for (const auto& t : trials) {
        if (t.size() < out.steps) {
            throw DimensionError("check_reconstructability: trial shorter than " + std::to_string(out.steps) + " steps");
        }
        SchedulingTrajectory prefix{std::vector<Vector>(t.points.begin(),
                                                        t.points.begin() + static_cast<std::ptrdiff_t>(out.steps))};
        const Matrix o = observability_matrix(r, prefix);
        const Matrix phi = transition_product(r, prefix, out.steps);
        const auto rr = numerical_rank(o, policy);
        const double residual = rr.kernel_dim() == 0 ? 0.0 : max_abs(phi * rr.kernel_basis);
        out.max_residual = std::max(out.max_residual, residual);
        if (!(residual < kReconstructionTolerance * (1.0 + max_abs(phi)))) {
            out.reconstructible = false;
        }
        ++out.trials_tested;
    }
    return out;
}

/// Observability verdict from trials plus per-point coefficient ranks.
/// `points` are the frozen points used for the inverse-FIR / FIR coefficient
/// tests; when empty the trial points are used.
inline ObservabilityVerdict check_observability(const DirectRealization& r,
                                                const std::vector<SchedulingTrajectory>& trials,
                                                std::vector<Vector> points = {},
                                                RankPolicy policy = RankPolicy::standard()) {
    if (trials.empty()) {
        throw DimensionError("check_observability: no trials");
    }
    const auto& model = r.model();
    const double eps = policy.kind == RankPolicy::Kind::Relative ? policy.value : 1e3 * kMachineEps;
    ObservabilityVerdict v;

    std::vector<SchedulingTrajectory> usable;
    for (const auto& t : trials) {
        ObservabilityTrial rec;
        rec.length = t.size();
        try {
            if (t.size() < r.shift_depth()) {
                throw DimensionError("trial length " + std::to_string(t.size()) + " below " +
                                     std::to_string(r.shift_depth()));
            }
            const auto rr = numerical_rank(observability_matrix(r, t), policy);
            rec.rank = rr.rank;
            rec.kernel_basis = rr.kernel_basis;
            rec.singular_values = rr.singular_values;
            rec.tolerance = rr.tolerance_used;
            rec.evaluated = true;
            v.max_rank_found = std::max(v.max_rank_found, rr.rank);
            usable.push_back(t);
        } catch (const Error& e) {
            rec.error = e.what();
        }
        v.trials.push_back(std::move(rec));
    }

    if (points.empty()) {
        for (const auto& t : usable) {
            points.insert(points.end(), t.points.begin(), t.points.end());
        }
    }

    auto sweep = [&](CoefficientKind which, std::size_t index, Eigen::Index full) {
        std::size_t ok = 0;
        std::size_t evaluated = 0;
        for (const auto& p : points) {
            CoefficientRankRecord rec;
            rec.p = p;
            try {
                const Matrix c = eval_coefficient(model, which, index, p);
                rec.rank = coefficient_rank(c, eps, 1.0 + c.norm()).rank;
                rec.evaluated = true;
                ++evaluated;
                ok += rec.rank == full ? 1 : 0;
            } catch (const Error& e) {
                rec.error = e.what();
            }
            v.coefficient_ranks.push_back(std::move(rec));
        }
        return std::pair{ok, evaluated};
    };

    switch (r.kind()) {
    case StructureKind::General:
        v.rule = "general: lagged-input states never fully observable";
        v.observable = ObservabilityStatus::No;
        break;
    case StructureKind::InverseFir: {
        v.rule = "inverse-fir: rank A_na(p) = n_y (exact condition)";
        const auto [ok, evaluated] = sweep(CoefficientKind::A, model.n_a(), static_cast<Eigen::Index>(model.n_y()));
        if (evaluated > 0 && ok == evaluated) {
            v.observable = ObservabilityStatus::Completely;
        } else if (ok > 0) {
            v.observable = ObservabilityStatus::Structurally;
        } else {
            v.observable = model.is_time_invariant() && evaluated > 0 ? ObservabilityStatus::No
                                                                      : ObservabilityStatus::NotEstablished;
        }
        break;
    }
    case StructureKind::Fir: {
        if (model.n_y() < model.n_u()) {
            v.rule = "fir with n_y < n_u: never observable";
            v.observable = ObservabilityStatus::No;
            break;
        }
        v.rule = "fir with n_y >= n_u: rank B_nb-1(p) = n_u (sufficient only)";
        const auto [ok, evaluated] =
            sweep(CoefficientKind::B, model.n_b() - 1, static_cast<Eigen::Index>(model.n_u()));
        if (evaluated > 0 && ok == evaluated) {
            v.observable = ObservabilityStatus::Completely;
        } else if (ok > 0) {
            v.observable = ObservabilityStatus::Structurally;
        } else {
            v.observable = ObservabilityStatus::NotEstablished;
        }
        break;
    }
    }

    if (!usable.empty()) {
        v.reconstruction = check_reconstructability(r, usable, policy);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Frozen-scheduling analyses

struct FrozenKalman {
    Vector p;
    Eigen::Index minimal_order = 0;
    Eigen::Index reachable_dim = 0;
    Eigen::Index observable_dim = 0;
    Matrix unreachable_basis;
    Matrix unobservable_basis;
};

/// Dimensions of the frozen LTI system at p. The minimal order is
/// rank(O_nx R_nx); the unreachable basis spans (im R_nx)^perp.
inline FrozenKalman frozen_kalman_decomposition(const DirectRealization& r, const Vector& p,
                                                RankPolicy policy = RankPolicy::standard()) {
    const auto traj = SchedulingTrajectory::constant(p, r.n_x());
    const Matrix rm = reachability_matrix(r, traj);
    const Matrix om = observability_matrix(r, traj);
    FrozenKalman out;
    out.p = p;
    const auto rr = numerical_rank(rm, policy);
    const auto ro = numerical_rank(om, policy);
    out.reachable_dim = rr.rank;
    out.observable_dim = ro.rank;
    out.unreachable_basis = numerical_rank(Matrix(rm.transpose()), policy).kernel_basis;
    out.unobservable_basis = ro.kernel_basis;
    out.minimal_order = numerical_rank(Matrix(om * rm), policy).rank;
    return out;
}

/// Lyapunov test of the frozen transition matrix with Q = I.
inline LyapunovResult frozen_stability(const DirectRealization& r, const Vector& p) {
    const auto m = eval_realization(r, p);
    return solve_discrete_lyapunov(m.F, Matrix::Identity(m.F.rows(), m.F.cols()));
}

// ---------------------------------------------------------------------------
// Aggregate analysis

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 1;

    friend bool operator==(const GridAxis&, const GridAxis&) = default;
};

struct AnalysisConfig {
    /// Explicit grid per scheduling dimension; empty means the model domain
    /// with `grid_points_per_dim` points (the domain must then be bounded).
    std::vector<GridAxis> grid;
    std::size_t grid_points_per_dim = 101;
    double rank_epsilon_scale = 1e3;
    /// Observability horizon; 0 means n_x.
    std::size_t horizon = 0;
    std::size_t trial_count = 10;
    std::uint64_t seed = 0;

    double rank_epsilon() const { return rank_epsilon_scale * kMachineEps; }
};

struct FrozenPointAnalysis {
    FrozenKalman kalman;
    LyapunovResult stability;
    bool evaluated = false;
    std::string error;
};

struct AnalysisReport {
    AnalysisConfig config;
    std::vector<GridAxis> resolved_grid;
    std::size_t horizon = 0;
    StructureKind kind = StructureKind::General;
    std::size_t n_x = 0;
    bool time_invariant = false;
    std::size_t n_y = 0;
    std::size_t n_u = 0;
    std::size_t n_p = 0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    Domain domain;
    std::vector<Vector> grid_points;
    ReachabilityVerdict reachability;
    ObservabilityVerdict observability;
    std::vector<FrozenPointAnalysis> frozen;
};

inline std::vector<double> axis_values(const GridAxis& a) {
    std::vector<double> v;
    if (a.count == 0) {
        return v;
    }
    if (a.count == 1) {
        v.push_back(a.lo == a.hi ? a.lo : 0.5 * (a.lo + a.hi));
        return v;
    }
    for (std::size_t i = 0; i < a.count; ++i) {
        v.push_back(i + 1 == a.count ? a.hi
                                     : a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(a.count - 1));
    }
    return v;
}

/// Tensor grid, first axis slowest.
inline std::vector<Vector> grid_points(const std::vector<GridAxis>& axes) {
    std::vector<Vector> pts{Vector(0)};
    for (const auto& a : axes) {
        std::vector<Vector> next;
        for (const auto& base : pts) {
            for (double x : axis_values(a)) {
                Vector p(base.size() + 1);
                p.head(base.size()) = base;
                p[base.size()] = x;
                next.push_back(p);
            }
        }
        pts = std::move(next);
    }
    return pts;
}

/// Grid axes for a model under a config. A time-invariant model collapses to
/// one point (the box center, or an interior domain point when unbounded).
inline std::vector<GridAxis> resolve_grid(const LpvIoModel& model, const AnalysisConfig& cfg) {
    std::vector<GridAxis> axes = cfg.grid;
    if (!axes.empty() && axes.size() != model.n_p()) {
        throw DimensionError("grid has " + std::to_string(axes.size()) + " axes, expected n_p = " +
                             std::to_string(model.n_p()));
    }
    if (model.is_time_invariant()) {
        std::vector<GridAxis> one;
        for (std::size_t j = 0; j < model.n_p(); ++j) {
            const double c = axes.empty() ? (model.domain()[j].bounded() ? 0.5 * (model.domain()[j].lo + model.domain()[j].hi)
                                                                         : std::clamp(0.0, model.domain()[j].lo, model.domain()[j].hi))
                                          : axis_values(axes[j]).front();
            one.push_back({c, c, 1});
        }
        return one;
    }
    if (axes.empty()) {
        for (const auto& iv : model.domain()) {
            if (!iv.bounded()) {
                throw Error("the model domain is unbounded; supply a bounded grid box");
            }
            axes.push_back({iv.lo, iv.hi, cfg.grid_points_per_dim});
        }
    }
    for (std::size_t j = 0; j < axes.size(); ++j) {
        const auto& a = axes[j];
        if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || a.lo > a.hi || a.count == 0) {
            throw Error("grid axis " + std::to_string(j) + " must be a bounded interval with at least one point");
        }
        if (!model.domain()[j].contains(a.lo) || !model.domain()[j].contains(a.hi)) {
            throw OutOfDomainError("grid axis " + std::to_string(j) + " leaves the model domain");
        }
    }
    return axes;
}

/// Constant trajectories at each grid point plus `trial_count` uniformly
/// random ones in the grid box.
inline std::vector<SchedulingTrajectory> default_trials(const std::vector<GridAxis>& axes,
                                                        const std::vector<Vector>& points, std::size_t length,
                                                        std::size_t trial_count, std::uint64_t seed) {
    std::vector<SchedulingTrajectory> trials;
    for (const auto& p : points) {
        trials.push_back(SchedulingTrajectory::constant(p, length));
    }
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trial_count; ++t) {
        SchedulingTrajectory traj;
        for (std::size_t k = 0; k < length; ++k) {
            Vector p(static_cast<Eigen::Index>(axes.size()));
            for (std::size_t j = 0; j < axes.size(); ++j) {
                std::uniform_real_distribution<double> d(axes[j].lo, axes[j].hi);
                p[static_cast<Eigen::Index>(j)] = axes[j].lo == axes[j].hi ? axes[j].lo : d(rng);
            }
            traj.points.push_back(p);
        }
        trials.push_back(std::move(traj));
    }
    return trials;
}

inline AnalysisReport analyze(const LpvIoModel& model, const AnalysisConfig& cfg = {}) {
    const auto r = build_direct(model);
    AnalysisReport rep;
    rep.config = cfg;
    rep.kind = r.kind();
    rep.n_x = r.n_x();
    rep.time_invariant = model.is_time_invariant();
    rep.n_y = model.n_y();
    rep.n_u = model.n_u();
    rep.n_p = model.n_p();
    rep.n_a = model.n_a();
    rep.n_b = model.n_b();
    rep.domain = model.domain();
    rep.resolved_grid = resolve_grid(model, cfg);
    rep.grid_points = grid_points(rep.resolved_grid);
    rep.horizon = std::max(cfg.horizon == 0 ? r.n_x() : cfg.horizon, r.shift_depth());

    const double eps = cfg.rank_epsilon();
    const auto policy = RankPolicy::relative(eps);
    rep.reachability = check_reachability(r, rep.grid_points, eps);
    const auto trials = default_trials(rep.resolved_grid, rep.grid_points, rep.horizon,
                                       rep.time_invariant ? 0 : cfg.trial_count, cfg.seed);
    rep.observability = check_observability(r, trials, rep.grid_points, policy);

    for (const auto& p : rep.grid_points) {
        FrozenPointAnalysis f;
        try {
            f.kalman = frozen_kalman_decomposition(r, p, policy);
            f.stability = frozen_stability(r, p);
            f.evaluated = true;
        } catch (const Error& e) {
            f.kalman.p = p;
            f.error = e.what();
        }
        rep.frozen.push_back(std::move(f));
    }
    return rep;
}

} // namespace lpvr
