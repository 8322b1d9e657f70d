#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpvr/analysis.hpp"
#include "lpvr/error.hpp"
#include "lpvr/model.hpp"
#include "lpvr/numerics.hpp"
#include "lpvr/realization.hpp"

namespace lpvr {

/// Finite signal window: samples[k] is the value at time start + k.
struct SignalTrajectory {
    std::vector<Vector> samples;
    std::size_t dimension = 0;
    long start = 0;

    SignalTrajectory() = default;
    SignalTrajectory(std::vector<Vector> s, std::size_t dim) : samples(std::move(s)), dimension(dim) {
        for (std::size_t k = 0; k < samples.size(); ++k) {
            if (static_cast<std::size_t>(samples[k].size()) != dimension) {
                throw DimensionError("sample " + std::to_string(k) + " has dimension " +
                                     std::to_string(samples[k].size()) + ", expected " + std::to_string(dimension));
            }
        }
    }

    std::size_t size() const noexcept { return samples.size(); }
    const Vector& operator[](std::size_t k) const { return samples[k]; }

    static SignalTrajectory zeros(std::size_t dim, std::size_t length) {
        return {std::vector<Vector>(length, Vector::Zero(static_cast<Eigen::Index>(dim))), dim};
    }

    /// One row per time step.
    static SignalTrajectory from_rows(const Matrix& m) {
        std::vector<Vector> s;
        for (Eigen::Index k = 0; k < m.rows(); ++k) {
            s.push_back(m.row(k).transpose());
        }
        return {std::move(s), static_cast<std::size_t>(m.cols())};
    }

    Matrix to_rows() const {
        Matrix m(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dimension));
        for (std::size_t k = 0; k < size(); ++k) {
            m.row(static_cast<Eigen::Index>(k)) = samples[k].transpose();
        }
        return m;
    }

    /// [s_0; s_1; ...; s_{N-1}].
    Vector stacked() const {
        Vector v(static_cast<Eigen::Index>(size() * dimension));
        for (std::size_t k = 0; k < size(); ++k) {
            v.segment(static_cast<Eigen::Index>(k * dimension), static_cast<Eigen::Index>(dimension)) = samples[k];
        }
        return v;
    }
};

namespace detail {

template <typename Fn>
auto at_step(std::size_t k, Fn&& fn) {
    try {
        return fn();
    } catch (const DenominatorZeroError& e) {
        throw DenominatorZeroError("step " + std::to_string(k) + ": " + e.what());
    } catch (const OutOfDomainError& e) {
        throw OutOfDomainError("step " + std::to_string(k) + ": " + e.what());
    }
}

inline void check_lengths(const SignalTrajectory& u, const SchedulingTrajectory& p, std::size_t n_u) {
    if (u.size() != p.size()) {
        throw DimensionError("input has " + std::to_string(u.size()) + " samples but scheduling has " +
                             std::to_string(p.size()));
    }
    if (u.dimension != n_u) {
        throw DimensionError("input dimension " + std::to_string(u.dimension) + " does not match n_u = " +
                             std::to_string(n_u));
    }
}

} // namespace detail

/// Runs the difference equation for k = 0..N-1. `init_y` holds
/// y_{-1}, ..., y_{-na} and `init_u` holds u_{-1}, ..., u_{-nb+1} (newest first).
inline SignalTrajectory simulate_io(const LpvIoModel& model, const SignalTrajectory& u, const SchedulingTrajectory& p,
                                    const std::vector<Vector>& init_y, const std::vector<Vector>& init_u) {
    detail::check_lengths(u, p, model.n_u());
    if (init_y.size() != model.n_a() || init_u.size() != model.n_b() - 1) {
        throw DimensionError("initial windows must hold n_a = " + std::to_string(model.n_a()) + " outputs and n_b - 1 = " +
                             std::to_string(model.n_b() - 1) + " inputs");
    }
    const auto ny = static_cast<Eigen::Index>(model.n_y());
    // Histories, newest first.
    std::vector<Vector> yh = init_y;
    std::vector<Vector> uh = init_u;
    std::vector<Vector> out;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const auto c = detail::at_step(k, [&] { return freeze(model, p[k]); });
        Vector y = Vector::Zero(ny);
        for (std::size_t i = 1; i <= model.n_a(); ++i) {
            y -= c.A[i - 1] * yh[i - 1];
        }
        y += c.B[0] * u[k];
        for (std::size_t i = 1; i < model.n_b(); ++i) {
            y += c.B[i] * uh[i - 1];
        }
        if (!yh.empty()) {
            yh.insert(yh.begin(), y);
            yh.pop_back();
        }
        if (!uh.empty()) {
            uh.insert(uh.begin(), u[k]);
            uh.pop_back();
        }
        out.push_back(std::move(y));
    }
    return {std::move(out), model.n_y()};
}

/// Zero initial windows.
inline SignalTrajectory simulate_io(const LpvIoModel& model, const SignalTrajectory& u,
                                    const SchedulingTrajectory& p) {
    return simulate_io(model, u, p,
                       std::vector<Vector>(model.n_a(), Vector::Zero(static_cast<Eigen::Index>(model.n_y()))),
                       std::vector<Vector>(model.n_b() - 1, Vector::Zero(static_cast<Eigen::Index>(model.n_u()))));
}

/// State [y_{-1}; ...; y_{-na}; u_{-1}; ...; u_{-nb+1}] from newest-first windows.
inline Vector pack_initial_state(const DirectRealization& r, const std::vector<Vector>& init_y,
                                 const std::vector<Vector>& init_u) {
    const auto& m = r.model();
    if (init_y.size() != m.n_a() || init_u.size() != m.n_b() - 1) {
        throw DimensionError("initial windows must hold n_a outputs and n_b - 1 inputs");
    }
    Vector x(static_cast<Eigen::Index>(r.n_x()));
    Eigen::Index at = 0;
    for (const auto& y : init_y) {
        x.segment(at, y.size()) = y;
        at += y.size();
    }
    for (const auto& v : init_u) {
        x.segment(at, v.size()) = v;
        at += v.size();
    }
    return x;
}

struct StateSimulation {
    std::vector<Vector> states; // x_0 .. x_N
    SignalTrajectory y;
};

inline StateSimulation simulate_ss(const DirectRealization& r, const Vector& x0, const SignalTrajectory& u,
                                   const SchedulingTrajectory& p) {
    detail::check_lengths(u, p, r.n_u());
    if (static_cast<std::size_t>(x0.size()) != r.n_x()) {
        throw DimensionError("initial state has dimension " + std::to_string(x0.size()) + ", expected n_x = " +
                             std::to_string(r.n_x()));
    }
    StateSimulation out;
    out.states.push_back(x0);
    std::vector<Vector> ys;
    Vector x = x0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const auto m = detail::at_step(k, [&] { return eval_realization(r, p[k]); });
        ys.push_back(m.H * x + m.J * u[k]);
        x = m.F * x + m.G * u[k];
        out.states.push_back(x);
    }
    out.y = SignalTrajectory(std::move(ys), r.n_y());
    return out;
}

/// Stacked response y = O_k x0 + Gamma u over a window of k steps.
struct ResponseDecomposition {
    Matrix O;
    Matrix Gamma;
    /// Gamma enters with a plus sign: it is built from zero-state impulse
    /// responses, so y = O x0 + Gamma u holds as simulated.
    std::string sign_convention = "plus";
};

inline ResponseDecomposition response_decomposition(const DirectRealization& r, const SchedulingTrajectory& p) {
    const std::size_t k = p.size();
    const auto nu = static_cast<Eigen::Index>(r.n_u());
    const auto ny = static_cast<Eigen::Index>(r.n_y());
    ResponseDecomposition out;
    out.O = observability_matrix(r, p);
    out.Gamma = Matrix::Zero(ny * static_cast<Eigen::Index>(k), nu * static_cast<Eigen::Index>(k));
    const Vector x0 = Vector::Zero(static_cast<Eigen::Index>(r.n_x()));
    for (std::size_t t = 0; t < k; ++t) {
        for (Eigen::Index c = 0; c < nu; ++c) {
            auto u = SignalTrajectory::zeros(r.n_u(), k);
            u.samples[t][c] = 1.0;
            out.Gamma.col(static_cast<Eigen::Index>(t) * nu + c) = simulate_ss(r, x0, u, p).y.stacked();
        }
    }
    return out;
}

struct InitialStateEstimate {
    Vector x0_hat;
    double residual = 0.0;
    Matrix kernel_ambiguity;
};

/// Least-squares x0 from one data window: x0_hat = pinv(O_k) (y - Gamma u).
/// Only the component orthogonal to ker O_k is recoverable.
inline InitialStateEstimate estimate_initial_state(const DirectRealization& r, const SchedulingTrajectory& p,
                                                   const SignalTrajectory& u, const SignalTrajectory& y,
                                                   RankPolicy policy = RankPolicy::standard()) {
    detail::check_lengths(u, p, r.n_u());
    if (y.size() != p.size() || y.dimension != r.n_y()) {
        throw DimensionError("output window must have " + std::to_string(p.size()) + " samples of dimension n_y");
    }
    const auto d = response_decomposition(r, p);
    const Vector rhs = y.stacked() - d.Gamma * u.stacked();
    InitialStateEstimate out;
    out.x0_hat = min_norm_solve(d.O, rhs, policy);
    out.residual = (d.O * out.x0_hat - rhs).norm();
    out.kernel_ambiguity = numerical_rank(d.O, policy).kernel_basis;
    return out;
}

struct TransformedStep {
    Matrix F;
    Matrix G;
    Matrix H;
    Matrix J;
};

inline constexpr double kTransformConditionLimit = 1e12;

/// With x_k = T(p_k) z_k: F~_k = T(p_{k+1})^{-1} F(p_k) T(p_k),
/// G~_k = T(p_{k+1})^{-1} G(p_k), H~_k = H(p_k) T(p_k), J~_k = J(p_k).
/// Returns one tuple per k = 0..len-2 (the last point only supplies T(p_{k+1})).
inline std::vector<TransformedStep> transform_along_trajectory(const DirectRealization& r,
                                                               const std::function<Matrix(const Vector&)>& t_eval,
                                                               const SchedulingTrajectory& p) {
    if (p.size() < 2) {
        throw DimensionError("transform_along_trajectory: need at least two scheduling points");
    }
    const auto nx = static_cast<Eigen::Index>(r.n_x());
    std::vector<Matrix> ts;
    std::vector<Eigen::FullPivLU<Matrix>> lus;
    for (std::size_t k = 0; k < p.size(); ++k) {
        Matrix t = t_eval(p[k]);
        if (t.rows() != nx || t.cols() != nx) {
            throw DimensionError("transform at step " + std::to_string(k) + " is not n_x x n_x");
        }
        const auto sv = t.jacobiSvd().singularValues();
        const double cond = sv[nx - 1] > 0.0 ? sv[0] / sv[nx - 1] : std::numeric_limits<double>::infinity();
        if (!(cond < kTransformConditionLimit)) {
            throw NumericalError("transform at step " + std::to_string(k) + " is near singular (condition number " +
                                 std::to_string(cond) + ")");
        }
        lus.emplace_back(t);
        ts.push_back(std::move(t));
    }
    std::vector<TransformedStep> out;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        const auto m = detail::at_step(k, [&] { return eval_realization(r, p[k]); });
        TransformedStep s;
        s.F = lus[k + 1].solve(m.F * ts[k]);
        s.G = lus[k + 1].solve(m.G);
        s.H = m.H * ts[k];
        s.J = m.J;
        out.push_back(std::move(s));
    }
    return out;
}

/// Simulates z_{k+1} = F~_k z_k + G~_k u_k, y_k = H~_k z_k + J~_k u_k.
inline SignalTrajectory simulate_transformed(const std::vector<TransformedStep>& steps, const Vector& z0,
                                             const SignalTrajectory& u) {
    if (u.size() > steps.size()) {
        throw DimensionError("input has " + std::to_string(u.size()) + " samples but only " +
                             std::to_string(steps.size()) + " transformed steps are available");
    }
    std::vector<Vector> ys;
    Vector z = z0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const auto& s = steps[k];
        ys.push_back(s.H * z + s.J * u[k]);
        z = s.F * z + s.G * u[k];
    }
    const std::size_t ny = steps.empty() ? 0 : static_cast<std::size_t>(steps.front().H.rows());
    return {std::move(ys), ny};
}

} // namespace lpvr
