#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "lpvr/error.hpp"

namespace lpvr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Rank tolerance policy. Relative: tol = eps * max(rows, cols) * sigma_max.
/// Absolute: tol = tau.
struct RankPolicy {
    enum class Kind { Relative, Absolute };
    Kind kind = Kind::Relative;
    double value = 1e3 * std::numeric_limits<double>::epsilon();

    static RankPolicy relative(double eps) { return {Kind::Relative, eps}; }
    static RankPolicy absolute(double tau) { return {Kind::Absolute, tau}; }
    static RankPolicy standard() { return relative(1e3 * std::numeric_limits<double>::epsilon()); }

    double tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max) const {
        if (kind == Kind::Absolute) {
            return value;
        }
        return value * static_cast<double>(std::max(rows, cols)) * sigma_max;
    }
};

/// Outcome of an SVD-based rank decision. `kernel_basis` holds orthonormal
/// columns spanning the numerical kernel; `image_basis` spans the column space.
template <typename Scalar>
struct BasicRankResult {
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Eigen::Index rank = 0;
    Eigen::VectorXd singular_values;
    double tolerance_used = 0.0;
    MatrixType kernel_basis;
    MatrixType image_basis;
    Eigen::Index row_space_dim = 0;

    Eigen::Index kernel_dim() const { return kernel_basis.cols(); }
};

using RankResult = BasicRankResult<double>;
using ComplexRankResult = BasicRankResult<Complex>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const auto v = m(i, j);
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Complex>) {
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                    return false;
                }
            } else {
                if (!std::isfinite(v)) {
                    return false;
                }
            }
        }
    }
    return true;
}

/// Numerical rank, kernel and image via a full SVD.
template <typename Derived>
BasicRankResult<typename Derived::Scalar> numerical_rank(const Eigen::MatrixBase<Derived>& m,
                                                         RankPolicy policy = RankPolicy::standard()) {
    using Scalar = typename Derived::Scalar;
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    BasicRankResult<Scalar> out;
    const Eigen::Index rows = m.rows();
    const Eigen::Index cols = m.cols();
    if (!all_finite(m)) {
        throw NumericalError("numerical_rank: matrix has non-finite entries");
    }
    if (rows == 0 || cols == 0) {
        out.singular_values = Eigen::VectorXd(0);
        out.tolerance_used = policy.kind == RankPolicy::Kind::Absolute ? policy.value : 0.0;
        out.kernel_basis = MatrixType::Identity(cols, cols);
        out.image_basis = MatrixType(rows, 0);
        return out;
    }
    const MatrixType a = m;
    Eigen::JacobiSVD<MatrixType> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.singular_values = svd.singularValues();
    const double smax = out.singular_values.size() > 0 ? out.singular_values[0] : 0.0;
    out.tolerance_used = policy.tolerance(rows, cols, smax);
    Eigen::Index r = 0;
    while (r < out.singular_values.size() && out.singular_values[r] > out.tolerance_used) {
        ++r;
    }
    out.rank = r;
    out.row_space_dim = r;
    out.kernel_basis = svd.matrixV().rightCols(cols - r);
    out.image_basis = svd.matrixU().leftCols(r);
    return out;
}

/// Minimum-norm least-squares solution of m x = b with rank truncation.
inline Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b,
                                      RankPolicy policy = RankPolicy::standard()) {
    if (m.rows() == 0 || m.cols() == 0) {
        return Eigen::VectorXd::Zero(m.cols());
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double tol = policy.tolerance(m.rows(), m.cols(), s.size() > 0 ? s[0] : 0.0);
    Eigen::VectorXd coeffs = svd.matrixU().transpose() * b;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        coeffs[i] = s[i] > tol ? coeffs[i] / s[i] : 0.0;
    }
    return svd.matrixV() * coeffs;
}

/// Orthonormal basis for the column space of `m`.
inline Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m, RankPolicy policy = RankPolicy::standard()) {
    return numerical_rank(m, policy).image_basis;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------
// Matrix polynomial roots

/// Roots of det(sigma^n I + sigma^{n-1} A_1 + ... + A_n).
/// `roots` excludes the near-zero roots, which are only counted.
struct RootSet {
    std::vector<Complex> roots;
    std::size_t zero_root_count = 0;
    std::size_t degree = 0;

    std::size_t total() const { return roots.size() + zero_root_count; }
};

/// Block companion matrix [-A_1 ... -A_n; I 0 ...; ...] of the monic
/// matrix polynomial with lag coefficients A_1..A_n.
inline Eigen::MatrixXd block_companion(std::span<const Eigen::MatrixXd> lag_coeffs) {
    if (lag_coeffs.empty()) {
        throw DimensionError("block_companion: at least one coefficient required");
    }
    const Eigen::Index n = lag_coeffs.front().rows();
    const auto order = static_cast<Eigen::Index>(lag_coeffs.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n * order, n * order);
    for (Eigen::Index i = 0; i < order; ++i) {
        const auto& a = lag_coeffs[static_cast<std::size_t>(i)];
        if (a.rows() != n || a.cols() != n) {
            throw DimensionError("block_companion: coefficients must all be square of equal size");
        }
        c.block(0, i * n, n, n) = -a;
    }
    if (order > 1) {
        c.block(n, 0, n * (order - 1), n * (order - 1)).setIdentity();
    }
    return c;
}

/// Eigenvalues of the block companion linearization. Roots with
/// |sigma| < zero_threshold * (1 + max|sigma_j|) are counted as zero roots.
inline RootSet matrix_poly_roots(std::span<const Eigen::MatrixXd> lag_coeffs, double zero_threshold = 1e-10) {
    const auto c = block_companion(lag_coeffs);
    if (!all_finite(c)) {
        throw NumericalError("matrix_poly_roots: non-finite coefficients");
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("matrix_poly_roots: eigensolver did not converge");
    }
    const Eigen::VectorXcd ev = es.eigenvalues();
    double biggest = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        biggest = std::max(biggest, std::abs(ev[i]));
    }
    RootSet out;
    out.degree = static_cast<std::size_t>(ev.size());
    const double zero_tol = zero_threshold * (1.0 + biggest);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i]) < zero_tol) {
            ++out.zero_root_count;
        } else {
            out.roots.push_back(ev[i]);
        }
    }
    std::sort(out.roots.begin(), out.roots.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

struct RootCluster {
    Complex center;
    std::size_t multiplicity = 0;
    std::vector<std::size_t> members;
};

/// Single-linkage clustering of roots within `tol`; the center is the member
/// mean, which is far more accurate than any single member of a multiple root.
inline std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots, double tol = 1e-6) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) {
        parent[i] = i;
    }
    auto find = [&](std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(roots[i] - roots[j]) < tol) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<RootCluster> clusters;
    std::vector<std::ptrdiff_t> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<std::ptrdiff_t>(clusters.size());
            clusters.emplace_back();
        }
        auto& c = clusters[static_cast<std::size_t>(slot[r])];
        c.members.push_back(i);
        ++c.multiplicity;
    }
    for (auto& c : clusters) {
        Complex sum{0.0, 0.0};
        for (auto i : c.members) {
            sum += roots[i];
        }
        c.center = sum / static_cast<double>(c.multiplicity);
    }
    return clusters;
}

// ---------------------------------------------------------------------------
// Discrete Lyapunov equation

enum class LyapunovStatus { Stable, Unstable, Indeterminate };

inline const char* to_string(LyapunovStatus s) {
    switch (s) {
    case LyapunovStatus::Stable:
        return "stable";
    case LyapunovStatus::Unstable:
        return "unstable";
    case LyapunovStatus::Indeterminate:
        return "indeterminate";
    }
    return "indeterminate";
}

struct LyapunovResult {
    LyapunovStatus status = LyapunovStatus::Indeterminate;
    bool solved = false;
    Eigen::MatrixXd P;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
};

/// Solves F^T P F - P = -Q by vectorization. Stable iff the solution exists
/// and is positive definite with lambda_min > 1e-10 * |lambda_max|.
/// Eigenvalue pairs with lambda_i lambda_j ~ 1 make the system singular and
/// the result Indeterminate.
inline LyapunovResult solve_discrete_lyapunov(const Eigen::MatrixXd& f, const Eigen::MatrixXd& q) {
    if (f.rows() != f.cols() || q.rows() != f.rows() || q.cols() != f.cols()) {
        throw DimensionError("solve_discrete_lyapunov: F and Q must be square of equal size");
    }
    if (!all_finite(f) || !all_finite(q)) {
        throw NumericalError("solve_discrete_lyapunov: non-finite entries");
    }
    LyapunovResult out;
    const Eigen::Index n = f.rows();
    if (n == 0) {
        out.status = LyapunovStatus::Stable;
        out.solved = true;
        out.P = Eigen::MatrixXd(0, 0);
        return out;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(f, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("solve_discrete_lyapunov: eigensolver did not converge");
    }
    const Eigen::VectorXcd lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(1.0 - lam[i] * lam[j]) < 1e-10) {
                return out;
            }
        }
    }

    // vec(F^T P F) = (F^T kron F^T) vec(P) for column-major vec.
    const Eigen::Index n2 = n * n;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n2, n2);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            k.block(i * n, j * n, n, n) = f(j, i) * f.transpose();
        }
    }
    k -= Eigen::MatrixXd::Identity(n2, n2);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
    if (!lu.isInvertible()) {
        return out;
    }
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(q.data(), n2);
    const Eigen::VectorXd vp = lu.solve(rhs);
    Eigen::MatrixXd p = Eigen::Map<const Eigen::MatrixXd>(vp.data(), n, n);
    p = 0.5 * (p + p.transpose());
    out.P = p;
    out.solved = true;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sa(p);
    out.min_eigenvalue = sa.eigenvalues().minCoeff();
    out.max_eigenvalue = sa.eigenvalues().maxCoeff();
    const double scale = std::max(std::abs(out.min_eigenvalue), std::abs(out.max_eigenvalue));
    out.status = out.min_eigenvalue > 1e-10 * scale && out.max_eigenvalue > 0.0 ? LyapunovStatus::Stable
                                                                               : LyapunovStatus::Unstable;
    return out;
}

// ---------------------------------------------------------------------------
// Subspace comparison

struct SubspaceComparison {
    bool equal = false;
    Eigen::Index dim1 = 0;
    Eigen::Index dim2 = 0;
    /// Principal angles in radians, ascending.
    std::vector<double> angles;

    double largest_angle() const { return angles.empty() ? 0.0 : angles.back(); }
};

/// Principal angles between span(basis1) and span(basis2). Small angles come
/// from sines of the residual, large ones from cosines, so both ends stay
/// accurate.
inline SubspaceComparison subspace_equal(const Eigen::MatrixXd& basis1, const Eigen::MatrixXd& basis2,
                                         double tol = 1e-8) {
    if (basis1.rows() != basis2.rows()) {
        throw DimensionError("subspace_equal: bases live in different ambient dimensions");
    }
    SubspaceComparison out;
    const Eigen::MatrixXd q1 = orthonormal_basis(basis1);
    const Eigen::MatrixXd q2 = orthonormal_basis(basis2);
    out.dim1 = q1.cols();
    out.dim2 = q2.cols();
    const Eigen::Index d = std::min(out.dim1, out.dim2);
    if (d > 0) {
        const Eigen::MatrixXd cross = q1.transpose() * q2;
        const Eigen::VectorXd cosines = cross.jacobiSvd().singularValues(); // descending
        Eigen::VectorXd sines = Eigen::VectorXd::Zero(d);
        if (out.dim1 == out.dim2) {
            const Eigen::MatrixXd residual = q2 - q1 * cross;
            const Eigen::VectorXd s = residual.jacobiSvd().singularValues(); // descending
            for (Eigen::Index i = 0; i < d && i < s.size(); ++i) {
                sines[d - 1 - i] = s[i];
            }
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            const double c = std::clamp(cosines[i], 0.0, 1.0);
            const double s = std::clamp(sines[i], 0.0, 1.0);
            const double theta = (out.dim1 == out.dim2 && s < std::numbers::sqrt2 / 2.0) ? std::asin(s) : std::acos(c);
            out.angles.push_back(theta);
        }
        std::sort(out.angles.begin(), out.angles.end());
    }
    out.equal = out.dim1 == out.dim2 && out.largest_angle() < tol;
    return out;
}

} // namespace lpvr
