#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpvr/error.hpp"
#include "lpvr/model.hpp"

namespace lpvr {

enum class StructureKind { General, Fir, InverseFir };

inline const char* to_string(StructureKind k) {
    switch (k) {
    case StructureKind::General:
        return "general";
    case StructureKind::Fir:
        return "fir";
    case StructureKind::InverseFir:
        return "inverse-fir";
    }
    return "general";
}

inline StructureKind structure_kind(std::size_t n_a, std::size_t n_b) {
    if (n_a == 0 && n_b <= 1) {
        throw DegenerateOrderError("degenerate orders: n_a = 0 and n_b = 1 leave no dynamics to realize");
    }
    if (n_a == 0) {
        return StructureKind::Fir;
    }
    if (n_b == 1) {
        return StructureKind::InverseFir;
    }
    return StructureKind::General;
}

/// Constant 0/1 shift blocks of the direct realization. Absent blocks are 0x0
/// (or 0 x m) matrices.
struct StructuralMatrices {
    Matrix F_a;
    Matrix G_a;
    Matrix F_b;
    Matrix G_b;
    Matrix F;
    Matrix G;
};

namespace detail {

inline Matrix shift_block(std::size_t width, std::size_t count) {
    const auto n = static_cast<Eigen::Index>(width * count);
    Matrix s = Matrix::Zero(n, n);
    const auto w = static_cast<Eigen::Index>(width);
    for (Eigen::Index i = 1; i < static_cast<Eigen::Index>(count); ++i) {
        s.block(i * w, (i - 1) * w, w, w).setIdentity();
    }
    return s;
}

inline Matrix lead_block(std::size_t width, std::size_t count) {
    const auto w = static_cast<Eigen::Index>(width);
    Matrix g = Matrix::Zero(w * static_cast<Eigen::Index>(count), w);
    if (count > 0) {
        g.topRows(w).setIdentity();
    }
    return g;
}

} // namespace detail

inline StructuralMatrices structural_matrices(std::size_t n_y, std::size_t n_u, std::size_t n_a, std::size_t n_b) {
    if (n_y == 0 || n_u == 0 || n_b == 0) {
        throw DimensionError("structural_matrices: n_y, n_u and n_b must be positive");
    }
    StructuralMatrices s;
    s.F_a = detail::shift_block(n_y, n_a);
    s.G_a = detail::lead_block(n_y, n_a);
    s.F_b = detail::shift_block(n_u, n_b - 1);
    s.G_b = detail::lead_block(n_u, n_b - 1);
    const Eigen::Index na_dim = s.F_a.rows();
    const Eigen::Index nb_dim = s.F_b.rows();
    s.F = Matrix::Zero(na_dim + nb_dim, na_dim + nb_dim);
    s.F.topLeftCorner(na_dim, na_dim) = s.F_a;
    s.F.bottomRightCorner(nb_dim, nb_dim) = s.F_b;
    s.G = Matrix::Zero(na_dim + nb_dim, static_cast<Eigen::Index>(n_y));
    s.G.topRows(na_dim) = s.G_a;
    return s;
}

/// Realization matrices evaluated at one scheduling point.
struct SystemMatricesAtPoint {
    Matrix F;
    Matrix G;
    Matrix H;
    Matrix J;
    Vector p;
};

/// Direct realization with state [y_{k-1}; ...; y_{k-na}; u_{k-1}; ...; u_{k-nb+1}].
/// Holds its own copy of the model, so it is safe to outlive the argument.
class DirectRealization {
public:
    explicit DirectRealization(LpvIoModel model)
        : model_(std::move(model)), kind_(structure_kind(model_.n_a(), model_.n_b())),
          structural_(structural_matrices(model_.n_y(), model_.n_u(), model_.n_a(), model_.n_b())) {}

    const LpvIoModel& model() const noexcept { return model_; }
    StructureKind kind() const noexcept { return kind_; }
    const StructuralMatrices& structural() const noexcept { return structural_; }

    std::size_t n_x() const noexcept { return model_.n_y() * model_.n_a() + model_.n_u() * (model_.n_b() - 1); }
    std::size_t n_y() const noexcept { return model_.n_y(); }
    std::size_t n_u() const noexcept { return model_.n_u(); }

    /// Number of steps after which the shift blocks vanish.
    std::size_t shift_depth() const noexcept { return std::max(model_.n_a(), model_.n_b() - 1); }

    /// H(p) = [-A_1 ... -A_na | B_1 ... B_{nb-1}].
    Matrix H(const Vector& p) const {
        const auto ny = static_cast<Eigen::Index>(model_.n_y());
        const auto nu = static_cast<Eigen::Index>(model_.n_u());
        Matrix h(ny, static_cast<Eigen::Index>(n_x()));
        Eigen::Index col = 0;
        for (std::size_t i = 1; i <= model_.n_a(); ++i) {
            h.middleCols(col, ny) = -eval_coefficient(model_, CoefficientKind::A, i, p);
            col += ny;
        }
        for (std::size_t i = 1; i < model_.n_b(); ++i) {
            h.middleCols(col, nu) = eval_coefficient(model_, CoefficientKind::B, i, p);
            col += nu;
        }
        return h;
    }

    Matrix J(const Vector& p) const { return eval_coefficient(model_, CoefficientKind::B, 0, p); }

private:
    LpvIoModel model_;
    StructureKind kind_;
    StructuralMatrices structural_;
};

inline DirectRealization build_direct(const LpvIoModel& model) { return DirectRealization(model); }

/// F = F_struct + G_struct H, G = [G_a B_0; G_b].
inline SystemMatricesAtPoint eval_realization(const DirectRealization& r, const Vector& p) {
    const auto& s = r.structural();
    SystemMatricesAtPoint m;
    m.p = p;
    m.H = r.H(p);
    m.J = r.J(p);
    m.F = s.F + s.G * m.H;
    m.G = Matrix::Zero(static_cast<Eigen::Index>(r.n_x()), static_cast<Eigen::Index>(r.n_u()));
    const Eigen::Index na_dim = s.G_a.rows();
    m.G.topRows(na_dim) = s.G_a * m.J;
    m.G.bottomRows(s.G_b.rows()) = s.G_b;
    return m;
}

} // namespace lpvr
