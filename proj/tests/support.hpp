#pragma once

// Shared fixtures for the test binaries: model builders and random generators.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lpvr/analysis.hpp"
#include "lpvr/model.hpp"
#include "lpvr/realization.hpp"

namespace lpvr::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline CoefficientMatrix const_coeff(const Matrix& m, std::size_t n_p = 1) { return CoefficientMatrix::constant(m, n_p); }

inline CoefficientMatrix scalar_coeff(LaurentRational r) { return CoefficientMatrix(1, 1, {std::move(r)}); }

/// Sum of monomials c * p^e for a single scheduling variable.
inline LaurentRational poly1(std::vector<std::pair<double, int>> terms) {
    std::vector<LaurentTerm> num;
    for (auto [c, e] : terms) {
        num.push_back({c, {e}});
    }
    return LaurentRational(std::move(num), {LaurentTerm{1.0, {0}}});
}

/// LTI model from constant coefficient matrices.
inline LpvIoModel lti_model(const std::vector<Matrix>& a, const std::vector<Matrix>& b,
                            Domain domain = {Interval{-kInf, kInf}}) {
    std::vector<CoefficientMatrix> ca;
    std::vector<CoefficientMatrix> cb;
    for (const auto& m : a) {
        ca.push_back(const_coeff(m, domain.size()));
    }
    for (const auto& m : b) {
        cb.push_back(const_coeff(m, domain.size()));
    }
    const std::size_t n_p = domain.size();
    return LpvIoModel(static_cast<std::size_t>(b.front().rows()), static_cast<std::size_t>(b.front().cols()), n_p,
                      std::move(ca), std::move(cb), std::move(domain));
}

/// a1 = 2p, a2 = p^2, b0 = p, b1 = p^-1 on [1, inf).
inline LpvIoModel example1_model() {
    std::vector<CoefficientMatrix> a{scalar_coeff(poly1({{2.0, 1}})), scalar_coeff(poly1({{1.0, 2}}))};
    std::vector<CoefficientMatrix> b{scalar_coeff(poly1({{1.0, 1}})), scalar_coeff(poly1({{1.0, -1}}))};
    return LpvIoModel(1, 1, 1, std::move(a), std::move(b), {Interval{1.0, kInf}});
}

/// a1 = p, b0 = 1, b1 = p on [-5, 5].
inline LpvIoModel example3_model() {
    std::vector<CoefficientMatrix> a{scalar_coeff(poly1({{1.0, 1}}))};
    std::vector<CoefficientMatrix> b{scalar_coeff(poly1({{1.0, 0}})), scalar_coeff(poly1({{1.0, 1}}))};
    return LpvIoModel(1, 1, 1, std::move(a), std::move(b), {Interval{-5.0, 5.0}});
}

struct RandomModelSpec {
    std::size_t n_y = 1;
    std::size_t n_u = 1;
    std::size_t n_p = 1;
    std::size_t n_a = 1;
    std::size_t n_b = 2;
    bool rational = true;
};

/// Random Laurent-rational model on the box [0.5, 2]^n_p. Entries are
/// c0 + c1 p_j + c2 / p_j, optionally over 1 + 0.3 p_j, and the A entries are
/// scaled so the sum of |A_i| stays below 1 (outputs stay bounded over long
/// horizons).
inline LpvIoModel random_model(std::mt19937_64& rng, const RandomModelSpec& s) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<std::size_t> var(0, s.n_p - 1);
    auto entry = [&](double scale) {
        const std::size_t j = var(rng);
        std::vector<int> e0(s.n_p, 0);
        std::vector<int> e1(s.n_p, 0);
        std::vector<int> em(s.n_p, 0);
        e1[j] = 1;
        em[j] = -1;
        std::vector<LaurentTerm> num{{scale * unit(rng), e0}, {0.5 * scale * unit(rng), e1}, {0.5 * scale * unit(rng), em}};
        std::vector<LaurentTerm> den{{1.0, e0}};
        if (s.rational && unit(rng) > 0.0) {
            den.push_back({0.3, e1});
        }
        return LaurentRational(std::move(num), std::move(den));
    };
    auto matrix = [&](std::size_t r, std::size_t c, double scale) {
        std::vector<LaurentRational> entries;
        for (std::size_t i = 0; i < r * c; ++i) {
            entries.push_back(entry(scale));
        }
        return CoefficientMatrix(r, c, std::move(entries));
    };
    const double a_scale = s.n_a == 0 ? 0.0 : 0.3 / static_cast<double>(s.n_a * s.n_y);
    std::vector<CoefficientMatrix> a;
    std::vector<CoefficientMatrix> b;
    for (std::size_t i = 0; i < s.n_a; ++i) {
        a.push_back(matrix(s.n_y, s.n_y, a_scale));
    }
    for (std::size_t i = 0; i < s.n_b; ++i) {
        b.push_back(matrix(s.n_y, s.n_u, 1.0));
    }
    return LpvIoModel(s.n_y, s.n_u, s.n_p, std::move(a), std::move(b), Domain(s.n_p, Interval{0.5, 2.0}));
}

/// Random dimensions (each <= max_dim) and orders (each <= max_order),
/// excluding the degenerate n_a = 0, n_b = 1 pair.
inline RandomModelSpec random_spec(std::mt19937_64& rng, std::size_t max_dim, std::size_t max_order) {
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    std::uniform_int_distribution<std::size_t> order(0, max_order);
    std::uniform_int_distribution<std::size_t> border(1, max_order);
    RandomModelSpec s;
    s.n_y = dim(rng);
    s.n_u = dim(rng);
    s.n_p = dim(rng);
    do {
        s.n_a = order(rng);
        s.n_b = border(rng);
    } while (s.n_a == 0 && s.n_b == 1);
    return s;
}

inline Vector random_point(std::mt19937_64& rng, const Domain& box) {
    Vector p(static_cast<Eigen::Index>(box.size()));
    for (std::size_t j = 0; j < box.size(); ++j) {
        std::uniform_real_distribution<double> d(box[j].lo, box[j].hi);
        p[static_cast<Eigen::Index>(j)] = d(rng);
    }
    return p;
}

inline SchedulingTrajectory random_trajectory(std::mt19937_64& rng, const Domain& box, std::size_t length) {
    SchedulingTrajectory t;
    for (std::size_t k = 0; k < length; ++k) {
        t.points.push_back(random_point(rng, box));
    }
    return t;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
        for (Eigen::Index i = 0; i < r; ++i) {
            m(i, j) = d(rng);
        }
    }
    return m;
}

/// Frozen SISO LTI instance with dyadic coefficients, optionally with a
/// planted common root.
inline LpvIoModel dyadic_siso(std::mt19937_64& rng, bool plant) {
    std::uniform_int_distribution<int> eighth(-8, 8);
    std::uniform_int_distribution<std::size_t> order(1, 4);
    std::uniform_int_distribution<int> pick(0, 7);
    const double planted[] = {0.5, -0.5, 0.25, -0.25, 0.75, -0.75, 1.5, -1.5};
    std::size_t na = order(rng);
    std::size_t nb = 1 + order(rng);
    std::vector<double> a{1.0};
    std::vector<double> b;
    if (plant) {
        // (1 - r s^-1) times random factors of one lower degree.
        std::vector<double> at{1.0};
        for (std::size_t i = 1; i < na; ++i) {
            at.push_back(eighth(rng) / 8.0);
        }
        std::vector<double> bt;
        for (std::size_t i = 0; i + 1 < nb; ++i) {
            bt.push_back(eighth(rng) / 8.0);
        }
        if (std::all_of(bt.begin(), bt.end(), [](double x) { return x == 0.0; })) {
            bt[0] = 1.0;
        }
        const double r = planted[pick(rng)];
        auto times = [r](const std::vector<double>& c) {
            std::vector<double> out(c.size() + 1, 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) {
                out[i] += c[i];
                out[i + 1] -= r * c[i];
            }
            return out;
        };
        a = times(at);
        b = times(bt);
    } else {
        for (std::size_t i = 1; i <= na; ++i) {
            a.push_back(eighth(rng) / 8.0);
        }
        for (std::size_t i = 0; i < nb; ++i) {
            b.push_back(eighth(rng) / 8.0);
        }
    }
    std::vector<Matrix> am;
    std::vector<Matrix> bm;
    for (std::size_t i = 1; i < a.size(); ++i) {
        am.push_back(Matrix::Constant(1, 1, a[i]));
    }
    for (double x : b) {
        bm.push_back(Matrix::Constant(1, 1, x));
    }
    return lti_model(am, bm);
}

/// PBH test at every eigenvalue of F and at 0.
inline bool pbh_reachable(const DirectRealization& r, const Vector& p) {
    const auto e = eval_realization(r, p);
    const Eigen::VectorXcd ev = e.F.eigenvalues();
    std::vector<Complex> sigmas(ev.data(), ev.data() + ev.size());
    sigmas.push_back(0.0);
    // Defective eigenvalues scatter; test at cluster centers.
    for (const auto& cl : cluster_roots(sigmas, 1e-4)) {
        const Complex s = std::abs(cl.center) < 1e-4 ? Complex(0.0) : cl.center;
        if (numerical_rank(pbh_matrix(r, p, s)).rank < static_cast<Eigen::Index>(r.n_x())) {
            return false;
        }
    }
    return true;
}

} // namespace lpvr::testing
