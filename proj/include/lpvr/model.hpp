#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lpvr/error.hpp"
#include "lpvr/laurent.hpp"

namespace lpvr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when a scheduling point lies outside the model domain.
class OutOfDomainError : public Error {
public:
    using Error::Error;
};

/// Closed interval; either bound may be infinite.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double v) const { return v >= lo && v <= hi; }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

    friend bool operator==(const Interval&, const Interval&) = default;
};

using Domain = std::vector<Interval>;

inline bool domain_contains(const Domain& d, const Vector& p) {
    if (static_cast<std::size_t>(p.size()) != d.size()) {
        return false;
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!d[i].contains(p[static_cast<Eigen::Index>(i)])) {
            return false;
        }
    }
    return true;
}

/// Row-major matrix of Laurent-rational entries.
class CoefficientMatrix {
public:
    CoefficientMatrix() = default;

    CoefficientMatrix(std::size_t rows, std::size_t cols, std::vector<LaurentRational> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows_ * cols_ != entries_.size()) {
            throw DimensionError("coefficient matrix " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                 " has " + std::to_string(entries_.size()) + " entries");
        }
    }

    static CoefficientMatrix constant(const Matrix& m, std::size_t n_p) {
        std::vector<LaurentRational> e;
        e.reserve(static_cast<std::size_t>(m.size()));
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                e.push_back(LaurentRational::constant(m(r, c), n_p));
            }
        }
        return {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), std::move(e)};
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<LaurentRational>& entries() const noexcept { return entries_; }
    const LaurentRational& at(std::size_t r, std::size_t c) const { return entries_.at(r * cols_ + c); }

    Matrix operator()(const Vector& p) const {
        Matrix m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entries_[r * cols_ + c](p);
            }
        }
        return m;
    }

    bool is_scheduling_independent() const {
        for (const auto& e : entries_) {
            if (!e.is_scheduling_independent()) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const CoefficientMatrix&, const CoefficientMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<LaurentRational> entries_;
};

/// Discrete-time LPV input-output model
///
///     y_k = -sum_{i=1}^{n_a} A_i(p_k) y_{k-i} + sum_{i=0}^{n_b-1} B_i(p_k) u_{k-i}.
///
/// The constructor checks shapes only. Semantic checks (degenerate orders,
/// vanishing denominators, finite evaluation) live in `validate`, and
/// `parse_model` rejects any model with an error-level diagnostic.
class LpvIoModel {
public:
    LpvIoModel() = default;

    LpvIoModel(std::size_t n_y, std::size_t n_u, std::size_t n_p, std::vector<CoefficientMatrix> a,
               std::vector<CoefficientMatrix> b, Domain domain)
        : n_y_(n_y), n_u_(n_u), n_p_(n_p), a_(std::move(a)), b_(std::move(b)), domain_(std::move(domain)) {
        if (n_y_ == 0 || n_u_ == 0 || n_p_ == 0) {
            throw DimensionError("n_y, n_u and n_p must be positive");
        }
        if (b_.empty()) {
            throw DimensionError("n_b must be at least 1 (B_0 is required)");
        }
        if (domain_.size() != n_p_) {
            throw DimensionError("domain has " + std::to_string(domain_.size()) + " intervals, expected n_p = " +
                                 std::to_string(n_p_));
        }
        for (std::size_t i = 0; i < a_.size(); ++i) {
            check_shape(a_[i], n_y_, n_y_, "A" + std::to_string(i + 1));
        }
        for (std::size_t i = 0; i < b_.size(); ++i) {
            check_shape(b_[i], n_y_, n_u_, "B" + std::to_string(i));
        }
        for (const auto& iv : domain_) {
            if (!(iv.lo <= iv.hi)) {
                throw DimensionError("domain interval has lo > hi");
            }
        }
    }

    std::size_t n_y() const noexcept { return n_y_; }
    std::size_t n_u() const noexcept { return n_u_; }
    std::size_t n_p() const noexcept { return n_p_; }
    std::size_t n_a() const noexcept { return a_.size(); }
    std::size_t n_b() const noexcept { return b_.size(); }
    const Domain& domain() const noexcept { return domain_; }

    /// A_i for i = 1..n_a.
    const CoefficientMatrix& A(std::size_t i) const {
        if (i < 1 || i > a_.size()) {
            throw std::out_of_range("A index " + std::to_string(i) + " outside 1.." + std::to_string(a_.size()));
        }
        return a_[i - 1];
    }

    /// B_i for i = 0..n_b-1.
    const CoefficientMatrix& B(std::size_t i) const {
        if (i >= b_.size()) {
            throw std::out_of_range("B index " + std::to_string(i) + " outside 0.." + std::to_string(b_.size() - 1));
        }
        return b_[i];
    }

    const std::vector<CoefficientMatrix>& A_list() const noexcept { return a_; }
    const std::vector<CoefficientMatrix>& B_list() const noexcept { return b_; }

    /// True when every coefficient is scheduling independent (an LTI model).
    bool is_time_invariant() const {
        for (const auto& m : a_) {
            if (!m.is_scheduling_independent()) {
                return false;
            }
        }
        for (const auto& m : b_) {
            if (!m.is_scheduling_independent()) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const LpvIoModel&, const LpvIoModel&) = default;

private:
    static void check_shape(const CoefficientMatrix& m, std::size_t r, std::size_t c, const std::string& name) {
        if (m.rows() != r || m.cols() != c) {
            throw DimensionError(name + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                 ", expected " + std::to_string(r) + "x" + std::to_string(c));
        }
    }

    std::size_t n_y_ = 1;
    std::size_t n_u_ = 1;
    std::size_t n_p_ = 1;
    std::vector<CoefficientMatrix> a_;
    std::vector<CoefficientMatrix> b_;
    Domain domain_;
};

enum class CoefficientKind { A, B };

/// Evaluates A_index(p) (index 1..n_a) or B_index(p) (index 0..n_b-1).
inline Matrix eval_coefficient(const LpvIoModel& model, CoefficientKind which, std::size_t index, const Vector& p) {
    if (static_cast<std::size_t>(p.size()) != model.n_p()) {
        throw DimensionError("scheduling point has dimension " + std::to_string(p.size()) + ", expected " +
                             std::to_string(model.n_p()));
    }
    if (!domain_contains(model.domain(), p)) {
        throw OutOfDomainError("scheduling point " + LaurentRational::format_point(p) + " lies outside the domain");
    }
    return which == CoefficientKind::A ? model.A(index)(p) : model.B(index)(p);
}

/// Finite sequence of scheduling points p_0, ..., p_{k-1}.
struct SchedulingTrajectory {
    std::vector<Vector> points;

    std::size_t size() const noexcept { return points.size(); }
    const Vector& operator[](std::size_t i) const { return points[i]; }

    static SchedulingTrajectory constant(const Vector& p, std::size_t length) {
        return SchedulingTrajectory{std::vector<Vector>(length, p)};
    }

    static SchedulingTrajectory scalar(const std::vector<double>& values) {
        SchedulingTrajectory t;
        for (double v : values) {
            t.points.push_back(Vector::Constant(1, v));
        }
        return t;
    }
};

/// Throws unless the trajectory is nonempty with points of the right
/// dimension inside the model domain.
inline void check_trajectory(const LpvIoModel& model, const SchedulingTrajectory& traj) {
    if (traj.points.empty()) {
        throw DimensionError("scheduling trajectory is empty");
    }
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (static_cast<std::size_t>(traj[k].size()) != model.n_p()) {
            throw DimensionError("scheduling point " + std::to_string(k) + " has dimension " +
                                 std::to_string(traj[k].size()) + ", expected " + std::to_string(model.n_p()));
        }
        if (!domain_contains(model.domain(), traj[k])) {
            throw OutOfDomainError("scheduling point " + std::to_string(k) + " lies outside the domain");
        }
    }
}

// ---------------------------------------------------------------------------
// Validation

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
};

namespace detail {

// Maps t in (0,1) to the interior of an interval, bounded or not.
inline double interior_point(const Interval& iv, double t) {
    if (iv.bounded()) {
        return iv.lo + t * (iv.hi - iv.lo);
    }
    if (std::isfinite(iv.lo)) {
        return iv.lo + t / (1.0 - t);
    }
    if (std::isfinite(iv.hi)) {
        return iv.hi - (1.0 - t) / t;
    }
    return std::log(t / (1.0 - t)) * 4.0;
}

/// 16 interior sample points of the domain box (tensor grid for n_p <= 2,
/// rank-1 lattice beyond).
inline std::vector<Vector> sample_grid(const Domain& d) {
    constexpr int total = 16;
    std::vector<Vector> pts;
    const auto n = static_cast<Eigen::Index>(d.size());
    if (n == 1 || n == 2) {
        const int per = n == 1 ? total : 4;
        const int count = n == 1 ? per : per * per;
        for (int i = 0; i < count; ++i) {
            Vector p(n);
            int idx = i;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double t = (static_cast<double>(idx % per) + 0.5) / per;
                idx /= per;
                p[j] = interior_point(d[static_cast<std::size_t>(j)], t);
            }
            pts.push_back(p);
        }
        return pts;
    }
    for (int i = 0; i < total; ++i) {
        Vector p(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double alpha = std::sqrt(2.0 + static_cast<double>(j)) - std::floor(std::sqrt(2.0 + static_cast<double>(j)));
            double t = (static_cast<double>(i) + 0.5) * alpha;
            t -= std::floor(t);
            t = std::clamp(t, 1.0 / 64.0, 63.0 / 64.0);
            p[j] = interior_point(d[static_cast<std::size_t>(j)], t);
        }
        pts.push_back(p);
    }
    return pts;
}

} // namespace detail

/// Denominator guard: |den| < guard * max(1, |num|) is reported as near-singular.
inline constexpr double kDenominatorGuard = 1e-12;

/// Collects every invariant violation. An empty result means the model is
/// valid and finite on a 16-point interior grid sample.
inline std::vector<Diagnostic> validate(const LpvIoModel& model) {
    std::vector<Diagnostic> out;
    if (model.n_a() == 0 && model.n_b() == 1) {
        out.push_back({Severity::Error, "degenerate orders", "n_a = 0 and n_b = 1 leave no dynamics to realize"});
    }

    struct Named {
        std::string name;
        const CoefficientMatrix* m;
    };
    std::vector<Named> all;
    for (std::size_t i = 1; i <= model.n_a(); ++i) {
        all.push_back({"A" + std::to_string(i), &model.A(i)});
    }
    for (std::size_t i = 0; i < model.n_b(); ++i) {
        all.push_back({"B" + std::to_string(i), &model.B(i)});
    }

    const auto grid = detail::sample_grid(model.domain());
    for (const auto& [name, m] : all) {
        for (std::size_t r = 0; r < m->rows(); ++r) {
            for (std::size_t c = 0; c < m->cols(); ++c) {
                const auto& e = m->at(r, c);
                const std::string where = name + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
                for (const auto& t : e.numerator()) {
                    if (t.exponents.size() != model.n_p()) {
                        out.push_back({Severity::Error, "malformed term", where + ": exponent vector length mismatch"});
                    }
                }
                for (const auto& t : e.denominator()) {
                    if (t.exponents.size() != model.n_p()) {
                        out.push_back({Severity::Error, "malformed term", where + ": exponent vector length mismatch"});
                    }
                }
                if (e.denominator().empty() || e.denominator_identically_zero()) {
                    out.push_back({Severity::Error, "denominator identically zero", where});
                    continue;
                }

                // Negative exponents are poles wherever that component can be 0.
                bool pole_in_domain = false;
                for (const auto* list : {&e.numerator(), &e.denominator()}) {
                    for (const auto& t : *list) {
                        for (std::size_t j = 0; j < t.exponents.size() && j < model.n_p(); ++j) {
                            if (t.exponents[j] < 0 && t.coef != 0.0 && model.domain()[j].contains(0.0)) {
                                pole_in_domain = true;
                            }
                        }
                    }
                }

                bool nonfinite = false;
                bool near_zero = false;
                bool sign_change = false;
                int first_sign = 0;
                for (const auto& p : grid) {
                    double num = 0.0;
                    double den = 0.0;
                    if (!e.evaluate_parts(p, num, den)) {
                        pole_in_domain = true;
                        continue;
                    }
                    if (den == 0.0) {
                        pole_in_domain = true;
                        continue;
                    }
                    const int s = den > 0 ? 1 : -1;
                    if (first_sign == 0) {
                        first_sign = s;
                    } else if (s != first_sign) {
                        sign_change = true;
                    }
                    if (std::abs(den) < kDenominatorGuard * std::max(1.0, std::abs(num))) {
                        near_zero = true;
                    }
                    if (!std::isfinite(num / den)) {
                        nonfinite = true;
                    }
                }
                if (pole_in_domain || sign_change) {
                    out.push_back({Severity::Warning, "denominator vanishes in domain", where});
                }
                if (near_zero) {
                    out.push_back({Severity::Warning, "near-singular denominator", where});
                }
                if (nonfinite) {
                    out.push_back({Severity::Error, "non-finite evaluation", where + " is not finite on the sample grid"});
                }
            }
        }
    }
    return out;
}

} // namespace lpvr
