#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lpvr/error.hpp"

namespace lpvr {

/// One monomial `coef * p_1^e_1 * ... * p_np^e_np`; exponents may be negative.
struct LaurentTerm {
    double coef = 0.0;
    std::vector<int> exponents;

    friend bool operator==(const LaurentTerm&, const LaurentTerm&) = default;
};

namespace detail {

// Integer power by repeated multiplication so evaluation is bit-reproducible.
// Returns false for a pole (zero base, negative exponent).
inline bool int_power(double base, int exponent, double& out) {
    if (exponent < 0 && base == 0.0) {
        return false;
    }
    double acc = 1.0;
    const int n = exponent < 0 ? -exponent : exponent;
    for (int i = 0; i < n; ++i) {
        acc *= base;
    }
    out = exponent < 0 ? 1.0 / acc : acc;
    return true;
}

inline bool eval_terms(const std::vector<LaurentTerm>& terms, const Eigen::VectorXd& p, double& out) {
    double sum = 0.0;
    for (const auto& t : terms) {
        double v = t.coef;
        for (std::size_t j = 0; j < t.exponents.size(); ++j) {
            double f = 1.0;
            if (!int_power(p[static_cast<Eigen::Index>(j)], t.exponents[j], f)) {
                return false;
            }
            v *= f;
        }
        sum += v;
    }
    out = sum;
    return true;
}

} // namespace detail

/// Sum of Laurent monomials over a polynomial (Laurent) denominator.
///
/// The denominator defaults to the constant 1. Evaluation never returns a
/// silent NaN: a vanishing denominator or a monomial pole throws
/// DenominatorZeroError.
class LaurentRational {
public:
    LaurentRational() = default;

    LaurentRational(std::vector<LaurentTerm> numerator, std::vector<LaurentTerm> denominator)
        : num_(std::move(numerator)), den_(std::move(denominator)) {}

    static LaurentRational constant(double value, std::size_t n_p) {
        return LaurentRational({LaurentTerm{value, std::vector<int>(n_p, 0)}},
                               {LaurentTerm{1.0, std::vector<int>(n_p, 0)}});
    }

    /// Single monomial `coef * p_var^exponent` (other exponents zero).
    static LaurentRational monomial(double coef, std::size_t n_p, std::size_t var, int exponent) {
        std::vector<int> e(n_p, 0);
        e.at(var) = exponent;
        return LaurentRational({LaurentTerm{coef, std::move(e)}}, {LaurentTerm{1.0, std::vector<int>(n_p, 0)}});
    }

    const std::vector<LaurentTerm>& numerator() const noexcept { return num_; }
    const std::vector<LaurentTerm>& denominator() const noexcept { return den_; }

    /// True when the denominator is the constant 1 and the numerator a single
    /// scheduling-independent term.
    bool is_plain_constant() const {
        return num_.size() == 1 && den_.size() == 1 && den_[0].coef == 1.0 && all_zero(num_[0].exponents) &&
               all_zero(den_[0].exponents);
    }

    /// True when no term in numerator or denominator depends on p.
    bool is_scheduling_independent() const {
        for (const auto* list : {&num_, &den_}) {
            for (const auto& t : *list) {
                if (t.coef != 0.0 && !all_zero(t.exponents)) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Like terms are merged before deciding, so `p - p` counts as zero.
    bool denominator_identically_zero() const { return merged_all_zero(den_); }

    /// Numerator and denominator values; false if a monomial has a pole at p.
    bool evaluate_parts(const Eigen::VectorXd& p, double& num, double& den) const {
        return detail::eval_terms(num_, p, num) && detail::eval_terms(den_, p, den);
    }

    double operator()(const Eigen::VectorXd& p) const {
        double n = 0.0;
        double d = 0.0;
        if (!evaluate_parts(p, n, d)) {
            throw DenominatorZeroError("coefficient has a pole (zero base with negative exponent) at p = " +
                                       format_point(p));
        }
        if (d == 0.0) {
            throw DenominatorZeroError("coefficient denominator vanishes at p = " + format_point(p));
        }
        return n / d;
    }

    std::size_t arity() const {
        if (!num_.empty()) {
            return num_.front().exponents.size();
        }
        return den_.empty() ? 0 : den_.front().exponents.size();
    }

    static std::string format_point(const Eigen::VectorXd& p) {
        std::string s = "[";
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (i > 0) {
                s += ", ";
            }
            s += std::to_string(p[i]);
        }
        return s + "]";
    }

    friend bool operator==(const LaurentRational&, const LaurentRational&) = default;

private:
    static bool all_zero(const std::vector<int>& e) {
        for (int v : e) {
            if (v != 0) {
                return false;
            }
        }
        return true;
    }

    static bool merged_all_zero(const std::vector<LaurentTerm>& terms) {
        std::map<std::vector<int>, double> merged;
        for (const auto& t : terms) {
            merged[t.exponents] += t.coef;
        }
        for (const auto& [e, c] : merged) {
            if (c != 0.0) {
                return false;
            }
        }
        return true;
    }

    std::vector<LaurentTerm> num_;
    std::vector<LaurentTerm> den_;
};

} // namespace lpvr
