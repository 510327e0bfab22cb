#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsym/rational.hpp"

namespace qsym {

/// Raised when a p-adic result would have no known digits left.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::int64_t p_valuation(const BigInt& a, long p);
/// v_p(a); throws ArithmeticError for a = 0.
std::int64_t p_valuation(const BigRational& a, long p);
BigInt power_of(long p, std::int64_t e);
bool is_prime(long n);

/// Element of Q_p known to finite precision: p^valuation * unit with unit a
/// p-adic unit known modulo p^relative_precision.
///
/// Zero carries the absolute precision it is known to (O(p^A)); an exact
/// zero has absolute precision kExact. Precision is propagated, never
/// invented: sums are known to the smaller absolute precision, products and
/// quotients to the smaller relative precision.
class PadicNumber {
public:
    static constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max() / 4;

    static PadicNumber zero(long p, std::int64_t absolute_precision = kExact);
    /// Exact rational embedded with `relative_precision` unit digits.
    static PadicNumber from_rational(const BigRational& a, long p, std::int64_t relative_precision);
    /// Integer known only modulo p^absolute_precision.
    static PadicNumber from_residue(const BigInt& residue, long p, std::int64_t absolute_precision);

    long prime() const { return p_; }
    bool is_zero() const { return zero_; }
    bool is_exact_zero() const { return zero_ && valuation_ == kExact; }
    /// For zero: the absolute precision, a lower bound on the true valuation.
    std::int64_t valuation() const { return valuation_; }
    std::int64_t relative_precision() const { return zero_ ? 0 : relprec_; }
    std::int64_t absolute_precision() const { return zero_ ? valuation_ : valuation_ + relprec_; }
    const BigInt& unit() const { return unit_; }

    /// Drops digits at or beyond p^absolute_precision.
    PadicNumber with_absolute_cap(std::int64_t absolute_precision) const;

    /// The rational p^valuation * unit (zero for zero).
    BigRational representative() const;

    /// "O(p^A)" for zero, otherwise "p^v * u + O(p^A)".
    std::string to_string() const;

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }
    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
    /// Throws ArithmeticError for an exact zero divisor and PrecisionError
    /// for a divisor that is zero only to its known precision.
    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
    PadicNumber operator-() const;

    /// a - b is zero to the known precision.
    friend bool agrees(const PadicNumber& a, const PadicNumber& b) { return (a - b).is_zero(); }

private:
    PadicNumber(long p, bool zero, std::int64_t valuation, BigInt unit, std::int64_t relprec)
        : p_(p), zero_(zero), valuation_(valuation), unit_(std::move(unit)), relprec_(relprec) {}

    long p_;
    bool zero_;
    std::int64_t valuation_;
    BigInt unit_;
    std::int64_t relprec_;
};

/// Odd prime p, working precision K (relative digits of embedded values),
/// and q = 1 + p * q_offset with q_offset != 0, so v_p(q - 1) >= 1.
class PadicContext {
public:
    PadicContext(long p, std::int64_t precision, BigInt q_offset);

    long p() const { return p_; }
    std::int64_t precision() const { return precision_; }
    const BigInt& q_offset() const { return q_offset_; }
    const BigInt& q() const { return q_; }
    BigRational q_rational() const { return BigRational(q_); }
    /// v_p(q - 1).
    std::int64_t q_shift_valuation() const { return p_valuation(q_ - BigInt(1), p_); }

    PadicNumber embed(const BigRational& a) const { return PadicNumber::from_rational(a, p_, precision_); }

private:
    long p_;
    std::int64_t precision_;
    BigInt q_offset_;
    BigInt q_;
};

/// Precision budget for p-adic q-integral checks: dividing by [p^N]_q costs
/// N digits and (1 - q)^{-n} costs n v_p(1 - q).
std::int64_t working_precision(std::int64_t target, std::int64_t n_max, unsigned degree, std::int64_t shift_valuation);

/// f(x) = sum_k c_k q^{kx}, finite support, zero coefficients dropped.
class QExpPoly {
public:
    QExpPoly() = default;
    explicit QExpPoly(std::map<std::uint64_t, BigRational> coefficients);

    static QExpPoly constant(const BigRational& c);
    /// x -> q^{kx}.
    static QExpPoly exponential(std::uint64_t k);

    const std::map<std::uint64_t, BigRational>& coefficients() const { return coeffs_; }
    BigRational coefficient(std::uint64_t k) const;

    /// f_1(x) = f(x + 1): c_k -> c_k q^k.
    QExpPoly shift(const BigRational& q) const;
    BigRational evaluate(std::int64_t x, const BigRational& q) const;
    /// f(0) = sum_k c_k.
    BigRational at_zero() const;
    /// sum_k k c_k, so that f'(0) = derivative_weight() * log q.
    BigRational derivative_weight() const;

    friend bool operator==(const QExpPoly&, const QExpPoly&) = default;

private:
    std::map<std::uint64_t, BigRational> coeffs_;
};

/// [x]_q^n = (1 - q)^{-n} sum_j C(n,j) (-1)^j q^{jx}.
QExpPoly q_monomial(unsigned n, const BigRational& q);
inline QExpPoly q_monomial(unsigned n, const PadicContext& ctx) { return q_monomial(n, ctx.q_rational()); }

/// S_N(f) = (1/[p^N]_q) sum_{x<p^N} f(x) q^x by per-monomial geometric
/// closed forms, in truncated p-adic arithmetic.
PadicNumber q_integral_partial(const QExpPoly& f, unsigned N, const PadicContext& ctx);

/// S_N(f) as an exact rational by literal summation over x < p^N.
/// Throws std::length_error when p^N exceeds `max_terms`.
BigRational q_integral_partial_literal(const QExpPoly& f, unsigned N, long p, const BigRational& q,
                                       std::uint64_t max_terms = 100000);

/// log q = sum_{m>=1} (-1)^{m+1} (q-1)^m / m, known to absolute precision
/// `absolute_precision`. Requires v_p(q - 1) >= 1; q = 1 gives exact zero.
PadicNumber padic_log(const BigInt& q, long p, std::int64_t absolute_precision);
/// log q for the context's q, to relative precision K.
PadicNumber padic_log_q(const PadicContext& ctx);

/// Valuation of a difference; `to_precision` means the difference is zero
/// to the known digits and `valuation` is only a lower bound.
struct Agreement {
    std::int64_t valuation = 0;
    bool to_precision = false;
};

Agreement agreement(const PadicNumber& a, const PadicNumber& b);

struct FunctionalEquationRow {
    unsigned N = 0;
    PadicNumber lhs;          // q S_N(f_1) - S_N(f)
    PadicNumber rhs_log;      // (q-1) f(0) + ((q-1)/log q) f'(0)
    PadicNumber rhs_log_free; // (q-1) (f(0) + sum_k k c_k)
    bool paths_agree = false;
    Agreement residual;       // lhs against rhs_log_free
};

FunctionalEquationRow verify_functional_equation(const QExpPoly& f, unsigned N, const PadicContext& ctx);

/// The exact right-hand side (q-1)(f(0) + sum_k k c_k) as a rational.
BigRational functional_equation_rhs(const QExpPoly& f, const BigRational& q);

struct IntegralRow {
    unsigned N = 0;
    PadicNumber partial;              // S_N([y]_q^n)
    Agreement distance;               // against beta_{n,q}
    std::optional<bool> literal_agrees; // literal-sum oracle, small N only
};

struct IntegralRepresentationReport {
    unsigned n = 0;
    BigRational beta;
    std::vector<IntegralRow> rows;
    bool non_decreasing = true;
};

/// S_N([y]_q^n) against the Carlitz number beta_{n,q} for N = 1..n_max.
/// The literal-sum oracle runs while p^N <= literal_limit.
IntegralRepresentationReport verify_integral_representation(unsigned n, unsigned n_max, const PadicContext& ctx,
                                                            std::uint64_t literal_limit = 1000);

} // namespace qsym
