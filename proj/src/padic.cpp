#include "qsym/padic.hpp"

#include <algorithm>
#include <cmath>

#include "qsym/carlitz.hpp"
#include "qsym/qcalc.hpp"

namespace qsym {

std::int64_t p_valuation(const BigInt& a, long p) {
    if (a.is_zero()) throw ArithmeticError("valuation of zero");
    mpz_class rest;
    mpz_class prime(p);
    const auto v = mpz_remove(rest.get_mpz_t(), a.raw().get_mpz_t(), prime.get_mpz_t());
    return static_cast<std::int64_t>(v);
}

std::int64_t p_valuation(const BigRational& a, long p) {
    if (a.is_zero()) throw ArithmeticError("valuation of zero");
    return p_valuation(a.num(), p) - p_valuation(a.den(), p);
}

BigInt power_of(long p, std::int64_t e) {
    if (e < 0) throw ArithmeticError("negative exponent for integer power");
    return BigInt(p).pow(static_cast<unsigned long>(e));
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

namespace {

BigInt mod_positive(const BigInt& a, const BigInt& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), a.raw().get_mpz_t(), m.raw().get_mpz_t());
    return BigInt(std::move(r));
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), a.raw().get_mpz_t(), m.raw().get_mpz_t()) == 0) {
        throw ArithmeticError("not invertible modulo p^k");
    }
    return BigInt(std::move(r));
}

BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& m) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.raw().get_mpz_t(), exponent.raw().get_mpz_t(), m.raw().get_mpz_t());
    return BigInt(std::move(r));
}

void require_same_prime(const PadicNumber& a, const PadicNumber& b) {
    if (a.prime() != b.prime()) throw ArithmeticError("mixing p-adic numbers of different primes");
}

} // namespace

PadicNumber PadicNumber::zero(long p, std::int64_t absolute_precision) {
    return PadicNumber(p, true, absolute_precision, BigInt(0), 0);
}

PadicNumber PadicNumber::from_rational(const BigRational& a, long p, std::int64_t relative_precision) {
    if (relative_precision <= 0) throw PrecisionError("embedding with no known digits");
    if (a.is_zero()) return zero(p);
    BigInt num = a.num();
    BigInt den = a.den();
    const std::int64_t vn = p_valuation(num, p);
    const std::int64_t vd = p_valuation(den, p);
    num = num / power_of(p, vn);
    den = den / power_of(p, vd);
    const BigInt modulus = power_of(p, relative_precision);
    const BigInt unit = mod_positive(mod_positive(num, modulus) * mod_inverse(den, modulus), modulus);
    return PadicNumber(p, false, vn - vd, unit, relative_precision);
}

PadicNumber PadicNumber::from_residue(const BigInt& residue, long p, std::int64_t absolute_precision) {
    const BigInt modulus = power_of(p, absolute_precision);
    const BigInt r = mod_positive(residue, modulus);
    if (r.is_zero()) return zero(p, absolute_precision);
    const std::int64_t v = p_valuation(r, p);
    return PadicNumber(p, false, v, r / power_of(p, v), absolute_precision - v);
}

PadicNumber PadicNumber::with_absolute_cap(std::int64_t absolute_precision) const {
    if (absolute_precision >= this->absolute_precision()) return *this;
    if (zero_ || absolute_precision <= valuation_) return zero(p_, absolute_precision);
    const std::int64_t r = absolute_precision - valuation_;
    return PadicNumber(p_, false, valuation_, mod_positive(unit_, power_of(p_, r)), r);
}

BigRational PadicNumber::representative() const {
    if (zero_) return BigRational(0);
    if (valuation_ >= 0) return BigRational(unit_ * power_of(p_, valuation_));
    return BigRational(unit_, power_of(p_, -valuation_));
}

std::string PadicNumber::to_string() const {
    const std::string ps = std::to_string(p_);
    if (is_exact_zero()) return "0";
    if (zero_) return "O(" + ps + "^" + std::to_string(valuation_) + ")";
    return ps + "^" + std::to_string(valuation_) + " * " + unit_.to_string() + " + O(" + ps + "^" +
           std::to_string(absolute_precision()) + ")";
}

PadicNumber PadicNumber::operator-() const {
    if (zero_) return *this;
    const BigInt modulus = power_of(p_, relprec_);
    return PadicNumber(p_, false, valuation_, mod_positive(-unit_, modulus), relprec_);
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
    require_same_prime(a, b);
    if (a.zero_) return b.with_absolute_cap(a.valuation_);
    if (b.zero_) return a.with_absolute_cap(b.valuation_);
    const long p = a.p_;
    const std::int64_t vmin = std::min(a.valuation_, b.valuation_);
    const std::int64_t abs_prec = std::min(a.absolute_precision(), b.absolute_precision());
    const BigInt modulus = power_of(p, abs_prec - vmin);
    const BigInt sum = a.unit_ * power_of(p, a.valuation_ - vmin) + b.unit_ * power_of(p, b.valuation_ - vmin);
    const BigInt r = mod_positive(sum, modulus);
    if (r.is_zero()) return PadicNumber::zero(p, abs_prec);
    const std::int64_t t = p_valuation(r, p);
    return PadicNumber(p, false, vmin + t, r / power_of(p, t), abs_prec - vmin - t);
}

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
    require_same_prime(a, b);
    if (a.is_exact_zero() || b.is_exact_zero()) return PadicNumber::zero(a.p_);
    if (a.zero_ && b.zero_) return PadicNumber::zero(a.p_, a.valuation_ + b.valuation_);
    if (a.zero_) return PadicNumber::zero(a.p_, a.valuation_ + b.valuation_);
    if (b.zero_) return PadicNumber::zero(a.p_, a.valuation_ + b.valuation_);
    const std::int64_t r = std::min(a.relprec_, b.relprec_);
    const BigInt modulus = power_of(a.p_, r);
    return PadicNumber(a.p_, false, a.valuation_ + b.valuation_, mod_positive(a.unit_ * b.unit_, modulus), r);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
    require_same_prime(a, b);
    if (b.is_exact_zero()) throw ArithmeticError("p-adic division by zero");
    if (b.zero_) throw PrecisionError("p-adic divisor is zero to all known digits");
    if (a.is_exact_zero()) return a;
    if (a.zero_) return PadicNumber::zero(a.p_, a.valuation_ - b.valuation_);
    const std::int64_t r = std::min(a.relprec_, b.relprec_);
    const BigInt modulus = power_of(a.p_, r);
    const BigInt unit = mod_positive(a.unit_ * mod_inverse(b.unit_, modulus), modulus);
    return PadicNumber(a.p_, false, a.valuation_ - b.valuation_, unit, r);
}

PadicContext::PadicContext(long p, std::int64_t precision, BigInt q_offset)
    : p_(p), precision_(precision), q_offset_(std::move(q_offset)), q_(BigInt(1) + BigInt(p) * q_offset_) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("p must be an odd prime (got " + std::to_string(p) + ")");
    if (precision < 1) throw std::invalid_argument("p-adic precision must be >= 1");
    if (q_offset_.is_zero()) throw std::invalid_argument("q offset must be nonzero (q = 1 is not a valid q)");
}

std::int64_t working_precision(std::int64_t target, std::int64_t n_max, unsigned degree,
                               std::int64_t shift_valuation) {
    return target + n_max + static_cast<std::int64_t>(degree) * shift_valuation + 2;
}

QExpPoly::QExpPoly(std::map<std::uint64_t, BigRational> coefficients) : coeffs_(std::move(coefficients)) {
    std::erase_if(coeffs_, [](const auto& kv) { return kv.second.is_zero(); });
}

QExpPoly QExpPoly::constant(const BigRational& c) { return QExpPoly({{0, c}}); }

QExpPoly QExpPoly::exponential(std::uint64_t k) { return QExpPoly({{k, BigRational(1)}}); }

BigRational QExpPoly::coefficient(std::uint64_t k) const {
    const auto it = coeffs_.find(k);
    return it == coeffs_.end() ? BigRational(0) : it->second;
}

QExpPoly QExpPoly::shift(const BigRational& q) const {
    std::map<std::uint64_t, BigRational> out;
    for (const auto& [k, c] : coeffs_) out.emplace(k, c * q.pow(static_cast<std::int64_t>(k)));
    return QExpPoly(std::move(out));
}

BigRational QExpPoly::evaluate(std::int64_t x, const BigRational& q) const {
    BigRational total;
    for (const auto& [k, c] : coeffs_) total += c * q.pow(checked_mul(static_cast<std::int64_t>(k), x));
    return total;
}

BigRational QExpPoly::at_zero() const {
    BigRational total;
    for (const auto& [k, c] : coeffs_) total += c;
    return total;
}

BigRational QExpPoly::derivative_weight() const {
    BigRational total;
    for (const auto& [k, c] : coeffs_) total += BigRational(static_cast<long>(k)) * c;
    return total;
}

QExpPoly q_monomial(unsigned n, const BigRational& q) {
    const BigRational scale = (BigRational(1) - q).pow(-static_cast<std::int64_t>(n));
    std::map<std::uint64_t, BigRational> coeffs;
    for (unsigned j = 0; j <= n; ++j) {
        BigRational c = BigRational(binomial(n, j)) * scale;
        coeffs.emplace(j, j % 2 ? -c : c);
    }
    return QExpPoly(std::move(coeffs));
}

namespace {

std::int64_t floor_log(long p, std::uint64_t v) {
    std::int64_t e = 0;
    while (v >= static_cast<std::uint64_t>(p)) {
        v /= static_cast<std::uint64_t>(p);
        ++e;
    }
    return e;
}

// sum_{x < p^N} r^x for r = q^step, as (1 - q^{step p^N}) / (1 - q^step).
PadicNumber geometric_block(std::uint64_t step, const BigInt& p_to_n, unsigned N, const PadicContext& ctx) {
    const BigInt& q = ctx.q();
    const BigInt ratio = q.pow(step);
    if (ratio == BigInt(1)) return ctx.embed(BigRational(p_to_n));
    // Enough digits that the numerator keeps K known digits after its
    // valuation, without relying on the expected valuation being exact.
    const std::int64_t modulus_digits = ctx.precision() + static_cast<std::int64_t>(N) + ctx.q_shift_valuation() +
                                        floor_log(ctx.p(), step) + 2;
    const BigInt modulus = power_of(ctx.p(), modulus_digits);
    const BigInt numerator = BigInt(1) - mod_pow(q, BigInt(step) * p_to_n, modulus);
    return PadicNumber::from_residue(numerator, ctx.p(), modulus_digits) /
           ctx.embed(BigRational(BigInt(1) - ratio));
}

} // namespace

PadicNumber q_integral_partial(const QExpPoly& f, unsigned N, const PadicContext& ctx) {
    if (N < 1) throw std::invalid_argument("partial sums need N >= 1");
    const BigInt p_to_n = power_of(ctx.p(), N);
    const PadicNumber normalizer = geometric_block(1, p_to_n, N, ctx); // [p^N]_q
    PadicNumber total = PadicNumber::zero(ctx.p());
    for (const auto& [k, c] : f.coefficients()) {
        total = total + ctx.embed(c) * geometric_block(k + 1, p_to_n, N, ctx);
    }
    return total / normalizer;
}

BigRational q_integral_partial_literal(const QExpPoly& f, unsigned N, long p, const BigRational& q,
                                       std::uint64_t max_terms) {
    const BigInt p_to_n = power_of(p, N);
    if (p_to_n > BigInt(static_cast<unsigned long>(max_terms))) {
        throw std::length_error("literal q-integral sum over " + p_to_n.to_string() + " terms exceeds the limit");
    }
    const std::int64_t count = p_to_n.to_int64();
    BigRational total;
    BigRational weight(1); // q^x
    for (std::int64_t x = 0; x < count; ++x) {
        total += f.evaluate(x, q) * weight;
        weight *= q;
    }
    return total / q_number(count, q);
}

PadicNumber padic_log(const BigInt& q, long p, std::int64_t absolute_precision) {
    const BigInt shift = q - BigInt(1);
    if (shift.is_zero()) return PadicNumber::zero(p);
    const std::int64_t v = p_valuation(shift, p);
    if (v < 1) throw ArithmeticError("log series needs v_p(q - 1) >= 1");

    // Term m has valuation m v - v_p(m) >= m v - log_p m, which increases in
    // m for p >= 3; stop once that bound reaches the target.
    PadicNumber total = PadicNumber::zero(p);
    BigInt shift_pow(1);
    const std::int64_t digits = std::max<std::int64_t>(absolute_precision, 1);
    for (std::int64_t m = 1;; ++m) {
        if (m * v - std::log(static_cast<double>(m)) / std::log(static_cast<double>(p)) >= static_cast<double>(absolute_precision)) {
            break;
        }
        shift_pow *= shift;
        const BigRational term = BigRational(shift_pow, BigInt(static_cast<long>(m)));
        const PadicNumber embedded = PadicNumber::from_rational(m % 2 ? term : -term, p, digits);
        total = total + embedded;
    }
    return total.with_absolute_cap(absolute_precision);
}

PadicNumber padic_log_q(const PadicContext& ctx) {
    return padic_log(ctx.q(), ctx.p(), ctx.precision() + ctx.q_shift_valuation());
}

Agreement agreement(const PadicNumber& a, const PadicNumber& b) {
    const PadicNumber diff = a - b;
    if (diff.is_zero()) return {diff.valuation(), true};
    return {diff.valuation(), false};
}

BigRational functional_equation_rhs(const QExpPoly& f, const BigRational& q) {
    return (q - BigRational(1)) * (f.at_zero() + f.derivative_weight());
}

FunctionalEquationRow verify_functional_equation(const QExpPoly& f, unsigned N, const PadicContext& ctx) {
    const BigRational q = ctx.q_rational();
    const PadicNumber q_embedded = ctx.embed(q);
    const PadicNumber q_minus_one = ctx.embed(q - BigRational(1));

    PadicNumber lhs = q_embedded * q_integral_partial(f.shift(q), N, ctx) - q_integral_partial(f, N, ctx);

    const PadicNumber log_q = padic_log_q(ctx);
    const PadicNumber derivative = ctx.embed(f.derivative_weight()) * log_q; // f'(0)
    PadicNumber rhs_log = q_minus_one * ctx.embed(f.at_zero()) + (q_minus_one / log_q) * derivative;
    PadicNumber rhs_free = ctx.embed(functional_equation_rhs(f, q));

    const bool paths_agree = agrees(rhs_log, rhs_free);
    const Agreement residual = agreement(lhs, rhs_free);
    return FunctionalEquationRow{N, std::move(lhs), std::move(rhs_log), std::move(rhs_free), paths_agree, residual};
}

IntegralRepresentationReport verify_integral_representation(unsigned n, unsigned n_max, const PadicContext& ctx,
                                                            std::uint64_t literal_limit) {
    const BigRational q = ctx.q_rational();
    IntegralRepresentationReport report{n, carlitz_beta(n, QParam(q)), {}, true};
    const PadicNumber beta = ctx.embed(report.beta);
    const QExpPoly f = q_monomial(n, q);
    for (unsigned N = 1; N <= n_max; ++N) {
        IntegralRow row{N, q_integral_partial(f, N, ctx), {}, std::nullopt};
        row.distance = agreement(row.partial, beta);
        if (power_of(ctx.p(), N) <= BigInt(static_cast<unsigned long>(literal_limit))) {
            const PadicNumber literal = ctx.embed(q_integral_partial_literal(f, N, ctx.p(), q, literal_limit));
            row.literal_agrees = agrees(literal, row.partial);
        }
        if (!report.rows.empty() && row.distance.valuation < report.rows.back().distance.valuation) {
            report.non_decreasing = false;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace qsym
