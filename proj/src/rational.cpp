#include "qsym/rational.hpp"

#include <cctype>
#include <limits>

namespace qsym {

namespace {

bool is_decimal_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

BigInt::BigInt(long long v) {
    // mpz_class has no long long constructor; go through the string form
    // only when the value does not fit a long.
    if (v >= std::numeric_limits<long>::min() && v <= std::numeric_limits<long>::max()) {
        v_ = static_cast<long>(v);
    } else {
        v_ = mpz_class(std::to_string(v));
    }
}

BigInt::BigInt(unsigned long long v) {
    if (v <= std::numeric_limits<unsigned long>::max()) {
        v_ = static_cast<unsigned long>(v);
    } else {
        v_ = mpz_class(std::to_string(v));
    }
}

BigInt BigInt::parse(std::string_view text) {
    if (!is_decimal_integer(text)) {
        throw ParseError("not an integer: '" + std::string(text) + "'");
    }
    if (text.front() == '+') text.remove_prefix(1);
    return BigInt(mpz_class(std::string(text), 10));
}

bool BigInt::fits_int64() const {
    static_assert(sizeof(long) == sizeof(std::int64_t));
    return v_.fits_slong_p();
}

std::int64_t BigInt::to_int64() const {
    if (!fits_int64()) throw ArithmeticError("integer does not fit in 64 bits: " + to_string());
    return v_.get_si();
}

BigInt BigInt::pow(unsigned long e) const {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), v_.get_mpz_t(), e);
    return BigInt(std::move(r));
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    if (b.is_zero()) throw ArithmeticError("integer division by zero");
    return BigInt(mpz_class(a.v_ / b.v_));
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    if (b.is_zero()) throw ArithmeticError("integer division by zero");
    return BigInt(mpz_class(a.v_ % b.v_));
}

BigInt gcd(const BigInt& a, const BigInt& b) {
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), a.raw().get_mpz_t(), b.raw().get_mpz_t());
    return BigInt(std::move(r));
}

BigInt binomial(unsigned long n, unsigned long k) {
    if (k > n) return BigInt(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return BigInt(std::move(r));
}

BigRational::BigRational(const BigInt& num, const BigInt& den) {
    if (den.is_zero()) throw ArithmeticError("rational with zero denominator");
    v_ = mpq_class(num.raw(), den.raw());
    v_.canonicalize();
}

BigRational BigRational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return BigRational(BigInt::parse(text));
    }
    const auto num_text = text.substr(0, slash);
    const auto den_text = text.substr(slash + 1);
    if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+')) {
        throw ParseError("sign not allowed in denominator: '" + std::string(text) + "'");
    }
    const BigInt den = BigInt::parse(den_text);
    if (den.is_zero()) throw ParseError("zero denominator: '" + std::string(text) + "'");
    return BigRational(BigInt::parse(num_text), den);
}

std::string BigRational::to_string() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

BigRational BigRational::abs() const {
    return BigRational(mpq_class(::abs(v_)));
}

BigRational BigRational::inv() const {
    if (is_zero()) throw ArithmeticError("inverse of zero");
    mpq_class r;
    mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
    return BigRational(std::move(r));
}

BigRational BigRational::pow(std::int64_t e) const {
    if (e == 0) return BigRational(1);
    if (is_zero()) {
        if (e < 0) throw ArithmeticError("zero raised to a negative power");
        return BigRational(0);
    }
    const BigRational base = e < 0 ? inv() : *this;
    const unsigned long magnitude =
        e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1UL : static_cast<unsigned long>(e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), base.v_.get_num_mpz_t(), magnitude);
    mpz_pow_ui(d.get_mpz_t(), base.v_.get_den_mpz_t(), magnitude);
    // Powers of coprime numbers stay coprime and den stays positive.
    return BigRational(mpq_class(n, d));
}

BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.is_zero()) throw ArithmeticError("rational division by zero");
    return BigRational(mpq_class(a.v_ / b.v_));
}

} // namespace qsym
