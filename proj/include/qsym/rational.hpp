#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qsym {

/// Raised on undefined arithmetic: division by zero, 0 to a negative power,
/// parameters outside an operation's domain.
class ArithmeticError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when text cannot be parsed as a number.
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Arbitrary-precision signed integer.
class BigInt {
public:
    BigInt() = default;
    BigInt(long v) : v_(v) {}
    BigInt(int v) : v_(v) {}
    BigInt(unsigned long v) : v_(v) {}
    BigInt(unsigned v) : v_(v) {}
    BigInt(long long v);
    BigInt(unsigned long long v);
    explicit BigInt(mpz_class v) : v_(std::move(v)) {}

    static BigInt parse(std::string_view text);

    const mpz_class& raw() const { return v_; }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    bool fits_int64() const;
    std::int64_t to_int64() const;
    std::string to_string() const { return v_.get_str(); }

    BigInt abs() const { return BigInt(mpz_class(::abs(v_))); }
    BigInt pow(unsigned long e) const;

    friend BigInt operator+(const BigInt& a, const BigInt& b) { return BigInt(mpz_class(a.v_ + b.v_)); }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return BigInt(mpz_class(a.v_ - b.v_)); }
    friend BigInt operator*(const BigInt& a, const BigInt& b) { return BigInt(mpz_class(a.v_ * b.v_)); }
    /// Truncating division; throws ArithmeticError on zero divisor.
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    /// Remainder with the sign of the dividend.
    friend BigInt operator%(const BigInt& a, const BigInt& b);
    BigInt operator-() const { return BigInt(mpz_class(-v_)); }

    BigInt& operator+=(const BigInt& b) { v_ += b.v_; return *this; }
    BigInt& operator-=(const BigInt& b) { v_ -= b.v_; return *this; }
    BigInt& operator*=(const BigInt& b) { v_ *= b.v_; return *this; }

    friend bool operator==(const BigInt& a, const BigInt& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
        return cmp(a.v_, b.v_) <=> 0;
    }

private:
    mpz_class v_;
};

BigInt gcd(const BigInt& a, const BigInt& b);

/// C(n, k); zero when k > n.
BigInt binomial(unsigned long n, unsigned long k);

/// Exact rational in canonical form: gcd(num, den) = 1, den > 0, zero is 0/1.
class BigRational {
public:
    BigRational() = default;
    BigRational(long v) : v_(v) {}
    BigRational(int v) : v_(v) {}
    BigRational(long long v) : BigRational(BigInt(v)) {}
    BigRational(const BigInt& v) : v_(v.raw()) {}
    /// Throws ArithmeticError when den is zero.
    BigRational(const BigInt& num, const BigInt& den);

    /// Accepts "a", "-a", "a/b", "-a/b" with b != 0. Non-canonical input is
    /// reduced.
    static BigRational parse(std::string_view text);

    BigInt num() const { return BigInt(mpz_class(v_.get_num())); }
    BigInt den() const { return BigInt(mpz_class(v_.get_den())); }
    const mpq_class& raw() const { return v_; }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_one() const { return v_ == 1; }

    /// "num/den", or "num" when den = 1.
    std::string to_string() const;

    BigRational abs() const;
    /// Throws ArithmeticError for zero.
    BigRational inv() const;
    /// Integer power; 0^0 = 1, 0^e for e < 0 throws ArithmeticError.
    BigRational pow(std::int64_t e) const;

    friend BigRational operator+(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ + b.v_)); }
    friend BigRational operator-(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ - b.v_)); }
    friend BigRational operator*(const BigRational& a, const BigRational& b) { return BigRational(mpq_class(a.v_ * b.v_)); }
    friend BigRational operator/(const BigRational& a, const BigRational& b);
    BigRational operator-() const { return BigRational(mpq_class(-v_)); }

    BigRational& operator+=(const BigRational& b) { v_ += b.v_; return *this; }
    BigRational& operator-=(const BigRational& b) { v_ -= b.v_; return *this; }
    BigRational& operator*=(const BigRational& b) { v_ *= b.v_; return *this; }
    BigRational& operator/=(const BigRational& b) { return *this = *this / b; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
        return cmp(a.v_, b.v_) <=> 0;
    }

private:
    // gmpxx arithmetic results are already canonical; only construction from
    // a raw num/den pair needs mpq_canonicalize.
    explicit BigRational(mpq_class v) : v_(std::move(v)) {}

    mpq_class v_;
};

} // namespace qsym
