#include "qsym/qcalc.hpp"

namespace qsym {

QParam::QParam(BigRational q) : q_(std::move(q)) {
    if (q_.is_zero() || q_ == BigRational(1) || q_ == BigRational(-1)) {
        throw ArithmeticError("q must not be 0, 1 or -1 (got " + q_.to_string() + ")");
    }
}

QParam QParam::power(std::uint64_t k) const {
    if (k == 0) throw ArithmeticError("q^0 = 1 is not a valid parameter");
    return QParam(q_.pow(static_cast<std::int64_t>(k)));
}

BigRational q_number(std::int64_t x, const BigRational& q) {
    if (q.is_zero()) throw ArithmeticError("q-number with q = 0");
    if (q.is_one()) return BigRational(x);
    return (BigRational(1) - q.pow(x)) / (BigRational(1) - q);
}

BaseChangeSplit q_base_change_split(std::int64_t a, std::int64_t b, const QParam& q) {
    if (a < 1 || b < 1) throw ArithmeticError("base change split needs a, b >= 1");
    return {q_number(a, q), q_number(b, q.value().pow(a))};
}

ShiftSplit q_shift_split(std::int64_t c, std::int64_t d, const QParam& q) {
    if (c < 0) throw ArithmeticError("shift split needs c >= 0");
    return {q_number(c, q), q.value().pow(c), q_number(d, q)};
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticError("exponent overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithmeticError("exponent overflow");
    return r;
}

} // namespace qsym
