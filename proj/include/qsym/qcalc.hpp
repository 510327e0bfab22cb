#pragma once

#include <cstdint>

#include "qsym/rational.hpp"

namespace qsym {

/// A concrete deformation parameter q with q not in {0, 1, -1}, so q^k != 1
/// for every k >= 1 and every [k]_q is nonzero.
class QParam {
public:
    /// Throws ArithmeticError for q in {0, 1, -1}.
    explicit QParam(BigRational q);

    static QParam parse(std::string_view text) { return QParam(BigRational::parse(text)); }

    const BigRational& value() const { return q_; }

    /// q^k as a parameter; k >= 1.
    QParam power(std::uint64_t k) const;

    friend bool operator==(const QParam&, const QParam&) = default;

private:
    BigRational q_;
};

/// [x]_q = (1 - q^x) / (1 - q), with the limit value x at q = 1.
/// Throws ArithmeticError when q = 0.
BigRational q_number(std::int64_t x, const BigRational& q);
inline BigRational q_number(std::int64_t x, const QParam& q) { return q_number(x, q.value()); }

/// The factors of [ab]_q = [a]_q [b]_{q^a}.
struct BaseChangeSplit {
    BigRational outer; // [a]_q
    BigRational inner; // [b]_{q^a}
};

/// Requires a, b >= 1.
BaseChangeSplit q_base_change_split(std::int64_t a, std::int64_t b, const QParam& q);

/// The pieces of [c + d]_q = [c]_q + q^c [d]_q.
struct ShiftSplit {
    BigRational head;  // [c]_q
    BigRational twist; // q^c
    BigRational tail;  // [d]_q
};

/// Requires c >= 0.
ShiftSplit q_shift_split(std::int64_t c, std::int64_t d, const QParam& q);

/// Overflow-checked helpers for exponent bookkeeping.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);

} // namespace qsym
