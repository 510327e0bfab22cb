#pragma once

#include <cstdint>
#include <random>

#include "qsym/qcalc.hpp"
#include "qsym/rational.hpp"

namespace qsym::testing {

/// Seeded generator for hand-rolled property tests.
class Gen {
public:
    explicit Gen(std::uint32_t seed) : rng_(seed) {}

    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }

    /// num/den with |num| <= bound, 1 <= den <= bound; occasionally a large
    /// numerator so the GMP paths beyond one limb get exercised.
    BigRational rational(std::int64_t bound = 50) {
        BigInt num(integer(-bound, bound));
        if (integer(0, 9) == 0) num = num * BigInt(10).pow(25) + BigInt(integer(0, 99));
        return BigRational(num, BigInt(integer(1, bound)));
    }

    BigRational nonzero_rational(std::int64_t bound = 50) {
        for (;;) {
            auto r = rational(bound);
            if (!r.is_zero()) return r;
        }
    }

    QParam qparam(std::int64_t bound = 9) {
        for (;;) {
            const BigRational r(BigInt(integer(-bound, bound)), BigInt(integer(1, bound)));
            if (r.is_zero() || r == BigRational(1) || r == BigRational(-1)) continue;
            return QParam(r);
        }
    }

private:
    std::mt19937_64 rng_;
};

} // namespace qsym::testing
