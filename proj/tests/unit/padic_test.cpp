#include <gtest/gtest.h>

#include "qsym/carlitz.hpp"
#include "qsym/padic.hpp"
#include "test_support.hpp"

using namespace qsym;

namespace {

BigRational r(const char* text) { return BigRational::parse(text); }

PadicContext context(long p, std::int64_t K, long offset = 1) { return PadicContext(p, K, BigInt(offset)); }

// Random rational whose denominator is prime to p.
BigRational p_integral_rational(qsym::testing::Gen& gen, long p) {
    for (;;) {
        const BigRational a = gen.rational(200);
        if (a.den() % BigInt(p) != BigInt(0)) return a;
    }
}

// v_p of x - y for exact rationals, as the reference for the p-adic paths.
std::int64_t exact_valuation(const BigRational& x, const BigRational& y, long p) { return p_valuation(x - y, p); }

} // namespace

TEST(PadicNumber, Examples) {
    const auto five = PadicNumber::from_rational(BigRational(5), 5, 10);
    const auto product = five * five;
    EXPECT_EQ(product.valuation(), 2);
    EXPECT_EQ(product.unit(), BigInt(1));

    const auto ctx = context(5, 10);
    const auto inv = ctx.embed(BigRational(1)) / ctx.embed(BigRational(1) - ctx.q_rational());
    EXPECT_EQ(inv.valuation(), -1);
    EXPECT_EQ(inv.unit(), power_of(5, inv.relative_precision()) - BigInt(1));

    const auto x = ctx.embed(r("17/3"));
    EXPECT_TRUE((x + (-x)).is_zero());
    EXPECT_TRUE((x - x).is_zero());
}

TEST(PadicNumber, PrecisionTracking) {
    const auto a = PadicNumber::from_rational(r("1/7"), 5, 6);
    const auto b = PadicNumber::from_rational(BigRational(25), 5, 3);
    EXPECT_EQ((a * b).relative_precision(), 3);
    EXPECT_EQ((a * b).valuation(), 2);
    EXPECT_EQ((a + b).absolute_precision(), 5);
    const auto zero = PadicNumber::zero(5, 4);
    EXPECT_EQ(zero.to_string(), "O(5^4)");
    EXPECT_EQ(PadicNumber::zero(5).to_string(), "0");
    EXPECT_THROW(a / zero, PrecisionError);
    EXPECT_THROW(a / PadicNumber::zero(5), ArithmeticError);
    EXPECT_THROW(PadicNumber::from_rational(a.representative(), 5, 0), PrecisionError);
    EXPECT_EQ((zero * b).valuation(), 6);
    EXPECT_EQ(PadicNumber::from_residue(BigInt(50), 5, 4).valuation(), 2);
    EXPECT_EQ(PadicNumber::from_residue(BigInt(625), 5, 4).to_string(), "O(5^4)");
}

TEST(PadicNumber, RingAxiomsOnRandomTriples) {
    qsym::testing::Gen gen(501);
    for (long p : {3L, 5L, 7L}) {
        for (int i = 0; i < 150; ++i) {
            const auto a = PadicNumber::from_rational(gen.nonzero_rational(300), p, 12);
            const auto b = PadicNumber::from_rational(gen.nonzero_rational(300), p, 12);
            const auto c = PadicNumber::from_rational(gen.nonzero_rational(300), p, 12);
            ASSERT_TRUE(agrees((a + b) + c, a + (b + c)));
            ASSERT_TRUE(agrees(a + b, b + a));
            ASSERT_TRUE(agrees((a * b) * c, a * (b * c)));
            ASSERT_TRUE(agrees(a * (b + c), a * b + a * c));
            ASSERT_TRUE(agrees((a * b) / b, a));
        }
    }
}

TEST(PadicNumber, EmbeddingIsAHomomorphism) {
    qsym::testing::Gen gen(502);
    for (long p : {3L, 5L, 11L}) {
        const auto ctx = context(p, 10);
        for (int i = 0; i < 200; ++i) {
            const auto a = p_integral_rational(gen, p);
            const auto b = p_integral_rational(gen, p);
            ASSERT_TRUE(agrees(ctx.embed(a) * ctx.embed(b), ctx.embed(a * b)));
            ASSERT_TRUE(agrees(ctx.embed(a) + ctx.embed(b), ctx.embed(a + b)));
            // The representative is congruent to a modulo the known digits.
            const auto e = ctx.embed(a);
            if (!e.is_zero() && e.representative() != a) {
                ASSERT_GE(exact_valuation(e.representative(), a, p), e.absolute_precision());
            }
        }
    }
}

TEST(PadicContext, Invariants) {
    EXPECT_THROW(context(4, 10), std::invalid_argument);
    EXPECT_THROW(context(2, 10), std::invalid_argument);
    EXPECT_THROW(context(5, 0), std::invalid_argument);
    EXPECT_THROW(context(5, 10, 0), std::invalid_argument);
    EXPECT_EQ(context(5, 10).q(), BigInt(6));
    EXPECT_EQ(context(3, 10, 3).q_shift_valuation(), 2);
}

TEST(QExpPoly, Shift) {
    const BigRational q(6);
    EXPECT_EQ(QExpPoly::constant(BigRational(1)).shift(q), QExpPoly::constant(BigRational(1)));
    EXPECT_EQ(QExpPoly::exponential(1).shift(q), QExpPoly({{1, q}}));
    // [x + 1]_q = 1 + q [x]_q.
    const auto bracket = q_monomial(1, q);
    std::map<std::uint64_t, BigRational> expected;
    for (const auto& [k, c] : bracket.coefficients()) expected[k] = q * c;
    expected[0] += BigRational(1);
    EXPECT_EQ(bracket.shift(q), QExpPoly(expected));
}

TEST(QExpPoly, Monomials) {
    const BigRational q(4);
    const BigRational s = (BigRational(1) - q).inv();
    EXPECT_EQ(q_monomial(0, q), QExpPoly::constant(BigRational(1)));
    EXPECT_EQ(q_monomial(1, q), QExpPoly({{0, s}, {1, -s}}));
    EXPECT_EQ(q_monomial(2, q), QExpPoly({{0, s * s}, {1, BigRational(-2) * s * s}, {2, s * s}}));
    for (unsigned n = 0; n <= 5; ++n) {
        for (std::int64_t x = 0; x <= 4; ++x) {
            ASSERT_EQ(q_monomial(n, q).evaluate(x, q), q_number(x, q).pow(n));
        }
    }
    EXPECT_EQ(QExpPoly({{3, BigRational(0)}}).coefficients().size(), 0U);
}

TEST(QIntegralPartial, ConstantIsExact) {
    const auto ctx = context(5, 12);
    for (unsigned N = 1; N <= 6; ++N) {
        const auto s = q_integral_partial(QExpPoly::constant(BigRational(1)), N, ctx);
        EXPECT_TRUE(agrees(s, ctx.embed(BigRational(1))));
        EXPECT_EQ(q_integral_partial_literal(QExpPoly::constant(BigRational(1)), std::min(N, 3U), 5, BigRational(6)),
                  BigRational(1));
    }
}

TEST(QIntegralPartial, QNumberOfPowerOfPHasValuationN) {
    for (long p : {3L, 5L, 7L}) {
        for (long u : {1L, 2L, -1L, 3L}) {
            const BigInt q = BigInt(1) + BigInt(p) * BigInt(u);
            if (p_valuation(q - BigInt(1), p) != 1) continue;
            for (unsigned N = 1; N <= 6; ++N) {
                const BigRational bracket = q_number(power_of(p, N).to_int64(), BigRational(q));
                ASSERT_EQ(p_valuation(bracket, p), static_cast<std::int64_t>(N)) << p << " " << u << " " << N;
            }
        }
    }
}

TEST(QIntegralPartial, ConvergesToLowOrderIntegrals) {
    for (auto [p, u] : {std::pair{5L, 1L}, std::pair{3L, 1L}, std::pair{7L, -2L}}) {
        const auto ctx = context(p, 14, u);
        const BigRational q = ctx.q_rational();
        const auto bracket_target = ctx.embed(-(BigRational(1) + q).inv());
        const auto exp_target = ctx.embed(BigRational(2) / (BigRational(1) + q));
        std::int64_t last_bracket = -100, last_exp = -100;
        for (unsigned N = 1; N <= 6; ++N) {
            const auto a = agreement(q_integral_partial(q_monomial(1, q), N, ctx), bracket_target);
            const auto b = agreement(q_integral_partial(QExpPoly::exponential(1), N, ctx), exp_target);
            ASSERT_GE(a.valuation, static_cast<std::int64_t>(N) - 1);
            ASSERT_GE(b.valuation, static_cast<std::int64_t>(N));
            ASSERT_GE(a.valuation, last_bracket);
            ASSERT_GE(b.valuation, last_exp);
            last_bracket = a.valuation;
            last_exp = b.valuation;
        }
    }
}

TEST(QIntegralPartial, ClosedFormMatchesLiteralSum) {
    for (auto [p, u] : {std::pair{3L, 1L}, std::pair{5L, 1L}, std::pair{5L, 2L}}) {
        const auto ctx = context(p, 16, u);
        const BigRational q = ctx.q_rational();
        for (unsigned n = 0; n <= 4; ++n) {
            for (unsigned N = 1; N <= 3; ++N) {
                const BigRational literal = q_integral_partial_literal(q_monomial(n, q), N, p, q);
                const auto closed = q_integral_partial(q_monomial(n, q), N, ctx);
                ASSERT_TRUE(agrees(closed, ctx.embed(literal))) << p << " " << n << " " << N;
                ASSERT_GE(closed.absolute_precision(), 16 - static_cast<std::int64_t>(N + n) - 1);
            }
        }
    }
    EXPECT_THROW(q_integral_partial_literal(q_monomial(1, BigRational(6)), 8, 5, BigRational(6)), std::length_error);
}

TEST(QIntegralPartial, ConvergesToExponentialIntegral) {
    const auto ctx = context(3, 20);
    const QParam q(ctx.q_rational());
    for (std::uint64_t j = 0; j <= 3; ++j) {
        const auto target = ctx.embed(q_integral_exponential(j, q));
        const auto d = agreement(q_integral_partial(QExpPoly::exponential(j), 6, ctx), target);
        EXPECT_GE(d.valuation, 5) << j;
    }
}

TEST(PadicLog, Examples) {
    EXPECT_TRUE(padic_log(BigInt(1), 5, 10).is_exact_zero());
    for (long p : {3L, 5L, 7L}) {
        const BigInt q = BigInt(1) + BigInt(p);
        const auto lg = padic_log(q, p, 12);
        EXPECT_EQ(lg.valuation(), 1);
        EXPECT_EQ(lg.absolute_precision(), 12);
        const auto lg2 = padic_log(q * q, p, 12);
        EXPECT_TRUE(agrees(lg2, PadicNumber::from_rational(BigRational(2), p, 12) * lg));
        const auto lg3 = padic_log(q * q * q, p, 12);
        EXPECT_TRUE(agrees(lg3, lg2 + lg));
    }
    EXPECT_THROW(padic_log(BigInt(3), 5, 10), ArithmeticError);
    const auto ctx = context(3, 10, 3);
    EXPECT_EQ(padic_log_q(ctx).valuation(), 2);
}

TEST(PadicLog, ProductRule) {
    qsym::testing::Gen gen(503);
    for (int i = 0; i < 60; ++i) {
        const long p = gen.integer(0, 1) ? 3 : 5;
        BigInt a = BigInt(1) + BigInt(p) * BigInt(gen.integer(1, 40));
        BigInt b = BigInt(1) + BigInt(p) * BigInt(gen.integer(-40, -1));
        if (b.is_zero()) continue;
        const auto lhs = padic_log(a * b, p, 10);
        const auto rhs = padic_log(a, p, 10) + padic_log(b, p, 10);
        ASSERT_TRUE(agrees(lhs, rhs)) << a.to_string() << " " << b.to_string();
    }
}

TEST(FunctionalEquation, Constant) {
    const auto ctx = context(3, 10);
    for (unsigned N = 1; N <= 4; ++N) {
        const auto row = verify_functional_equation(QExpPoly::constant(BigRational(1)), N, ctx);
        EXPECT_TRUE(row.paths_agree);
        EXPECT_TRUE(row.residual.to_precision);
        EXPECT_TRUE(agrees(row.lhs, ctx.embed(ctx.q_rational() - BigRational(1))));
    }
}

TEST(FunctionalEquation, RightHandSides) {
    const BigRational q(6);
    EXPECT_EQ(functional_equation_rhs(QExpPoly::constant(BigRational(1)), q), BigRational(5));
    EXPECT_EQ(functional_equation_rhs(q_monomial(1, q), q), BigRational(1));
    for (unsigned n = 2; n <= 6; ++n) EXPECT_EQ(functional_equation_rhs(q_monomial(n, q), q), BigRational(0));
}

TEST(FunctionalEquation, ResidualGrowsWithN) {
    for (auto [p, u] : {std::pair{3L, 1L}, std::pair{5L, 1L}}) {
        const auto ctx = context(p, working_precision(10, 6, 4, 1), u);
        const BigRational q = ctx.q_rational();
        std::vector<QExpPoly> functions{QExpPoly::exponential(1), QExpPoly::exponential(3)};
        for (unsigned n = 0; n <= 4; ++n) functions.push_back(q_monomial(n, q));
        functions.push_back(QExpPoly({{0, r("2/7")}, {2, r("-3")}, {4, r("5/11")}}));
        for (const auto& f : functions) {
            const std::int64_t g = 4 * ctx.q_shift_valuation() + 2;
            for (unsigned N = 1; N <= 6; ++N) {
                const auto row = verify_functional_equation(f, N, ctx);
                ASSERT_TRUE(row.paths_agree);
                ASSERT_GE(row.residual.valuation, static_cast<std::int64_t>(N) - g);
                // Exact finite identity: LHS_N = (q - 1)(f(0) - f(p^N) q^{p^N}) / (1 - q^{p^N}).
                if (N <= 2) {
                    const std::int64_t pn = power_of(p, N).to_int64();
                    const BigRational exact = (q - BigRational(1)) * (f.at_zero() - f.evaluate(pn, q) * q.pow(pn)) /
                                              (BigRational(1) - q.pow(pn));
                    ASSERT_TRUE(agrees(row.lhs, ctx.embed(exact)));
                }
            }
        }
    }
}

TEST(IntegralRepresentation, Examples) {
    auto report = verify_integral_representation(0, 4, context(5, 12));
    for (const auto& row : report.rows) EXPECT_TRUE(row.distance.to_precision);

    report = verify_integral_representation(1, 6, context(5, 12));
    EXPECT_EQ(report.beta, r("-1/7"));
    EXPECT_TRUE(report.non_decreasing);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        EXPECT_GT(report.rows[i].distance.valuation, report.rows[i - 1].distance.valuation);
    }
    ASSERT_TRUE(report.rows[0].literal_agrees.has_value());
    EXPECT_TRUE(*report.rows[0].literal_agrees);
    EXPECT_FALSE(report.rows[5].literal_agrees.has_value());

    report = verify_integral_representation(3, 6, context(3, 16));
    EXPECT_TRUE(report.non_decreasing);
    EXPECT_GT(report.rows.back().distance.valuation, report.rows.front().distance.valuation);
}

TEST(IntegralRepresentation, DistanceMatchesExactRationalOracle) {
    // For small N the exact literal sum gives the true valuation of S_N - beta.
    const auto ctx = context(3, 20);
    const BigRational q = ctx.q_rational();
    for (unsigned n = 1; n <= 4; ++n) {
        const auto report = verify_integral_representation(n, 3, ctx);
        for (const auto& row : report.rows) {
            const BigRational literal = q_integral_partial_literal(q_monomial(n, q), row.N, 3, q);
            const BigRational diff = literal - report.beta;
            if (diff.is_zero()) {
                EXPECT_TRUE(row.distance.to_precision);
            } else {
                EXPECT_EQ(row.distance.valuation, p_valuation(diff, 3)) << n << " " << row.N;
            }
        }
    }
}
