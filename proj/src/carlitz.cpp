#include "qsym/carlitz.hpp"

#include <stdexcept>

namespace qsym {

std::vector<BigRational> classical_bernoulli_table(unsigned n) {
    std::vector<BigRational> b{BigRational(1)};
    b.reserve(n + 1);
    for (unsigned k = 1; k <= n; ++k) {
        BigRational acc;
        for (unsigned j = 0; j < k; ++j) acc += BigRational(binomial(k + 1, j)) * b[j];
        b.push_back(-acc / BigRational(static_cast<long>(k) + 1));
    }
    return b;
}

BigRational classical_bernoulli(unsigned n) { return classical_bernoulli_table(n).back(); }

BetaCache::BetaCache(QParam q) : q_(std::move(q)), values_{BigRational(1)}, q_powers_{BigRational(1)} {}

const BigRational& BetaCache::get(unsigned n) {
    while (values_.size() <= n) {
        const unsigned k = static_cast<unsigned>(values_.size());
        while (q_powers_.size() <= k + 1) q_powers_.push_back(q_powers_.back() * q_.value());

        BigRational acc;
        for (unsigned l = 0; l < k; ++l) acc += BigRational(binomial(k, l)) * q_powers_[l] * values_[l];
        BigRational rhs = BigRational(k == 1 ? 1 : 0) - q_.value() * acc;
        values_.push_back(rhs / (q_powers_[k + 1] - BigRational(1)));

        if (recurrence_residual(k) != BigRational(k == 1 ? 1 : 0)) {
            values_.pop_back();
            throw std::logic_error("Carlitz recurrence residual check failed at n = " + std::to_string(k));
        }
    }
    return values_[n];
}

BigRational BetaCache::recurrence_residual(unsigned n) {
    get(n);
    BigRational acc;
    for (unsigned l = 0; l <= n; ++l) acc += BigRational(binomial(n, l)) * q_powers_[l] * values_[l];
    return q_.value() * acc - values_[n];
}

BetaCache& BetaCacheSet::for_q(const QParam& q) {
    auto it = caches_.find(q.value());
    if (it == caches_.end()) it = caches_.emplace(q.value(), BetaCache(q)).first;
    return it->second;
}

BigRational carlitz_beta(unsigned n, const QParam& q) {
    BetaCache cache(q);
    return cache.get(n);
}

BigRational beta_poly(unsigned n, BetaCache& cache, std::int64_t x) {
    return beta_poly_at_power(n, cache, cache.q().value().pow(x));
}

BigRational beta_poly(unsigned n, const QParam& q, std::int64_t x) {
    BetaCache cache(q);
    return beta_poly(n, cache, x);
}

BigRational beta_poly_at_power(unsigned n, BetaCache& cache, const BigRational& qy) {
    if (qy.is_zero()) throw ArithmeticError("Q^y = 0 has no solution y");
    const BigRational& big_q = cache.q().value();
    const BigRational bracket = (BigRational(1) - qy) / (BigRational(1) - big_q);

    // bracket^{n-l} for l = n down to 0 and qy^l for l = 0 up to n.
    BigRational result;
    BigRational qy_pow(1);
    std::vector<BigRational> bracket_pow(n + 1, BigRational(1));
    for (unsigned i = 1; i <= n; ++i) bracket_pow[i] = bracket_pow[i - 1] * bracket;
    for (unsigned l = 0; l <= n; ++l) {
        result += BigRational(binomial(n, l)) * qy_pow * bracket_pow[n - l] * cache.get(l);
        qy_pow *= qy;
    }
    return result;
}

BigRational beta_poly_at_power(unsigned n, const QParam& q, const BigRational& qy) {
    BetaCache cache(q);
    return beta_poly_at_power(n, cache, qy);
}

BigRational q_integral_exponential(std::uint64_t j, const QParam& q) {
    const auto k = static_cast<std::int64_t>(j + 1);
    return BigRational(k) / q_number(k, q);
}

} // namespace qsym
