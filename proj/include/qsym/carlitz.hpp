#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qsym/qcalc.hpp"
#include "qsym/rational.hpp"

namespace qsym {

/// B_0, ..., B_n from sum_{k=0}^{n} C(n+1, k) B_k = 0 (n >= 1), which is the
/// umbral relation (B + 1)^n - B_n = [n = 1] rewritten; B_1 = -1/2.
std::vector<BigRational> classical_bernoulli_table(unsigned n);
BigRational classical_bernoulli(unsigned n);

/// Carlitz q-Bernoulli numbers for one q, extended on demand.
///
/// The umbral relation q (q beta + 1)^n - beta_n = [n = 1] contains beta_n on
/// both sides; collecting it gives
///
///     beta_n = ([n = 1] - q sum_{l<n} C(n,l) q^l beta_l) / (q^{n+1} - 1),
///
/// and q^{n+1} != 1 by the QParam invariant. Every inserted value is checked
/// against the unsolved relation.
class BetaCache {
public:
    explicit BetaCache(QParam q);

    const QParam& q() const { return q_; }

    /// beta_{n,q}, computing and caching missing entries.
    const BigRational& get(unsigned n);

    /// q sum_{l<=n} C(n,l) q^l beta_l - beta_n; equals [n = 1] for n >= 1.
    BigRational recurrence_residual(unsigned n);

    std::size_t size() const { return values_.size(); }

private:
    QParam q_;
    std::vector<BigRational> values_;
    std::vector<BigRational> q_powers_;
};

/// Caches keyed by the canonical value of q. Not synchronized: use one per
/// thread of evaluation.
class BetaCacheSet {
public:
    BetaCache& for_q(const QParam& q);

private:
    std::map<BigRational, BetaCache> caches_;
};

BigRational carlitz_beta(unsigned n, const QParam& q);

/// beta_{n,q}(x) = sum_l C(n,l) q^{lx} [x]_q^{n-l} beta_{l,q}.
BigRational beta_poly(unsigned n, BetaCache& cache, std::int64_t x);
BigRational beta_poly(unsigned n, const QParam& q, std::int64_t x);

/// beta_{n,Q}(y) where y enters only through qy = Q^y:
/// sum_l C(n,l) qy^l [y]_Q^{n-l} beta_{l,Q} with [y]_Q = (1 - qy)/(1 - Q).
/// Throws ArithmeticError when qy = 0.
BigRational beta_poly_at_power(unsigned n, BetaCache& cache, const BigRational& qy);
BigRational beta_poly_at_power(unsigned n, const QParam& q, const BigRational& qy);

/// Limit value of the q-integral of y -> q^{jy}:
/// lim_N [j+1]_{q^{p^N}} / [j+1]_q = (j + 1) / [j + 1]_q.
BigRational q_integral_exponential(std::uint64_t j, const QParam& q);

} // namespace qsym
