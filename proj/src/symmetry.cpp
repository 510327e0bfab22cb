#include "qsym/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace qsym {

WeightVector::WeightVector(std::vector<std::uint64_t> w) : w_(std::move(w)) {
    if (w_.size() < 2) throw std::invalid_argument("weight vector needs n >= 2 entries");
    for (auto v : w_) {
        if (v < 1) throw std::invalid_argument("weights must be positive integers");
    }
}

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (auto i : images_) {
        if (i >= images_.size() || seen[i]) throw std::invalid_argument("not a permutation");
        seen[i] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return Permutation(std::move(v));
}

Permutation Permutation::from_one_based(const std::vector<std::size_t>& images) {
    std::vector<std::size_t> v;
    v.reserve(images.size());
    for (auto i : images) {
        if (i == 0) throw std::invalid_argument("one-based permutation image 0");
        v.push_back(i - 1);
    }
    return Permutation(std::move(v));
}

std::vector<Permutation> Permutation::all(std::size_t n) {
    std::vector<Permutation> out;
    auto v = identity(n).images_;
    do {
        out.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

std::vector<std::size_t> Permutation::one_based() const {
    std::vector<std::size_t> v(images_);
    for (auto& i : v) ++i;
    return v;
}

std::string Permutation::to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(images_[i] + 1);
    }
    return s + "]";
}

Permutation Permutation::inverse() const {
    std::vector<std::size_t> v(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) v[images_[i]] = i;
    return Permutation(std::move(v));
}

Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw std::invalid_argument("composing permutations of different degree");
    std::vector<std::size_t> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[b[i]];
    return Permutation(std::move(v));
}

WeightVector Permutation::apply(const WeightVector& w) const {
    if (w.size() != size()) throw std::invalid_argument("permutation degree does not match weight count");
    std::vector<std::uint64_t> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = w[images_[i]];
    return WeightVector(std::move(out));
}

void for_each_residue_tuple(std::span<const std::uint64_t> bounds,
                            const std::function<void(std::span<const std::uint64_t>)>& fn) {
    for (auto b : bounds) {
        if (b == 0) return;
    }
    std::vector<std::uint64_t> k(bounds.size(), 0);
    while (true) {
        fn(k);
        // Odometer with the last index fastest, which gives lexicographic order.
        std::size_t i = k.size();
        while (i > 0) {
            --i;
            if (++k[i] < bounds[i]) break;
            k[i] = 0;
            if (i == 0) return;
        }
        if (k.empty()) return;
    }
}

std::vector<std::vector<std::uint64_t>> residue_tuples(std::span<const std::uint64_t> bounds) {
    std::vector<std::vector<std::uint64_t>> out;
    for_each_residue_tuple(bounds, [&](std::span<const std::uint64_t> k) { out.emplace_back(k.begin(), k.end()); });
    return out;
}

std::vector<std::vector<std::uint64_t>> residue_tuples(const WeightVector& w, const Permutation& sigma) {
    const auto ws = sigma.apply(w).values();
    return residue_tuples(std::span<const std::uint64_t>(ws.data(), ws.size() - 1));
}

std::int64_t residue_weight(std::span<const std::uint64_t> weights, std::span<const std::uint64_t> k) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        std::int64_t cofactor = 1;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (i != j) cofactor = checked_mul(cofactor, static_cast<std::int64_t>(weights[i]));
        }
        s = checked_add(s, checked_mul(cofactor, static_cast<std::int64_t>(k[j])));
    }
    return s;
}

BigRational t_sum(unsigned m, unsigned l, const QParam& q, std::span<const std::uint64_t> weights) {
    if (l > m) throw ArithmeticError("t_sum needs l <= m");
    const auto weight_l = static_cast<std::int64_t>(l) + 1;
    BigRational total;
    for_each_residue_tuple(weights, [&](std::span<const std::uint64_t> k) {
        const std::int64_t s = residue_weight(weights, k);
        total += q.value().pow(checked_mul(weight_l, s)) * q_number(s, q).pow(m - l);
    });
    return total;
}

namespace {

/// The pieces every theorem expression shares for one sigma.
struct Layout {
    std::vector<std::uint64_t> head; // w_{sigma(1)}, ..., w_{sigma(n-1)}
    std::int64_t last;               // w_{sigma(n)}
    std::int64_t head_product;       // P = prod_{j<n} w_{sigma(j)}
};

Layout layout_for(const Permutation& sigma, const SymmetryInstance& inst) {
    const auto ws = sigma.apply(inst.weights).values();
    Layout out{std::vector<std::uint64_t>(ws.begin(), ws.end() - 1), static_cast<std::int64_t>(ws.back()), 1};
    for (auto w : out.head) out.head_product = checked_mul(out.head_product, static_cast<std::int64_t>(w));
    return out;
}

// Q^{w_n x + w_n sum_j k_j / w_j} with Q = q^P must be an integer power of q.
std::int64_t integral_exponent(const Layout& lay, std::int64_t x, std::span<const std::uint64_t> k,
                               std::int64_t s) {
    const std::int64_t exponent =
        checked_add(checked_mul(checked_mul(lay.head_product, lay.last), x), checked_mul(lay.last, s));
    BigRational offset(lay.last * x);
    for (std::size_t j = 0; j < k.size(); ++j) {
        offset += BigRational(BigInt(lay.last) * BigInt(static_cast<long>(k[j])),
                              BigInt(static_cast<long>(lay.head[j])));
    }
    if (offset * BigRational(lay.head_product) != BigRational(exponent)) {
        throw std::logic_error("non-integral q-exponent in theorem evaluation");
    }
    return exponent;
}

} // namespace

BigRational theorem2_value(const Permutation& sigma, const SymmetryInstance& inst, BetaCacheSet& caches) {
    const Layout lay = layout_for(sigma, inst);
    const QParam& q = inst.q;
    BetaCache& cache = caches.for_q(q.power(static_cast<std::uint64_t>(lay.head_product)));

    BigRational sum;
    for_each_residue_tuple(lay.head, [&](std::span<const std::uint64_t> k) {
        const std::int64_t s = residue_weight(lay.head, k);
        const std::int64_t exponent = integral_exponent(lay, inst.x, k, s);
        sum += q.value().pow(checked_mul(lay.last, s)) *
               beta_poly_at_power(inst.m, cache, q.value().pow(exponent));
    });
    return q_number(lay.head_product, q).pow(static_cast<std::int64_t>(inst.m) - 1) * sum;
}

BigRational theorem2_value(const Permutation& sigma, const SymmetryInstance& inst) {
    BetaCacheSet caches;
    return theorem2_value(sigma, inst, caches);
}

BigRational theorem3_value(const Permutation& sigma, const SymmetryInstance& inst, BetaCacheSet& caches) {
    const Layout lay = layout_for(sigma, inst);
    const QParam& q = inst.q;
    BetaCache& cache = caches.for_q(q.power(static_cast<std::uint64_t>(lay.head_product)));
    const QParam t_base = q.power(static_cast<std::uint64_t>(lay.last));
    const BigRational head_bracket = q_number(lay.head_product, q);
    const BigRational last_bracket = q_number(lay.last, q);
    const std::int64_t shifted_x = checked_mul(lay.last, inst.x);
    const auto m = static_cast<std::int64_t>(inst.m);

    BigRational total;
    for (unsigned l = 0; l <= inst.m; ++l) {
        const auto li = static_cast<std::int64_t>(l);
        total += BigRational(binomial(inst.m, l)) * head_bracket.pow(li - 1) * last_bracket.pow(m - li) *
                 beta_poly(l, cache, shifted_x) * t_sum(inst.m, l, t_base, lay.head);
    }
    return total;
}

BigRational theorem3_value(const Permutation& sigma, const SymmetryInstance& inst) {
    BetaCacheSet caches;
    return theorem3_value(sigma, inst, caches);
}

BigRational theorem1_coefficient(const Permutation& sigma, const SymmetryInstance& inst) {
    const Layout lay = layout_for(sigma, inst);
    const QParam& q = inst.q;
    const QParam big_q = q.power(static_cast<std::uint64_t>(lay.head_product));
    const std::int64_t total_product = checked_mul(lay.head_product, lay.last);
    const unsigned m = inst.m;

    // I_Q(Q^{jy}) for j = 0..m.
    std::vector<BigRational> moments;
    moments.reserve(m + 1);
    for (unsigned j = 0; j <= m; ++j) moments.push_back(q_integral_exponential(j, big_q));

    const BigRational scale = (BigRational(1) - q.value()).pow(-static_cast<std::int64_t>(m));
    BigRational sum;
    for_each_residue_tuple(lay.head, [&](std::span<const std::uint64_t> k) {
        const std::int64_t s = residue_weight(lay.head, k);
        const std::int64_t offset = checked_add(checked_mul(total_product, inst.x), checked_mul(lay.last, s));
        // [offset + P y]_q^m = (1-q)^{-m} sum_j C(m,j) (-q^offset)^j Q^{jy}
        const BigRational twist = -q.value().pow(offset);
        BigRational integral;
        BigRational twist_pow(1);
        for (unsigned j = 0; j <= m; ++j) {
            integral += BigRational(binomial(m, j)) * twist_pow * moments[j];
            twist_pow *= twist;
        }
        sum += q.value().pow(checked_mul(lay.last, s)) * scale * integral;
    });
    return sum / q_number(lay.head_product, q);
}

std::string to_string(TheoremKind kind) {
    switch (kind) {
    case TheoremKind::thm1: return "thm1";
    case TheoremKind::thm2: return "thm2";
    case TheoremKind::thm3: return "thm3";
    case TheoremKind::cross: return "cross";
    }
    return "?";
}

TheoremKind parse_theorem_kind(std::string_view text) {
    if (text == "thm1") return TheoremKind::thm1;
    if (text == "thm2") return TheoremKind::thm2;
    if (text == "thm3") return TheoremKind::thm3;
    if (text == "cross") return TheoremKind::cross;
    throw std::invalid_argument("unknown theorem kind '" + std::string(text) + "'");
}

namespace {

std::uint64_t factorial_capped(std::size_t n, std::uint64_t cap) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (f > cap / i) return cap + 1;
        f *= i;
    }
    return f;
}

void check_budget(const SymmetryInstance& inst, const VerifyOptions& options) {
    const std::size_t n = inst.weights.size();
    if (factorial_capped(n, options.permutation_budget) > options.permutation_budget) {
        throw BudgetError("n = " + std::to_string(n) + " needs n! evaluations, over the permutation budget of " +
                          std::to_string(options.permutation_budget));
    }
}

} // namespace

OrderResult evaluate_order(const SymmetryInstance& inst, const Evaluator& value, const Evaluator& companion,
                           const VerifyOptions& options) {
    check_budget(inst, options);
    const auto perms = Permutation::all(inst.weights.size());
    std::vector<std::optional<PermutationValue>> slots(perms.size());

    auto work = [&](std::size_t begin, std::size_t stride) {
        BetaCacheSet caches;
        for (std::size_t i = begin; i < perms.size(); i += stride) {
            PermutationValue pv{perms[i], value(perms[i], inst, caches), std::nullopt};
            if (companion) pv.companion = companion(perms[i], inst, caches);
            slots[i] = std::move(pv);
        }
    };

    const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(perms.size())));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }

    OrderResult out;
    out.m = inst.m;
    for (auto& slot : slots) out.values.push_back(std::move(*slot));
    for (const auto& pv : out.values) {
        if (pv.value != out.values.front().value) out.all_equal = false;
        if (pv.companion && *pv.companion != pv.value) out.companion_agrees = false;
    }
    return out;
}

VerificationReport make_report(TheoremKind kind, const SymmetryInstance& inst, std::vector<OrderResult> orders) {
    VerificationReport report{kind, inst, std::move(orders), true, std::nullopt};
    for (const auto& order : report.orders) {
        if (order.all_equal && order.companion_agrees) continue;
        report.verdict = false;
        if (report.first_mismatch) continue;
        const auto& ref = order.values.front();
        for (const auto& pv : order.values) {
            if (pv.value != ref.value) {
                report.first_mismatch = Mismatch{order.m, ref.sigma, pv.sigma, ref.value, pv.value, "permutation"};
                break;
            }
            if (pv.companion && *pv.companion != pv.value) {
                report.first_mismatch = Mismatch{order.m, pv.sigma, pv.sigma, pv.value, *pv.companion, "companion"};
                break;
            }
        }
    }
    return report;
}

VerificationReport verify_theorem(TheoremKind kind, const SymmetryInstance& inst, const VerifyOptions& options) {
    const Evaluator thm2 = [](const Permutation& s, const SymmetryInstance& i, BetaCacheSet& c) {
        return theorem2_value(s, i, c);
    };
    const Evaluator thm3 = [](const Permutation& s, const SymmetryInstance& i, BetaCacheSet& c) {
        return theorem3_value(s, i, c);
    };
    switch (kind) {
    case TheoremKind::thm1: return verify_theorem1(inst, options);
    case TheoremKind::thm2: return make_report(kind, inst, {evaluate_order(inst, thm2, nullptr, options)});
    case TheoremKind::thm3: return make_report(kind, inst, {evaluate_order(inst, thm3, nullptr, options)});
    case TheoremKind::cross: return make_report(kind, inst, {evaluate_order(inst, thm2, thm3, options)});
    }
    throw std::invalid_argument("unknown theorem kind");
}

VerificationReport verify_theorem1(const SymmetryInstance& inst, const VerifyOptions& options) {
    const Evaluator coefficient = [](const Permutation& s, const SymmetryInstance& i, BetaCacheSet&) {
        return theorem1_coefficient(s, i);
    };
    const Evaluator thm2 = [](const Permutation& s, const SymmetryInstance& i, BetaCacheSet& c) {
        return theorem2_value(s, i, c);
    };
    std::vector<OrderResult> orders;
    for (unsigned m = 0; m <= inst.m; ++m) {
        SymmetryInstance at_order = inst;
        at_order.m = m;
        orders.push_back(evaluate_order(at_order, coefficient, thm2, options));
    }
    return make_report(TheoremKind::thm1, inst, std::move(orders));
}

} // namespace qsym
