#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsym/carlitz.hpp"
#include "qsym/qcalc.hpp"
#include "qsym/rational.hpp"

namespace qsym {

/// (w_1, ..., w_n) with n >= 2 and every w_j >= 1.
class WeightVector {
public:
    explicit WeightVector(std::vector<std::uint64_t> w);

    std::size_t size() const { return w_.size(); }
    std::uint64_t operator[](std::size_t i) const { return w_[i]; }
    const std::vector<std::uint64_t>& values() const { return w_; }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<std::uint64_t> w_;
};

/// A bijection of {0, ..., n-1}; io uses the one-based images sigma(1..n).
class Permutation {
public:
    /// Zero-based images; throws std::invalid_argument unless a bijection.
    explicit Permutation(std::vector<std::size_t> images);

    static Permutation identity(std::size_t n);
    static Permutation from_one_based(const std::vector<std::size_t>& images);
    /// All of S_n in lexicographic order.
    static std::vector<Permutation> all(std::size_t n);

    std::size_t size() const { return images_.size(); }
    std::size_t operator[](std::size_t i) const { return images_[i]; }
    std::vector<std::size_t> one_based() const;
    /// One-line notation "[3,1,2]" (not cycle notation).
    std::string to_string() const;

    Permutation inverse() const;
    /// (a * b)(i) = a(b(i)).
    friend Permutation operator*(const Permutation& a, const Permutation& b);

    /// (w_{sigma(1)}, ..., w_{sigma(n)}).
    WeightVector apply(const WeightVector& w) const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> images_;
};

struct SymmetryInstance {
    unsigned m = 0;     // series order (maximal order M for thm1)
    std::int64_t x = 0;
    QParam q;
    WeightVector weights;
};

/// All tuples (k_1, ..., k_r) with 0 <= k_i < bounds[i], lexicographic.
std::vector<std::vector<std::uint64_t>> residue_tuples(std::span<const std::uint64_t> bounds);

/// Residue tuples for the first n-1 weights under sigma.
std::vector<std::vector<std::uint64_t>> residue_tuples(const WeightVector& w, const Permutation& sigma);

/// Calls fn(k) for every residue tuple without materializing the list.
void for_each_residue_tuple(std::span<const std::uint64_t> bounds,
                            const std::function<void(std::span<const std::uint64_t>)>& fn);

/// S(k) = sum_j (prod_{i != j} w_i) k_j over the given weights.
std::int64_t residue_weight(std::span<const std::uint64_t> weights, std::span<const std::uint64_t> k);

/// T_{m,q}(w_1..w_r | l) = sum_k q^{(l+1) S(k)} [S(k)]_q^{m-l}, with 0^0 = 1.
/// Throws ArithmeticError when l > m.
BigRational t_sum(unsigned m, unsigned l, const QParam& q, std::span<const std::uint64_t> weights);

BigRational theorem2_value(const Permutation& sigma, const SymmetryInstance& inst, BetaCacheSet& caches);
BigRational theorem2_value(const Permutation& sigma, const SymmetryInstance& inst);

BigRational theorem3_value(const Permutation& sigma, const SymmetryInstance& inst, BetaCacheSet& caches);
BigRational theorem3_value(const Permutation& sigma, const SymmetryInstance& inst);

/// The t^m/m! coefficient of the generating q-integral, computed by
/// expanding [c + P y]_q^m into q-exponentials in y and integrating each
/// term exactly. Independent of the Carlitz recurrence.
BigRational theorem1_coefficient(const Permutation& sigma, const SymmetryInstance& inst);

enum class TheoremKind { thm1, thm2, thm3, cross };

std::string to_string(TheoremKind kind);
/// Accepts "thm1", "thm2", "thm3", "cross".
TheoremKind parse_theorem_kind(std::string_view text);

class BudgetError : public std::length_error {
public:
    using std::length_error::length_error;
};

struct PermutationValue {
    Permutation sigma;
    BigRational value;
    /// Second route for the same quantity: theorem3 for cross, theorem2 for thm1.
    std::optional<BigRational> companion;
};

struct OrderResult {
    unsigned m = 0;
    std::vector<PermutationValue> values;
    bool all_equal = true;
    bool companion_agrees = true;
};

struct Mismatch {
    unsigned m = 0;
    Permutation first;
    Permutation second;
    BigRational first_value;
    BigRational second_value;
    std::string reason; // "permutation" or "companion"
};

struct VerificationReport {
    TheoremKind kind;
    SymmetryInstance instance;
    std::vector<OrderResult> orders;
    bool verdict = true;
    std::optional<Mismatch> first_mismatch;
};

struct VerifyOptions {
    std::uint64_t permutation_budget = 720;
    unsigned threads = 1;
};

using Evaluator = std::function<BigRational(const Permutation&, const SymmetryInstance&, BetaCacheSet&)>;

/// Evaluates `value` (and `companion`, when given) for every sigma in S_n at
/// order inst.m and compares exactly. Values are in lexicographic order of
/// sigma regardless of threading.
OrderResult evaluate_order(const SymmetryInstance& inst, const Evaluator& value,
                           const Evaluator& companion, const VerifyOptions& options = {});

/// S_n invariance of theorem2_value or theorem3_value, or the cross identity
/// theorem2_value == theorem3_value per sigma.
/// For thm1 this forwards to verify_theorem1 with inst.m as the maximal order.
/// Throws BudgetError when n! exceeds the permutation budget.
VerificationReport verify_theorem(TheoremKind kind, const SymmetryInstance& inst,
                                  const VerifyOptions& options = {});

/// Coefficient-wise thm1 check for orders 0..inst.m: the coefficient must be
/// invariant over S_n and equal theorem2_value for each sigma.
VerificationReport verify_theorem1(const SymmetryInstance& inst, const VerifyOptions& options = {});

/// Assembles a report from per-order results (first mismatch, verdict).
VerificationReport make_report(TheoremKind kind, const SymmetryInstance& inst, std::vector<OrderResult> orders);

} // namespace qsym
