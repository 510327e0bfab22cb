#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsym/padic.hpp"
#include "qsym/symmetry.hpp"

namespace qsym::cli {

inline constexpr std::string_view kToolName = "qsym";
inline constexpr std::string_view kVersion = "0.1.0";

/// Exit codes: verified, falsified, usage or input error.
enum ExitCode : int { kVerified = 0, kFalsified = 1, kUsage = 2 };

using Json = nlohmann::ordered_json;

/// Runs one command line (without the program name). Certificates and
/// values go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1,2,3" -> {1, 2, 3}; throws std::invalid_argument on malformed lists.
std::vector<std::uint64_t> parse_weight_list(std::string_view text);

std::string utc_timestamp();
std::uint64_t fnv1a64(std::string_view bytes);

/// Certificate body for a symmetry verification.
Json report_to_json(const VerificationReport& report);
Json instance_to_json(const SymmetryInstance& inst, TheoremKind kind);

enum class PadicCheck { eq2, eq6, eq7 };
PadicCheck parse_padic_check(std::string_view text);
std::string to_string(PadicCheck check);

struct PadicRequest {
    PadicCheck check = PadicCheck::eq6;
    long p = 5;
    std::int64_t q_offset = 1;
    unsigned n = 1;
    unsigned n_max = 6;
    std::int64_t precision = 12;
    /// eq2 only: "monomial" ([x]_q^n) or "exp" (q^{nx}).
    std::string function = "monomial";
};

/// Guard g in the contract v_N >= N - g: n v_p(1 - q) + 2.
std::int64_t padic_guard(unsigned n, std::int64_t shift_valuation);

struct PadicOutcome {
    Json body;
    bool verdict = false;
};

PadicOutcome run_padic_check(const PadicRequest& request);

struct IntRange {
    std::int64_t min = 0;
    std::int64_t max = 0;
};

struct SweepConfig {
    TheoremKind kind = TheoremKind::thm2;
    IntRange n{2, 2};
    IntRange m{0, 0};
    IntRange x{0, 0};
    std::vector<std::string> q;
    IntRange weight{1, 1};
    std::uint64_t budget = 720;
    std::vector<PadicRequest> padic;
    std::filesystem::path output_dir = "certificates";
};

/// Throws std::invalid_argument on a malformed or empty configuration.
SweepConfig parse_sweep_config(const nlohmann::json& config);

struct SweepPointResult {
    std::string label;
    std::string file;
    bool passed = false;
};

struct SweepSummary {
    std::vector<SweepPointResult> points; // in grid order
    std::size_t passed = 0;
    std::size_t failed = 0;
};

SweepSummary run_sweep(const SweepConfig& config, unsigned threads);

} // namespace qsym::cli
