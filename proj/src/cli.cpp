#include "qsym/cli.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qsym/carlitz.hpp"

namespace qsym::cli {

std::vector<std::uint64_t> parse_weight_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        if (item.empty() || item.find_first_not_of("0123456789") != std::string_view::npos) {
            throw std::invalid_argument("malformed weight list '" + std::string(text) + "'");
        }
        out.push_back(std::stoull(std::string(item)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

Json certificate_header() {
    Json j;
    j["tool"] = kToolName;
    j["version"] = kVersion;
    j["timestamp"] = utc_timestamp();
    return j;
}

Json permutation_json(const Permutation& sigma) { return Json(sigma.one_based()); }

std::string companion_name(TheoremKind kind) { return kind == TheoremKind::thm1 ? "thm2" : "thm3"; }

std::string hex16(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

} // namespace

Json instance_to_json(const SymmetryInstance& inst, TheoremKind kind) {
    Json j;
    j["kind"] = to_string(kind);
    j["n"] = inst.weights.size();
    j["m"] = inst.m;
    j["x"] = inst.x;
    j["q"] = inst.q.value().to_string();
    j["w"] = inst.weights.values();
    return j;
}

Json report_to_json(const VerificationReport& report) {
    Json j = certificate_header();
    j["kind"] = to_string(report.kind);
    Json inst = instance_to_json(report.instance, report.kind);
    inst.erase("kind");
    j["instance"] = std::move(inst);
    Json orders = Json::array();
    for (const auto& order : report.orders) {
        Json o;
        o["m"] = order.m;
        o["all_equal"] = order.all_equal;
        const bool has_companion = !order.values.empty() && order.values.front().companion.has_value();
        if (has_companion) o["companion_agrees"] = order.companion_agrees;
        Json values = Json::array();
        for (const auto& pv : order.values) {
            Json v;
            v["sigma"] = permutation_json(pv.sigma);
            v["value"] = pv.value.to_string();
            if (pv.companion) v[companion_name(report.kind)] = pv.companion->to_string();
            values.push_back(std::move(v));
        }
        o["values"] = std::move(values);
        orders.push_back(std::move(o));
    }
    j["orders"] = std::move(orders);
    j["verdict"] = report.verdict;
    if (report.first_mismatch) {
        const auto& mm = *report.first_mismatch;
        j["mismatch"] = Json{{"m", mm.m},
                             {"reason", mm.reason},
                             {"sigma_a", permutation_json(mm.first)},
                             {"sigma_b", permutation_json(mm.second)},
                             {"value_a", mm.first_value.to_string()},
                             {"value_b", mm.second_value.to_string()}};
    } else {
        j["mismatch"] = nullptr;
    }
    return j;
}

PadicCheck parse_padic_check(std::string_view text) {
    if (text == "eq2") return PadicCheck::eq2;
    if (text == "eq6") return PadicCheck::eq6;
    if (text == "eq7") return PadicCheck::eq7;
    throw std::invalid_argument("unknown p-adic check '" + std::string(text) + "'");
}

std::string to_string(PadicCheck check) {
    switch (check) {
    case PadicCheck::eq2: return "eq2";
    case PadicCheck::eq6: return "eq6";
    case PadicCheck::eq7: return "eq7";
    }
    return "?";
}

std::int64_t padic_guard(unsigned n, std::int64_t shift_valuation) {
    return static_cast<std::int64_t>(n) * shift_valuation + 2;
}

namespace {

Json padic_parameters(const PadicRequest& r, const PadicContext& ctx) {
    Json j;
    j["check"] = to_string(r.check);
    j["p"] = r.p;
    j["q_offset"] = r.q_offset;
    j["q"] = ctx.q().to_string();
    j["n"] = r.n;
    if (r.check == PadicCheck::eq2) j["f"] = r.function;
    j["N_max"] = r.n_max;
    j["precision"] = r.precision;
    j["working_precision"] = ctx.precision();
    return j;
}

Json agreement_json(Json row, const Agreement& a) {
    row["agreement_valuation"] = a.valuation;
    row["to_precision"] = a.to_precision;
    return row;
}

} // namespace

PadicOutcome run_padic_check(const PadicRequest& request) {
    if (request.p < 3 || !is_prime(request.p)) {
        throw std::invalid_argument("p must be an odd prime (got " + std::to_string(request.p) + ")");
    }
    if (request.q_offset == 0) throw std::invalid_argument("q offset must be nonzero");
    if (request.n_max < 1) throw std::invalid_argument("N-max must be >= 1");
    if (request.precision < 1) throw std::invalid_argument("precision must be >= 1");
    if (request.function != "monomial" && request.function != "exp") {
        throw std::invalid_argument("function must be 'monomial' or 'exp'");
    }

    const std::int64_t shift_valuation = 1 + p_valuation(BigInt(request.q_offset), request.p);
    const bool exponential = request.check == PadicCheck::eq2 && request.function == "exp";
    const unsigned degree = exponential ? 0 : request.n;
    const PadicContext ctx(request.p,
                           working_precision(request.precision, request.n_max, degree, shift_valuation),
                           BigInt(request.q_offset));
    const std::int64_t guard = padic_guard(degree, shift_valuation);

    PadicOutcome outcome;
    outcome.body = certificate_header();
    outcome.body["parameters"] = padic_parameters(request, ctx);
    outcome.body["guard"] = guard;
    bool ok = true;
    Json rows = Json::array();

    if (request.check == PadicCheck::eq6) {
        const auto report = verify_integral_representation(request.n, request.n_max, ctx);
        outcome.body["beta"] = report.beta.to_string();
        for (const auto& row : report.rows) {
            Json r;
            r["N"] = row.N;
            r["partial"] = row.partial.representative().to_string();
            r["absolute_precision"] = row.partial.absolute_precision();
            r = agreement_json(std::move(r), row.distance);
            if (row.literal_agrees) {
                r["literal_agrees"] = *row.literal_agrees;
                ok = ok && *row.literal_agrees;
            }
            ok = ok && row.distance.valuation >= static_cast<std::int64_t>(row.N) - guard;
            rows.push_back(std::move(r));
        }
        ok = ok && report.non_decreasing;
        outcome.body["non_decreasing"] = report.non_decreasing;
    } else {
        const BigRational q = ctx.q_rational();
        const QExpPoly f = exponential ? QExpPoly::exponential(request.n) : q_monomial(request.n, q);
        const BigRational rhs = functional_equation_rhs(f, q);
        outcome.body["rhs"] = rhs.to_string();
        if (request.check == PadicCheck::eq7) {
            const BigRational expected = request.n == 0   ? q - BigRational(1)
                                         : request.n == 1 ? BigRational(1)
                                                          : BigRational(0);
            outcome.body["expected"] = expected.to_string();
            ok = ok && rhs == expected;
        }
        bool non_decreasing = true;
        std::int64_t previous = std::numeric_limits<std::int64_t>::min();
        for (unsigned N = 1; N <= request.n_max; ++N) {
            const auto row = verify_functional_equation(f, N, ctx);
            Json r;
            r["N"] = N;
            r["lhs"] = row.lhs.representative().to_string();
            r["absolute_precision"] = row.lhs.absolute_precision();
            r["paths_agree"] = row.paths_agree;
            r = agreement_json(std::move(r), row.residual);
            rows.push_back(std::move(r));
            ok = ok && row.paths_agree && row.residual.valuation >= static_cast<std::int64_t>(N) - guard;
            if (request.check == PadicCheck::eq7 && request.n == 0) ok = ok && row.residual.to_precision;
            if (row.residual.valuation < previous) non_decreasing = false;
            previous = row.residual.valuation;
        }
        ok = ok && non_decreasing;
        outcome.body["non_decreasing"] = non_decreasing;
    }
    outcome.body["rows"] = std::move(rows);
    outcome.body["verdict"] = ok;
    outcome.verdict = ok;
    return outcome;
}

namespace {

IntRange parse_range(const nlohmann::json& config, const char* key, IntRange fallback) {
    if (!config.contains(key)) return fallback;
    const auto& v = config.at(key);
    IntRange r;
    if (v.is_number_integer()) {
        r.min = r.max = v.get<std::int64_t>();
    } else {
        r.min = v.at("min").get<std::int64_t>();
        r.max = v.at("max").get<std::int64_t>();
    }
    if (r.min > r.max) throw std::invalid_argument(std::string("empty range for '") + key + "'");
    return r;
}

} // namespace

SweepConfig parse_sweep_config(const nlohmann::json& config) {
    try {
        SweepConfig c;
        c.kind = parse_theorem_kind(config.at("kind").get<std::string>());
        c.n = parse_range(config, "n", c.n);
        c.m = parse_range(config, "m", c.m);
        c.x = parse_range(config, "x", c.x);
        c.weight = parse_range(config, "weight", c.weight);
        c.q = config.at("q").get<std::vector<std::string>>();
        c.budget = config.value("budget", c.budget);
        c.output_dir = config.value("output_dir", c.output_dir.string());

        if (c.q.empty()) throw std::invalid_argument("q list is empty");
        for (const auto& q : c.q) QParam::parse(q);
        if (c.n.min < 2) throw std::invalid_argument("n must be >= 2");
        if (c.m.min < 0) throw std::invalid_argument("m must be >= 0");
        if (c.weight.min < 1) throw std::invalid_argument("weights must be >= 1");
        std::uint64_t factorial = 1;
        for (std::int64_t i = 2; i <= c.n.max; ++i) factorial *= static_cast<std::uint64_t>(i);
        if (c.budget < factorial) throw std::invalid_argument("permutation budget is below n!");

        if (config.contains("padic")) {
            for (const auto& item : config.at("padic")) {
                PadicRequest r;
                r.check = parse_padic_check(item.at("check").get<std::string>());
                r.p = item.at("p").get<long>();
                r.q_offset = item.value("q_offset", r.q_offset);
                r.n = item.value("n", r.n);
                r.n_max = item.value("N_max", r.n_max);
                r.precision = item.value("precision", r.precision);
                r.function = item.value("f", r.function);
                if (r.p < 3 || !is_prime(r.p)) throw std::invalid_argument("padic p must be an odd prime");
                c.padic.push_back(std::move(r));
            }
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad sweep config: ") + e.what());
    } catch (const ArithmeticError& e) {
        throw std::invalid_argument(std::string("bad sweep config: ") + e.what());
    }
}

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp);
        f << text;
        if (!f) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void increment_tuple(std::vector<std::uint64_t>& w, std::uint64_t lo, std::uint64_t hi, bool& done) {
    std::size_t i = w.size();
    while (i > 0) {
        --i;
        if (w[i] < hi) {
            ++w[i];
            return;
        }
        w[i] = lo;
    }
    done = true;
}

struct SweepTask {
    std::string label;
    std::function<std::pair<Json, bool>()> run;
    std::string file_stem;
};

} // namespace

SweepSummary run_sweep(const SweepConfig& config, unsigned threads) {
    std::vector<SweepTask> tasks;
    for (std::int64_t n = config.n.min; n <= config.n.max; ++n) {
        const auto lo = static_cast<std::uint64_t>(config.weight.min);
        const auto hi = static_cast<std::uint64_t>(config.weight.max);
        std::vector<std::uint64_t> w(static_cast<std::size_t>(n), lo);
        for (bool done = false; !done; increment_tuple(w, lo, hi, done)) {
            for (std::int64_t m = config.m.min; m <= config.m.max; ++m) {
                for (std::int64_t x = config.x.min; x <= config.x.max; ++x) {
                    for (const auto& q_text : config.q) {
                        SymmetryInstance inst{static_cast<unsigned>(m), x, QParam::parse(q_text), WeightVector(w)};
                        const Json params = instance_to_json(inst, config.kind);
                        std::ostringstream label;
                        label << to_string(config.kind) << " n=" << n << " m=" << m << " x=" << x << " q=" << q_text
                              << " w=" << params["w"].dump();
                        const auto kind = config.kind;
                        VerifyOptions options;
                        options.permutation_budget = config.budget;
                        tasks.push_back({label.str(),
                                         [inst, kind, options] {
                                             const auto report = verify_theorem(kind, inst, options);
                                             return std::pair{report_to_json(report), report.verdict};
                                         },
                                         to_string(config.kind) + "-" + hex16(fnv1a64(params.dump()))});
                    }
                }
            }
        }
    }
    for (const auto& request : config.padic) {
        const PadicContext probe(request.p, 1, BigInt(request.q_offset));
        Json params = padic_parameters(request, probe);
        params.erase("working_precision");
        std::ostringstream label;
        label << "padic " << params.dump();
        tasks.push_back({label.str(),
                         [request] {
                             auto outcome = run_padic_check(request);
                             return std::pair{std::move(outcome.body), outcome.verdict};
                         },
                         "padic-" + to_string(request.check) + "-" + hex16(fnv1a64(params.dump()))});
    }

    std::filesystem::create_directories(config.output_dir);
    SweepSummary summary;
    summary.points.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                auto [body, ok] = tasks[i].run();
                const auto path = config.output_dir / (tasks[i].file_stem + ".json");
                write_atomically(path, body.dump(2) + "\n");
                summary.points[i] = {tasks[i].label, path.string(), ok};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < std::max(1U, threads); ++t) pool.emplace_back(worker);
    }
    if (first_error) std::rethrow_exception(first_error);
    for (const auto& p : summary.points) (p.passed ? summary.passed : summary.failed)++;
    return summary;
}

namespace {

int usage_error(std::ostream& err, const std::string& message) {
    err << "error: " << message << "\n";
    return kUsage;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Carlitz q-Bernoulli values, S_n symmetry verification and p-adic q-integral checks",
                 std::string(kToolName)};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    unsigned n = 0;
    unsigned l = 0;
    unsigned m = 0;
    std::int64_t x = 0;
    std::string q_text;
    std::string w_text;
    std::string kind_text;
    std::uint64_t budget = 720;
    unsigned threads = 1;

    auto* beta = app.add_subcommand("beta", "Carlitz q-Bernoulli number beta_{n,q}");
    beta->add_option("--n", n, "index n >= 0")->required();
    beta->add_option("--q", q_text, "rational q, not 0 or +-1")->required();

    auto* beta_poly_cmd = app.add_subcommand("beta-poly", "q-Bernoulli polynomial beta_{n,q}(x) at integer x");
    beta_poly_cmd->add_option("--n", n)->required();
    beta_poly_cmd->add_option("--q", q_text)->required();
    beta_poly_cmd->add_option("--x", x)->required();

    auto* tsum = app.add_subcommand("tsum", "T_{m,q}(w_1..w_r | l)");
    tsum->add_option("--m", m)->required();
    tsum->add_option("--l", l)->required();
    tsum->add_option("--q", q_text)->required();
    tsum->add_option("--w", w_text, "comma-separated weights")->required();

    auto* verify = app.add_subcommand("verify", "Check S_n invariance of a theorem expression");
    verify->add_option("kind", kind_text, "thm1 | thm2 | thm3 | cross")
        ->required()
        ->check(CLI::IsMember({"thm1", "thm2", "thm3", "cross"}));
    verify->add_option("--n", n, "number of weights")->required();
    verify->add_option("--m,--M", m, "series order (maximal order for thm1)");
    verify->add_option("--x", x);
    verify->add_option("--q", q_text);
    verify->add_option("--w", w_text, "comma-separated weights")->required();
    verify->add_option("--budget", budget, "maximal number of permutations");
    verify->add_option("--threads", threads);

    std::string check_text;
    PadicRequest padic_request;
    auto* padic = app.add_subcommand("padic", "p-adic q-integral checks");
    padic->add_option("check", check_text, "eq2 | eq6 | eq7")->required()->check(CLI::IsMember({"eq2", "eq6", "eq7"}));
    padic->add_option("--p", padic_request.p, "odd prime")->required();
    padic->add_option("--q-offset", padic_request.q_offset, "q = 1 + p * offset");
    padic->add_option("--n", padic_request.n);
    padic->add_option("--N-max", padic_request.n_max);
    padic->add_option("--precision", padic_request.precision, "target precision in digits");
    padic->add_option("--f", padic_request.function, "eq2 function: monomial ([x]_q^n) or exp (q^{nx})");

    std::string config_path;
    unsigned sweep_threads = std::max(1U, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "Run a verification grid and write certificates");
    sweep->add_option("config", config_path, "JSON sweep configuration")->required();
    sweep->add_option("--threads", sweep_threads);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kVerified : kUsage;
    }

    try {
        if (beta->parsed()) {
            const QParam q = QParam::parse(q_text);
            Json j;
            j["n"] = n;
            j["q"] = q.value().to_string();
            j["beta"] = carlitz_beta(n, q).to_string();
            out << j.dump() << "\n";
            return kVerified;
        }
        if (beta_poly_cmd->parsed()) {
            const QParam q = QParam::parse(q_text);
            Json j;
            j["n"] = n;
            j["q"] = q.value().to_string();
            j["x"] = x;
            j["value"] = beta_poly(n, q, x).to_string();
            out << j.dump() << "\n";
            return kVerified;
        }
        if (tsum->parsed()) {
            const QParam q = QParam::parse(q_text);
            const auto w = parse_weight_list(w_text);
            for (auto v : w) {
                if (v < 1) return usage_error(err, "weights must be positive");
            }
            Json j;
            j["m"] = m;
            j["l"] = l;
            j["q"] = q.value().to_string();
            j["w"] = w;
            j["value"] = t_sum(m, l, q, w).to_string();
            out << j.dump() << "\n";
            return kVerified;
        }
        if (verify->parsed()) {
            const auto w = parse_weight_list(w_text);
            if (w.size() != n) {
                return usage_error(err, "--w has " + std::to_string(w.size()) + " entries but --n is " +
                                            std::to_string(n));
            }
            if (q_text.empty()) return usage_error(err, "--q is required");
            const SymmetryInstance inst{m, x, QParam::parse(q_text), WeightVector(w)};
            VerifyOptions options;
            options.permutation_budget = budget;
            options.threads = threads;
            const auto report = verify_theorem(parse_theorem_kind(kind_text), inst, options);
            out << report_to_json(report).dump(2) << "\n";
            if (!report.verdict) {
                const auto& mm = *report.first_mismatch;
                err << "falsified at m=" << mm.m << ": sigma " << mm.first.to_string() << " -> "
                    << mm.first_value.to_string() << " vs sigma " << mm.second.to_string() << " -> "
                    << mm.second_value.to_string() << " (" << mm.reason << ")\n";
                return kFalsified;
            }
            return kVerified;
        }
        if (padic->parsed()) {
            padic_request.check = parse_padic_check(check_text);
            const auto outcome = run_padic_check(padic_request);
            out << outcome.body.dump(2) << "\n";
            if (!outcome.verdict) {
                err << "p-adic contract failed\n";
                return kFalsified;
            }
            return kVerified;
        }
        if (sweep->parsed()) {
            std::ifstream f(config_path);
            if (!f) return usage_error(err, "cannot open config '" + config_path + "'");
            nlohmann::json raw;
            try {
                raw = nlohmann::json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                return usage_error(err, std::string("config is not valid JSON: ") + e.what());
            }
            SweepConfig config = parse_sweep_config(raw);
            if (const char* dir = std::getenv("QSYM_OUT_DIR"); dir && *dir) config.output_dir = dir;
            const auto summary = run_sweep(config, sweep_threads);
            for (const auto& p : summary.points) {
                if (!p.passed) out << "FAIL " << p.label << " " << p.file << "\n";
            }
            out << summary.passed << " passed, " << summary.failed << " failed\n";
            return summary.failed == 0 ? kVerified : kFalsified;
        }
    } catch (const BudgetError& e) {
        return usage_error(err, e.what());
    } catch (const std::invalid_argument& e) {
        return usage_error(err, e.what());
    } catch (const std::domain_error& e) {
        return usage_error(err, e.what());
    } catch (const PrecisionError& e) {
        return usage_error(err, e.what());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return usage_error(err, "no command given");
}

} // namespace qsym::cli
