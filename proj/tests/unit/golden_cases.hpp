#pragma once

#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "qsym/cli.hpp"

namespace qsym::testing {

struct GoldenCase {
    std::string name; // stdout is stored in <name>.json
    std::vector<std::string> args;
    int exit_code;
};

inline const std::vector<GoldenCase>& golden_cases() {
    static const std::vector<GoldenCase> cases{
        {"verify_thm2_collapse", {"verify", "thm2", "--n", "2", "--m", "3", "--x", "0", "--q", "2", "--w", "1,1"}, 0},
        {"verify_cross_grid_point", {"verify", "cross", "--n", "3", "--m", "4", "--x", "1", "--q", "3/5", "--w", "2,3,4"}, 0},
        {"verify_length_mismatch", {"verify", "thm2", "--n", "2", "--w", "1"}, 2},
        {"padic_eq6_p5", {"padic", "eq6", "--p", "5", "--q-offset", "1", "--n", "1", "--N-max", "6", "--precision", "12"}, 0},
        {"padic_eq7_p3_n0", {"padic", "eq7", "--p", "3", "--q-offset", "1", "--n", "0", "--N-max", "4", "--precision", "10"}, 0},
    };
    return cases;
}

inline std::string mask_timestamp(const std::string& text) {
    static const std::regex stamp(R"re("timestamp": "[^"]*")re");
    return std::regex_replace(text, stamp, R"("timestamp": "<masked>")");
}

inline std::string golden_path(const GoldenCase& c) { return std::string(QSYM_GOLDEN_DIR) + "/" + c.name + ".json"; }

inline bool read_file(const std::string& path, std::string& out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::ostringstream s;
    s << f.rdbuf();
    out = s.str();
    return true;
}

struct GoldenRun {
    int exit_code;
    std::string masked_stdout;
};

inline GoldenRun run_golden(const GoldenCase& c) {
    std::ostringstream out, err;
    const int code = qsym::cli::run(c.args, out, err);
    return {code, mask_timestamp(out.str())};
}

} // namespace qsym::testing
