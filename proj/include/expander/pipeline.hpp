#pragma once

#include "expander/common.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace expander {

namespace exit_code {
constexpr int kOk = 0;
constexpr int kNotConverged = 2;
constexpr int kValidation = 3;
constexpr int kInternal = 4;
constexpr int kUsage = 64;
}  // namespace exit_code

struct RunConfig {
    std::string command;             // foliate | solve | verify | model | csf | sweep
    int k = 3;
    double R = 2.0;
    double s = 0.05;
    double epsilon_hole = -1.0;      // < 0: 0.02 R
    double tol = -1.0;               // < 0: 1e-3 (1 + R)
    int max_iter = 2000;
    std::string seed = "annulus_reflect";  // annulus_reflect | disk | big_double_sheet
    double q_size = 0.01;
    int refine = 1;
    std::string out = "run";
    std::string input;               // verify: mesh to check
    std::string s_grid = "-1:0.01:1";  // foliate and sweep, a:ds:b or comma list
    double r_max = 10.0;
    int resolution = 256;
    double strip_length = 4.0;
    double strip_cut = 0.25;
    double T = 10.0;
    int steps = 10;
    bool stability = false;
    bool cone = false;               // verify only; solve runs the cone checks for circle seeds
    int jobs = 1;
    bool verbose = false;

    double hole() const { return epsilon_hole < 0 ? 0.02 * R : epsilon_hole; }
    double tolerance() const { return tol < 0 ? 1e-3 * (1 + R) : tol; }
};

// Throws InvalidParameter naming the offending field.
void validate_config(const RunConfig& c);
std::vector<double> parse_s_grid(const std::string& spec);
nlohmann::ordered_json config_json(const RunConfig& c);

// Maps errors to exit codes: NotConverged 2, validation 3, anything else 4.
int run(const RunConfig& c);

}  // namespace expander
