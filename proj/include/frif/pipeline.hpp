#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "frif/parse.hpp"
#include "frif/rb_global.hpp"
#include "frif/rb_local.hpp"
#include "frif/nonstationary.hpp"
#include "frif/quat_rb.hpp"

namespace frif {

// exit codes: 0 success, 1 certification failure, 2 parse/config error
inline constexpr int kExitOk = 0;
inline constexpr int kExitCertification = 1;
inline constexpr int kExitConfig = 2;

struct RunOptions {
    std::string command = "solve";  // check | solve | trajectory | quat
    std::string out_dir;            // prefix for relative export paths
    std::optional<double> eps;
    std::optional<int> depth;
    std::optional<int> resolution;
};

// The two-map demo operator on [0,1): l = x/3 and 2x/3 + 1/3 with
// s = (sin(x)/2, -2cos(x)/3); the continuous variant swaps in q = (x, 1-x)
// on the closed interval.
RBOperator sample_sine_operator(bool continuous);

// Operator construction from a parsed config (shared by commands and tests).
RBOperator build_global_operator(const ProblemConfig& cfg);
LocalRBOperator build_local_operator(const ProblemConfig& cfg);
OperatorSchedule build_schedule(const ProblemConfig& cfg);
QuatRBOperator build_quat_operator(const ProblemConfig& cfg);

int default_resolution(const ProblemConfig& cfg);

// Dispatch a config through the matching pipeline; prints a certification
// summary to `log` and writes the requested artifacts.
int run(const ProblemConfig& cfg, const RunOptions& opts, std::ostream& log);

// Write the full deterministic figure set (10 artifacts) into out_dir.
int run_figures(const std::string& out_dir, std::ostream& log);

}  // namespace frif
