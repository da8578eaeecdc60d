#pragma once

#include <cstdint>
#include <istream>
#include <set>
#include <string>

#include "gbt/cut_function.hpp"
#include "gbt/rng.hpp"

namespace gbt {

/// Flat experiment configuration. The text form is one `key = value` per
/// line; `#` starts a comment and blank lines are ignored. Keys:
///
///     kind          constant | linear | sympow | asympow | custom
///     alpha         exponent at 0 (sympow, asympow)
///     alpha_prime   exponent at 1 (asympow; sympow copies alpha)
///     constant      value of a constant cut
///     custom_table  CSV file of `t,phi` rows for kind = custom
///     root_tol      implicit-solve tolerance
///     depth         tower depth
///     cells         Ulam cell count
///     ulam_steps    transfer-operator steps for measure decay
///     nmax          largest correlation lag
///     samples       Monte Carlo sample count
///     grid          1-D quadrature grid size
///     seed          random seed
///     threads       worker cap (0 = runtime default)
///     output_dir    directory for CSV and JSON artifacts
///     suites        space or comma separated subset of
///                   cut map tower ulam decay lowerbound decay2d
struct ExperimentConfig {
    std::string kind = "linear";
    double alpha = 1.0;
    double alpha_prime = 1.0;
    double constant = 0.5;
    std::string custom_table;
    double root_tol = 1e-12;
    std::size_t depth = 100000;
    std::size_t cells = std::size_t{1} << 14;
    std::size_t ulam_steps = 20000;
    std::size_t nmax = 2000;
    std::size_t samples = 1'000'000;
    std::size_t grid = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
    std::string output_dir = ".";
    std::set<std::string> suites{"cut", "map", "tower", "ulam", "decay", "lowerbound"};

    /// Applies one key/value pair; `line` is used in diagnostics (0 for flags).
    void set(const std::string& key, const std::string& value, int line = 0);
    /// Cross-field checks run after all assignments.
    void validate() const;
    bool suite(const std::string& name) const { return suites.count(name) != 0; }

    CutFunction make_cut() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace gbt
