#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbt/config.hpp"
#include "gbt/cut_function.hpp"
#include "gbt/power_law.hpp"

namespace gbt {

/// Round-trip decimal form of a double ("%.17g"), so CSV output is stable.
std::string format_real(double x);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    void row(std::initializer_list<double> values);
    /// First column is an integer index.
    void row(std::size_t n, std::initializer_list<double> values);

private:
    std::ostream& out_;
    std::size_t columns_;
};

nlohmann::ordered_json to_json(const PowerLawFit& fit);
nlohmann::ordered_json to_json(const CutFunction& cut);
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// Writes `j` with two-space indentation and a trailing newline.
void write_json(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace gbt
