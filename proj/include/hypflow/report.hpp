#pragma once

// CSV tables (17 significant digits, '\n' line endings) and file output.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypflow/flows.hpp"
#include "hypflow/two_point.hpp"

namespace hypflow {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string str() const;
};

/// Columns parameter, value, delta_to_prev (empty on the first row).
CsvTable flow_csv(const FlowReport& report);

/// Columns n, k, discrete, continuous, abs_error.
CsvTable convergence_csv(const ConvergenceTable& table);

/// Columns z_re, z_im, global_holds, infinitesimal_holds, infinitesimal_margin_min,
/// sup_ratio, witness_b_re, witness_b_im.
CsvTable region_csv(const std::vector<RegionCell>& cells);

/// Writes bytes verbatim. Throws IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace hypflow
