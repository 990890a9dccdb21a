#include "hypflow/report.hpp"

#include <cstdio>
#include <fstream>

namespace hypflow {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::string CsvTable::str() const {
    std::string out;
    append_row(out, header);
    for (const auto& r : rows) append_row(out, r);
    return out;
}

CsvTable flow_csv(const FlowReport& report) {
    CsvTable t;
    t.header = {"parameter", "value", "delta_to_prev"};
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        const auto& s = report.samples[i];
        t.rows.push_back({fmt17(s.parameter), fmt17(s.value),
                          i == 0 ? std::string{} : fmt17(s.value - report.samples[i - 1].value)});
    }
    return t;
}

CsvTable convergence_csv(const ConvergenceTable& table) {
    CsvTable t;
    t.header = {"n", "k", "discrete", "continuous", "abs_error"};
    for (const auto& r : table.rows)
        t.rows.push_back({std::to_string(r.n), std::to_string(r.k), fmt17(r.discrete_value),
                          fmt17(r.continuous_value), fmt17(r.abs_error)});
    return t;
}

CsvTable region_csv(const std::vector<RegionCell>& cells) {
    CsvTable t;
    t.header = {"z_re",     "z_im",     "global_holds", "infinitesimal_holds", "infinitesimal_margin_min",
                "sup_ratio", "witness_b_re", "witness_b_im"};
    for (const auto& c : cells)
        t.rows.push_back({fmt17(c.z.real()), fmt17(c.z.imag()), flag(c.global_holds), flag(c.infinitesimal_holds),
                          fmt17(c.infinitesimal_margin_min), fmt17(c.sup_ratio), fmt17(c.witness_b.real()),
                          fmt17(c.witness_b.imag())});
    return t;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace hypflow
