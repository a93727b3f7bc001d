#pragma once

#include "atomlight/quantum_stats.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace atomlight {

// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

// RFC 4180 writer: CRLF records, fields quoted only when they need it.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
};

std::string csv_escape(const std::string& field);

// x and the real/imaginary parts of phi1, psi2_mean, e_mean and every
// fluctuation column, converted to SI.
void write_snapshot_csv(const std::filesystem::path& path, const FieldState& state, const Grid1D& grid);

// t, e_mean and every f_e column at the detector plane.
void write_detector_csv(const std::filesystem::path& path, const Trajectory& trajectory);

// One row per evaluation sample.
void write_summary_csv(const std::filesystem::path& path, const std::vector<GaussianSummary>& summaries);

} // namespace atomlight
