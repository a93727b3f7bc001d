#include "atomlight/output.hpp"

#include "atomlight/error.hpp"
#include "atomlight/units.hpp"

#include <cstdio>

namespace atomlight {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
    if (!out_) throw ValidationError("output: cannot write " + path.string());
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << csv_escape(fields[i]);
    }
    out_ << "\r\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_double(values[i]);
    }
    out_ << "\r\n";
}

void write_snapshot_csv(const std::filesystem::path& path, const FieldState& state, const Grid1D& grid) {
    std::vector<std::string> header = {"x [m]", "Re phi1 [m^-1/2]", "Im phi1 [m^-1/2]", "Re psi2 [m^-1/2]",
                                       "Im psi2 [m^-1/2]", "Re E [m^-1/2]", "Im E [m^-1/2]"};
    for (std::size_t k = 0; k < state.f_psi.size(); ++k) {
        const std::string n = std::to_string(k);
        header.push_back("Re f_psi" + n + " [m^-1/2]");
        header.push_back("Im f_psi" + n + " [m^-1/2]");
        header.push_back("Re f_e" + n + " [m^-1/2]");
        header.push_back("Im f_e" + n + " [m^-1/2]");
    }
    CsvWriter csv(path, header);
    auto si = [](cplx v) { return std::pair{units::from_envelope(v.real()), units::from_envelope(v.imag())}; };
    std::vector<double> row;
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        row.clear();
        row.push_back(grid.position(i));
        for (const Field* f : {&state.phi1, &state.psi2_mean, &state.e_mean}) {
            auto [re, im] = si((*f)[i]);
            row.push_back(re);
            row.push_back(im);
        }
        for (std::size_t k = 0; k < state.f_psi.size(); ++k) {
            auto [pr, pi] = si(state.f_psi[k][i]);
            auto [er, ei] = si(state.f_e[k][i]);
            row.insert(row.end(), {pr, pi, er, ei});
        }
        csv.row(row);
    }
}

void write_detector_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
    std::vector<std::string> header = {"t [s]", "Re e_mean [m^-1/2]", "Im e_mean [m^-1/2]"};
    const std::size_t columns = trajectory.detector.empty() ? 0 : trajectory.detector.front().f_e.size();
    for (std::size_t k = 0; k < columns; ++k) {
        header.push_back("Re f_e" + std::to_string(k) + " [m^-1/2]");
        header.push_back("Im f_e" + std::to_string(k) + " [m^-1/2]");
    }
    CsvWriter csv(path, header);
    std::vector<double> row;
    for (const auto& s : trajectory.detector) {
        row = {s.t * units::time, units::from_envelope(s.e_mean.real()), units::from_envelope(s.e_mean.imag())};
        for (const auto& v : s.f_e) {
            row.push_back(units::from_envelope(v.real()));
            row.push_back(units::from_envelope(v.imag()));
        }
        csv.row(row);
    }
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<GaussianSummary>& summaries) {
    CsvWriter csv(path, {"t [s]", "V(X+)", "V(X-)", "V(Y+)", "V(Y-)", "Cov(X+,Y+)", "Cov(X-,Y-)", "Vinf(X+)",
                         "Vinf(X-)", "product", "Vinf(Y+)", "Vinf(Y-)", "product_y", "<X+>", "<X->", "<Y+>",
                         "<Y->"});
    for (const auto& s : summaries) {
        csv.row(std::vector<double>{s.t, s.v_x_plus, s.v_x_minus, s.v_y_plus, s.v_y_minus, s.cov_plus,
                                    s.cov_minus, s.vinf_x_plus, s.vinf_x_minus, s.product_x, s.vinf_y_plus,
                                    s.vinf_y_minus, s.product_y, s.means[0], s.means[1], s.means[2], s.means[3]});
    }
}

} // namespace atomlight
