#include "atomlight/quantum_stats.hpp"

#include "atomlight/error.hpp"
#include "atomlight/units.hpp"

#include <algorithm>
#include <cmath>

namespace atomlight {

Eigen::Matrix2d input_covariance(double r, double theta_sq) {
    if (r < 0.0) throw ValidationError("input_covariance: r must be non-negative");
    const double half = 0.5 * theta_sq;
    Eigen::Matrix2d rot;
    rot << std::cos(half), -std::sin(half), std::sin(half), std::cos(half);
    const Eigen::Matrix2d squeezed = Eigen::Vector2d(std::exp(-2.0 * r), std::exp(2.0 * r)).asDiagonal();
    return rot * squeezed * rot.transpose();
}

double OutputModes::max_column_weight() const {
    double w = 0.0;
    for (const auto& c : columns) w = std::max(w, std::norm(c.alpha_psi) + std::norm(c.alpha_e));
    return w;
}

namespace {

struct OpticalWindow {
    long first = 0; // detector sample index
    long last = 0;  // one past
    double dt = 0.0;
};

cplx window_overlap(const std::vector<cplx>& field, std::span<const cplx> lo, double dx) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < field.size(); ++j) sum += std::conj(lo[j]) * field[j];
    return sum * dx;
}

} // namespace

std::vector<OutputModes> output_overlaps(const Trajectory& trajectory, const Scenario& scenario) {
    const auto& g = scenario.grid;
    const auto& d = scenario.detection;
    const auto& p = scenario.params;
    const double dx = units::to_length(g.dx());
    const double dt = units::to_time(g.dt);
    const double c = units::to_speed(units::c);
    const double v = units::to_speed(p.atom_speed());
    const double lo_lab = d.lo_wavenumber != 0.0 ? d.lo_wavenumber : p.kick();
    const double k_lo = units::to_wavenumber(lo_lab - p.kick());

    std::vector<OutputModes> result;
    result.reserve(trajectory.windows.size());
    for (const auto& w : trajectory.windows) {
        const std::size_t points = w.psi_mean.size();
        if (points == 0) throw ValidationError("output_overlaps: atomic window holds no grid points");
        if (trajectory.window_begin + points > g.n_points)
            throw ValidationError("output_overlaps: atomic window outside the grid");

        // Plane-wave LO without its phase, normalized on the discrete window.
        std::vector<cplx> lo(points);
        const double amp = 1.0 / std::sqrt(static_cast<double>(points) * dx);
        for (std::size_t j = 0; j < points; ++j) {
            const double x = units::to_length(g.position(trajectory.window_begin + j));
            lo[j] = amp * std::exp(cplx(0.0, k_lo * x));
        }

        // Light that met the atoms now at x left the condensate at t - x/v.
        const double x1 = units::to_length(g.position(trajectory.window_begin));
        const double x2 = x1 + static_cast<double>(points) * dx;
        OpticalWindow win;
        win.dt = dt;
        win.first = std::lround((w.t - x2 / v) / dt);
        win.last = std::lround((w.t - x1 / v) / dt);
        if (win.last <= win.first) throw ValidationError("output_overlaps: optical window is empty");
        if (win.last > static_cast<long>(trajectory.detector.size()))
            throw ValidationError("output_overlaps: optical window extends past the detector record");
        const double u_amp = 1.0 / std::sqrt(static_cast<double>(win.last - win.first) * dt);

        auto optical = [&](auto&& value) {
            cplx sum = 0.0;
            for (long n = std::max(0L, win.first); n < win.last; ++n) sum += value(trajectory.detector[n]);
            return std::sqrt(c) * u_amp * dt * sum;
        };

        OutputModes out;
        out.t = w.t * units::time;
        const cplx mean_psi0 = window_overlap(w.psi_mean, lo, dx);
        const cplx mean_e0 = optical([](const DetectorSample& s) { return s.e_mean; });
        out.lo_phase_atom = d.lo_phase_atom;
        out.lo_phase_light = d.lo_phase_light;
        if (d.optimize_lo_phase) {
            if (std::abs(mean_psi0) > 0.0) out.lo_phase_atom = std::arg(mean_psi0);
            if (std::abs(mean_e0) > 0.0) out.lo_phase_light = std::arg(mean_e0);
        }
        const cplx rot_atom = std::exp(cplx(0.0, -out.lo_phase_atom));
        const cplx rot_light = std::exp(cplx(0.0, -out.lo_phase_light));
        out.mean_psi = rot_atom * mean_psi0;
        out.mean_e = rot_light * mean_e0;

        out.columns.resize(w.f_psi.size());
        for (std::size_t k = 0; k < w.f_psi.size(); ++k) {
            out.columns[k].alpha_psi = rot_atom * window_overlap(w.f_psi[k], lo, dx);
            out.columns[k].alpha_e = rot_light * optical([k](const DetectorSample& s) { return s.f_e[k]; });
        }
        result.push_back(std::move(out));
    }
    return result;
}

GaussianSummary assemble_covariance(const OutputModes& modes, const Eigen::Matrix2d& sigma_in, double vacuum) {
    GaussianSummary s;
    s.t = modes.t;
    s.sigma = vacuum * Eigen::Matrix4d::Identity();
    const Eigen::Matrix2d excess = sigma_in - Eigen::Matrix2d::Identity();
    for (const auto& col : modes.columns) {
        Eigen::Matrix<double, 4, 2> m;
        const cplx a = col.alpha_psi;
        const cplx b = col.alpha_e;
        m << a.real(), -a.imag(),
             a.imag(), a.real(),
             b.real(), -b.imag(),
             b.imag(), b.real();
        s.sigma += m * excess * m.transpose();
    }
    s.means = {2.0 * modes.mean_psi.real(), 2.0 * modes.mean_psi.imag(), 2.0 * modes.mean_e.real(),
               2.0 * modes.mean_e.imag()};
    s.v_x_plus = s.sigma(0, 0);
    s.v_x_minus = s.sigma(1, 1);
    s.v_y_plus = s.sigma(2, 2);
    s.v_y_minus = s.sigma(3, 3);
    s.cov_plus = s.sigma(0, 2);
    s.cov_minus = s.sigma(1, 3);
    s.uncertainty_x = s.v_x_plus * s.v_x_minus;
    s.uncertainty_y = s.v_y_plus * s.v_y_minus;
    return s;
}

GaussianSummary epr_inferred(GaussianSummary s) {
    auto infer = [](double v, double cov, double other) { return other > 0.0 ? v - cov * cov / other : v; };
    s.vinf_x_plus = infer(s.v_x_plus, s.cov_plus, s.v_y_plus);
    s.vinf_x_minus = infer(s.v_x_minus, s.cov_minus, s.v_y_minus);
    s.vinf_y_plus = infer(s.v_y_plus, s.cov_plus, s.v_x_plus);
    s.vinf_y_minus = infer(s.v_y_minus, s.cov_minus, s.v_x_minus);
    s.product_x = s.vinf_x_plus * s.vinf_x_minus;
    s.product_y = s.vinf_y_plus * s.vinf_y_minus;
    s.entangled = s.product_x < 1.0 || s.product_y < 1.0;
    return s;
}

Eigen::Vector2d symplectic_eigenvalues(const Eigen::Matrix4d& sigma) {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    // i*Omega*sigma has real eigenvalues +-nu_j.
    const Eigen::Matrix4cd m = std::complex<double>(0.0, 1.0) * (omega * sigma).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m, false);
    std::array<double, 4> ev{};
    for (int i = 0; i < 4; ++i) ev[i] = std::abs(solver.eigenvalues()[i].real());
    std::sort(ev.begin(), ev.end());
    return {0.5 * (ev[0] + ev[1]), 0.5 * (ev[2] + ev[3])};
}

std::vector<double> commutator_norm(const Trajectory& trajectory, const Scenario& scenario) {
    const auto& s = trajectory.final_state;
    const double dx = units::to_length(scenario.grid.dx());
    std::vector<double> norms(s.f_psi.size());
    for (std::size_t k = 0; k < s.f_psi.size(); ++k) {
        double atoms = 0.0;
        double light = 0.0;
        for (const auto& v : s.f_psi[k]) atoms += std::norm(v);
        if (k < s.f_e.size())
            for (const auto& v : s.f_e[k]) light += std::norm(v);
        const auto& ledger = s.column_ledgers[k];
        norms[k] = (atoms + light) * dx + ledger.out + ledger.absorbed;
    }
    return norms;
}

std::vector<GaussianSummary> summarize(const Trajectory& trajectory, const Scenario& scenario) {
    const Eigen::Matrix2d sigma_in = input_covariance(scenario.params.r, scenario.params.theta_sq);
    std::vector<GaussianSummary> out;
    for (const auto& modes : output_overlaps(trajectory, scenario))
        out.push_back(epr_inferred(assemble_covariance(modes, sigma_in)));
    return out;
}

} // namespace atomlight
