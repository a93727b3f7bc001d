#include "atomlight/oracle.hpp"

#include "atomlight/error.hpp"

#include <cmath>

namespace atomlight {

GaussianSummary beamsplitter_summary(const BeamSplitterCase& bs) {
    if (bs.eta < 0.0 || bs.eta > 1.0) throw ValidationError("beamsplitter: eta must lie in [0, 1]");
    if (bs.r < 0.0) throw ValidationError("beamsplitter: r must be non-negative");

    // Input quadrature moments of the squeezed port, written out explicitly.
    const double sq = std::exp(-2.0 * bs.r);
    const double anti = std::exp(2.0 * bs.r);
    // Half-angle form: (sq + anti)/2 + (sq - anti)cos(theta)/2 cancels badly at large r.
    const double ch = std::cos(0.5 * bs.theta_sq);
    const double sh = std::sin(0.5 * bs.theta_sq);
    const double in_pp = sq * ch * ch + anti * sh * sh;
    const double in_mm = sq * sh * sh + anti * ch * ch;
    const double in_pm = (sq - anti) * ch * sh;

    const double t = bs.eta;
    const double rt = 1.0 - bs.eta;
    const double cross = std::sqrt(t * rt);

    GaussianSummary s;
    s.v_x_plus = 1.0 + t * (in_pp - 1.0);
    s.v_x_minus = 1.0 + t * (in_mm - 1.0);
    s.v_y_plus = 1.0 + rt * (in_pp - 1.0);
    s.v_y_minus = 1.0 + rt * (in_mm - 1.0);
    s.cov_plus = cross * (in_pp - 1.0);
    s.cov_minus = cross * (in_mm - 1.0);

    s.sigma << s.v_x_plus, t * in_pm, s.cov_plus, cross * in_pm,
               t * in_pm, s.v_x_minus, cross * in_pm, s.cov_minus,
               s.cov_plus, cross * in_pm, s.v_y_plus, rt * in_pm,
               cross * in_pm, s.cov_minus, rt * in_pm, s.v_y_minus;

    s.uncertainty_x = s.v_x_plus * s.v_x_minus;
    s.uncertainty_y = s.v_y_plus * s.v_y_minus;
    s.vinf_x_plus = s.v_x_plus - s.cov_plus * s.cov_plus / s.v_y_plus;
    s.vinf_x_minus = s.v_x_minus - s.cov_minus * s.cov_minus / s.v_y_minus;
    s.vinf_y_plus = s.v_y_plus - s.cov_plus * s.cov_plus / s.v_x_plus;
    s.vinf_y_minus = s.v_y_minus - s.cov_minus * s.cov_minus / s.v_x_minus;
    s.product_x = s.vinf_x_plus * s.vinf_x_minus;
    s.product_y = s.vinf_y_plus * s.vinf_y_minus;
    s.entangled = s.product_x < 1.0 || s.product_y < 1.0;
    return s;
}

double two_mode_rabi(double omega_eff, double tau) {
    if (omega_eff < 0.0 || tau < 0.0) throw ValidationError("two_mode_rabi: arguments must be non-negative");
    const double s = std::sin(omega_eff * tau);
    return s * s;
}

double two_mode_rabi_ode(double omega_eff, double tau, std::size_t steps) {
    if (omega_eff < 0.0 || tau < 0.0) throw ValidationError("two_mode_rabi: arguments must be non-negative");
    using c = std::complex<double>;
    const c I{0.0, 1.0};
    auto rhs = [&](c a, c b) { return std::pair<c, c>{I * omega_eff * b, I * omega_eff * a}; };
    c a = 1.0, b = 0.0;
    const double h = tau / static_cast<double>(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        auto [ka1, kb1] = rhs(a, b);
        auto [ka2, kb2] = rhs(a + 0.5 * h * ka1, b + 0.5 * h * kb1);
        auto [ka3, kb3] = rhs(a + 0.5 * h * ka2, b + 0.5 * h * kb2);
        auto [ka4, kb4] = rhs(a + h * ka3, b + h * kb3);
        a += h / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
        b += h / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
    }
    return std::norm(b);
}

} // namespace atomlight
