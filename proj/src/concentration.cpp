#include "qnls/concentration.hpp"

#include <algorithm>
#include <cmath>

namespace qnls {

LogCutoff::LogCutoff(double r, double R) : r_(r), R_(R) {
    if (!(0 < r && r < R)) throw std::invalid_argument("log cutoff needs 0 < r < R");
}

double LogCutoff::value(double d) const {
    if (d <= r_) return 1.0;
    if (d >= R_) return 0.0;
    return std::log(d / R_) / std::log(r_ / R_);
}

double LogCutoff::grad_mag(double d) const {
    if (d <= r_ || d >= R_) return 0.0;
    return 1.0 / (std::log(R_ / r_) * d);
}

double LogCutoff::grad_pow6_integral(int intervals) const {
    // int_{r<|y|<R} |grad chi|^6 dy in R^6, midpoint rule on [r, R]
    const double s6 = RadialGrid::unit_sphere_area(6);
    const double h = (R_ - r_) / intervals;
    double acc = 0.0;
    for (int i = 0; i < intervals; ++i) {
        double d = r_ + (i + 0.5) * h;
        double gm = grad_mag(d);
        acc += std::pow(d, 5) * std::pow(gm, 6) * h;
    }
    return s6 * acc;
}

double LogCutoff::grad_pow6_exact() const {
    return std::pow(M_PI, 3) / std::pow(std::log(R_ / r_), 5);
}

ConcentrationProfile concentration_profile(const RadialField& f, const Nonlinearity& nl) {
    const auto& g = *f.grid();
    const int l = f.components();
    ConcentrationProfile pr;
    pr.radius.resize(g.size() + 1);
    pr.mass.resize(g.size() + 1);
    pr.radius[0] = 0.0;
    pr.mass[0] = 0.0;
    std::vector<double> y(l);
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        for (int k = 0; k < l; ++k) y[k] = std::abs(f.comp(k)[i]);
        double cell = g.weights()[i] * nl.F_moduli(y);
        if (cell < 0) pr.monotone = false;
        acc += cell;
        pr.radius[i + 1] = g.face(i + 1);
        pr.mass[i + 1] = acc;
    }
    pr.total = acc;
    return pr;
}

double ConcentrationProfile::at(double R) const {
    if (R <= 0) return 0.0;
    if (R >= radius.back()) return total;
    auto it = std::upper_bound(radius.begin(), radius.end(), R);
    std::size_t j = (std::size_t)(it - radius.begin());
    double r0 = radius[j - 1], r1 = radius[j];
    double t = (R - r0) / (r1 - r0);
    return mass[j - 1] + t * (mass[j] - mass[j - 1]);
}

double ConcentrationProfile::half_radius() const {
    double target = 0.5 * total;
    auto it = std::lower_bound(mass.begin(), mass.end(), target);
    if (it == mass.end()) return radius.back();
    std::size_t j = (std::size_t)(it - mass.begin());
    if (j == 0) return 0.0;
    double m0 = mass[j - 1], m1 = mass[j];
    double t = (m1 > m0) ? (target - m0) / (m1 - m0) : 0.0;
    return radius[j - 1] + t * (radius[j] - radius[j - 1]);
}

double concentration_Q(const RadialField& f, const Nonlinearity& nl, double R) {
    return concentration_profile(f, nl).at(R);
}

HalfConcentration half_concentration_rescale(const RadialField& f, const Nonlinearity& nl) {
    HalfConcentration out;
    double P = potential_moduli(f, nl);
    if (!(P > 0)) throw std::domain_error("half-concentration needs P(|u|) > 0");
    // F is cubic, so P(|lambda u|) = lambda^3 P(|u|)
    out.amplitude_scale = std::pow(P, -1.0 / 3.0);
    RadialField v = out.amplitude_scale * f;

    // initial guess from the cumulative profile via Q(1/Rm) = 1/2
    double rho = concentration_profile(v, nl).half_radius();
    if (!(rho > 0) || !(rho < v.grid()->r_max()))
        throw std::runtime_error("half-concentration radius escaped the grid");

    // refine so the *resampled* field carries mass 1/2 in the unit ball;
    // the mass inside B(0,1) decreases in R, so bisection applies
    auto mass_in_unit_ball = [&](double R) {
        RadialField w = scaling_transform(v, R);
        return concentration_profile(w, nl).at(1.0);
    };
    double lo = 0.5 / rho, hi = 2.0 / rho;
    double mlo = mass_in_unit_ball(lo), mhi = mass_in_unit_ball(hi);
    if (!(mlo >= 0.5 && mhi <= 0.5))
        throw std::runtime_error("half-concentration bracket failed");
    double R = 1.0 / rho;
    for (int it = 0; it < 80; ++it) {
        R = 0.5 * (lo + hi);
        double m = mass_in_unit_ball(R);
        if (std::abs(m - 0.5) <= 1e-9) break;
        (m > 0.5 ? lo : hi) = R;
    }
    out.Rm = R;
    out.rescaled = scaling_transform(v, R);
    if (std::abs(concentration_profile(out.rescaled, nl).at(1.0) - 0.5) > 1e-8)
        throw std::runtime_error("half-concentration normalization failed");
    return out;
}

double cutoff_Cdelta(double delta, double zeta) {
    if (!(delta > 0) || !(zeta > 0)) throw std::invalid_argument("delta and zeta must be positive");
    double eps = std::sqrt(delta + 1.0) - 1.0;
    return std::exp(-std::pow(zeta / eps, 1.2));
}

double sobolev_constant_estimate(const RadialGrid& grid) {
    if (grid.dim() != 6) throw std::invalid_argument("Sobolev bubble estimate needs n = 6");
    std::vector<cdouble> U(grid.size());
    std::vector<double> cube(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        double r = grid.node(i);
        double u = 1.0 / ((1.0 + r * r) * (1.0 + r * r));
        U[i] = u;
        cube[i] = u * u * u;
    }
    double l3 = std::pow(integrate(grid, std::span<const double>(cube)), 2.0 / 3.0);
    double gs = grad_sq(grid, U);
    return l3 / gs;
}

double zeta_from_sobolev(double C) { return std::sqrt(C) * std::pow(std::pow(M_PI, 3), 1.0 / 6.0); }

namespace {

// sum_k gamma_k int over cells with face-based gradients restricted to a
// radius window [lo, hi); the Dirichlet ghost face is included like
// grad_sq does.
double kinetic_window(const RadialField& f, const SystemParams& p, double lo, double hi) {
    const auto& g = *f.grid();
    const int M = g.size();
    const double h = g.h();
    double K = 0.0;
    for (int k = 0; k < p.l; ++k) {
        const auto& u = f.comp(k);
        double acc = 0.0;
        for (int j = 1; j <= M; ++j) {
            double rf = g.face(j);
            if (rf < lo || rf >= hi) continue;
            cdouble up = (j < M) ? u[j] : cdouble{0.0, 0.0};
            double d = std::abs(up - u[j - 1]) / h;
            acc += g.flux_coeff(j) * h * d * d;
        }
        K += p.gamma[k] * acc;
    }
    return K;
}

} // namespace

LocalizedSobolevReport localized_sobolev_check(const RadialField& f, const SystemParams& p,
                                               const Nonlinearity& nl, double r, double R,
                                               double delta, double S_est, double zeta) {
    if (!(0 < r && r < R)) throw std::invalid_argument("need 0 < r < R");
    LocalizedSobolevReport rep;
    rep.ratio_rR = r / R;
    rep.Cdelta = cutoff_Cdelta(delta, zeta);
    rep.precondition_ok = rep.ratio_rR <= rep.Cdelta;
    if (!rep.precondition_ok)
        throw std::domain_error("r/R exceeds C(delta); widen the annulus");

    auto pr = concentration_profile(f, nl);
    double K = kinetic(f, p);
    double Sfac = std::pow(S_est, -1.5);

    rep.inner_lhs = pr.at(r);
    rep.inner_rhs = Sfac * std::pow(kinetic_window(f, p, 0.0, R) + delta * K, 1.5);
    rep.inner_margin = rep.inner_rhs - rep.inner_lhs;

    rep.outer_lhs = pr.total - pr.at(R);
    rep.outer_rhs =
        Sfac * std::pow(kinetic_window(f, p, r, 1e300) + (2.0 * delta + delta * delta) * K, 1.5);
    rep.outer_margin = rep.outer_rhs - rep.outer_lhs;

    rep.pass = rep.inner_margin >= 0 && rep.outer_margin >= 0;
    return rep;
}

SEstimate estimate_S(const GroundStateResult& gs, const SystemParams& p, const Nonlinearity& nl) {
    SEstimate est;
    double K = kinetic(gs.profile, p);
    double P = potential(gs.profile, nl);
    if (!(P > 0)) throw std::domain_error("ground state has P <= 0");
    est.S = K / std::pow(P, 2.0 / 3.0); // K of the amplitude-rescaled field with P = 1
    double Ecrit = K - 2.0 * P;
    double C6 = std::pow(3.0, -1.5) / std::sqrt(Ecrit);
    est.C6 = C6;
    double S_from_C6 = std::pow(C6, -2.0 / 3.0);
    est.consistency = std::abs(est.S - S_from_C6) / est.S;
    est.trial_based = false;
    return est;
}

SEstimate estimate_S_trials(const std::vector<RadialField>& trials, const SystemParams& p,
                            const Nonlinearity& nl) {
    SEstimate est;
    est.trial_based = true;
    bool found = false;
    for (const auto& f : trials) {
        double P = potential(f, nl);
        if (!(P > 0)) continue;
        double val = kinetic(f, p) / std::pow(P, 2.0 / 3.0);
        if (!found || val < est.S) est.S = val;
        found = true;
    }
    if (!found) throw std::domain_error("no trial field with P > 0");
    est.C6 = std::pow(est.S, -1.5);
    est.consistency = 0.0;
    return est;
}

} // namespace qnls
