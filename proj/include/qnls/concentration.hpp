// Concentration-compactness diagnostics for the energy-critical case
// n = 6: the concentration function Q(R) of F(|u|), half-concentration
// rescaling, logarithmic cutoffs and localized Sobolev inequalities.
#pragma once

#include "qnls/ground_state.hpp"

namespace qnls {

// chi_R^r(y) = 1 on |y| <= r, log(|y|/R)/log(r/R) on r <= |y| <= R, 0
// beyond. Its gradient satisfies int |grad chi|^6 = pi^3 / log(R/r)^5.
class LogCutoff {
public:
    LogCutoff(double r, double R);

    double inner() const { return r_; }
    double outer() const { return R_; }
    double value(double dist) const;
    double grad_mag(double dist) const;
    double grad_pow6_integral(int intervals = 200000) const; // quadrature on [r, R]
    double grad_pow6_exact() const;                          // pi^3 / log(R/r)^5

private:
    double r_, R_;
};

struct ConcentrationProfile {
    std::vector<double> radius; // cell faces
    std::vector<double> mass;   // int_{B(0,radius)} F(|u|)
    double total = 0;           // P(|u|)
    bool monotone = true;       // flags negative F(|u|) cells

    double at(double R) const; // linear interpolation, clamped
    double half_radius() const; // smallest R with mass = total/2
};

ConcentrationProfile concentration_profile(const RadialField& f, const Nonlinearity& nl);
double concentration_Q(const RadialField& f, const Nonlinearity& nl, double R);

struct HalfConcentration {
    double Rm = 1.0;
    double amplitude_scale = 1.0; // lambda applied so P(|lambda u|) = 1
    RadialField rescaled;
};

// Normalizes P(|u|) to 1, then picks R_m with
// int_{B(0,1)} F(|v|) = 1/2 for v(x) = R_m^{-2} u(x/R_m) via the change
// of variables Q(1/R_m) = 1/2 on the cumulative profile.
HalfConcentration half_concentration_rescale(const RadialField& f, const Nonlinearity& nl);

// C(delta) = exp[-(zeta/(sqrt(delta+1)-1))^{6/5}]
double cutoff_Cdelta(double delta, double zeta);

// Scalar critical Sobolev constant |f|_{L3}^2 <= C |grad f|_{L2}^2 in R^6
// estimated from the bubble (1+r^2)^{-2} on the given grid.
double sobolev_constant_estimate(const RadialGrid& grid);
double zeta_from_sobolev(double C); // sqrt(C) * omega_6^{1/6}, omega_6 = pi^3

struct LocalizedSobolevReport {
    bool precondition_ok = false;
    double ratio_rR = 0, Cdelta = 0;
    double inner_lhs = 0, inner_rhs = 0, inner_margin = 0;
    double outer_lhs = 0, outer_rhs = 0, outer_margin = 0;
    bool pass = false;
};

LocalizedSobolevReport localized_sobolev_check(const RadialField& f, const SystemParams& p,
                                               const Nonlinearity& nl, double r, double R,
                                               double delta, double S_est, double zeta);

struct SEstimate {
    double S = 0;      // inf K over P = 1
    double C6 = 0;     // S^{-3/2}, cross-checked against 3^{-3/2} Ecrit^{-1/2}
    double consistency = 0; // relative gap between the two routes
    bool trial_based = false;
};

SEstimate estimate_S(const GroundStateResult& gs, const SystemParams& p, const Nonlinearity& nl);
SEstimate estimate_S_trials(const std::vector<RadialField>& trials, const SystemParams& p,
                            const Nonlinearity& nl);

} // namespace qnls
