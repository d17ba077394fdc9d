// Virial and Morawetz quantities, the truncated weight chi_R, the
// bootstrap barrier lemma, and the blow-up / global-existence
// classification against ground-state thresholds.
#pragma once

#include "qnls/evolution.hpp"
#include "qnls/functionals.hpp"
#include "qnls/ground_state.hpp"

namespace qnls {

// chi(s) = s^2 on [0,1], a quintic Hermite join on [1,3], constant c on
// [3,inf); chi_R(r) = R^2 chi(r/R). The join keeps chi'' <= 2 and
// 0 <= chi' <= 2s; both are re-verified numerically at construction.
class CutoffChi {
public:
    explicit CutoffChi(double R);

    double R() const { return R_; }
    double plateau() const { return c_ * R_ * R_; } // chi_R value for r >= 3R

    double value(double r) const;  // chi_R(r)
    double dr(double r) const;     // chi_R'
    double d2r(double r) const;    // chi_R''
    double lap(double r, int n) const;   // Lap chi_R = chi'' + (n-1) chi'/r
    double bilap(double r, int n) const; // Lap^2 chi_R, O(1/R^2) outside r=R

    // normalized profile and derivatives in s = r/R
    static double chi(double s);
    static double chi_d(double s);
    static double chi_dd(double s);
    static double chi_d3(double s);
    static double chi_d4(double s);

private:
    double R_;
    double c_ = 3.0;
};

// V = sum_k (alpha_k^2/gamma_k) int |x|^2 |u_k|^2 dx
double virial_V(const RadialField& f, const SystemParams& p);

// R(t) = 2 sum_k alpha_k Im int phi'(r) d_r u_k conj(u_k) dmu, with
// phi = |x|^2 (chi = nullptr) or phi = chi_R.
double morawetz_R(const RadialField& f, const SystemParams& p, const CutoffChi* chi = nullptr);

// R'(t) = 4 int chi_R'' sum gamma_k |d_r u_k|^2 - int Lap^2 chi_R sum
// gamma_k |u_k|^2 - 2 Re int Lap chi_R F(u); reduces to 8 T_n on fields
// supported in {r <= R}.
double rprime_radial(const RadialField& f, const SystemParams& p, const Nonlinearity& nl,
                     const CutoffChi& chi);

struct VirialCheckReport {
    std::vector<double> t, V, W, K, L;
    double E0 = 0;
    double scale = 0;                    // |2n E0| + 2|4-n| max K
    double max_mismatch_resonant = 0;    // FD V'' vs 2nE0 - 2nL + 2(4-n)K
    double max_mismatch_corrected = 0;   // including the -4 dW/dt term
};

// Snapshots must be uniformly spaced in time (spacing dt).
VirialCheckReport virial_identity_check(const std::vector<RadialField>& snaps,
                                        const std::vector<double>& times,
                                        const SystemParams& p, const Nonlinearity& nl);

// Barrier lemma for f(r) = a - r + b r^q: gamma = (bq)^{-1/(q-1)};
// admissible when a < (1 - 1/q) gamma, and trajectories with f(G) >= 0
// cannot cross gamma.
struct Bootstrap {
    double a = 0, b = 0, q = 0;
    double gamma = 0;
    bool admissible = false;

    enum class Branch { Below, Above };
    Branch branch(double G0) const;
};
Bootstrap bootstrap_gamma(double a, double b, double q);

struct Thresholds {
    double Q_star = 0;  // Q(psi)          (n = 4)
    double QE_star = 0; // Q(psi) Ecrit(psi)  (n = 5)
    double QK_star = 0; // Q(psi) K(psi)      (n = 5)
    double E_star = 0;  // Ecrit(psi)         (n = 6)
    double K_star = 0;  // K(psi)             (n = 6)
};
Thresholds thresholds_from(const GroundStateResult& gs, const SystemParams& gs_params,
                           const Nonlinearity& nl, int n);

enum class ClassVerdict { BlowupCriteria, GlobalCriteria, Indeterminate };
const char* to_string(ClassVerdict v);

struct Witness {
    std::string name;
    double lhs = 0, rhs = 0;
    bool holds = false;
};

struct Classification {
    int n = 0;
    ClassVerdict verdict = ClassVerdict::Indeterminate;
    std::vector<Witness> witnesses;
    Thresholds thresholds;
};

Classification classify(const RadialField& u0, const SystemParams& p, const Nonlinearity& nl,
                        const GroundStateResult& gs, const SystemParams& gs_params, int n);

struct TMonitor {
    double min_T = 0, max_T = 0;
    bool negative_throughout = false;
    double empirical_delta = 0; // |max recorded T| when sign-definite
};
TMonitor monitor_T(const TimeSeries& ts);

} // namespace qnls
