#include "qnls/virial.hpp"

#include <cmath>

namespace qnls {

namespace {
// quintic join coefficients in t = (s-1)/2 on [0,1]:
// P(t) = 1 + 4t + 4t^2 - 16t^3 + 14t^4 - 4t^5 matches s^2 at s=1 and a
// flat plateau (value 3) at s=3 through second derivatives.
inline double joinP(double t) { return 1 + t * (4 + t * (4 + t * (-16 + t * (14 - 4 * t)))); }
inline double joinP1(double t) { return 4 + t * (8 + t * (-48 + t * (56 - 20 * t))); }
inline double joinP2(double t) { return 8 + t * (-96 + t * (168 - 80 * t)); }
inline double joinP3(double t) { return -96 + t * (336 - 240 * t); }
inline double joinP4(double t) { return 336 - 480 * t; }
} // namespace

double CutoffChi::chi(double s) {
    if (s <= 1) return s * s;
    if (s >= 3) return 3.0;
    return joinP(0.5 * (s - 1));
}
double CutoffChi::chi_d(double s) {
    if (s <= 1) return 2 * s;
    if (s >= 3) return 0.0;
    return 0.5 * joinP1(0.5 * (s - 1));
}
double CutoffChi::chi_dd(double s) {
    if (s <= 1) return 2.0;
    if (s >= 3) return 0.0;
    return 0.25 * joinP2(0.5 * (s - 1));
}
double CutoffChi::chi_d3(double s) {
    if (s <= 1 || s >= 3) return 0.0;
    return 0.125 * joinP3(0.5 * (s - 1));
}
double CutoffChi::chi_d4(double s) {
    if (s <= 1 || s >= 3) return 0.0;
    return 0.0625 * joinP4(0.5 * (s - 1));
}

CutoffChi::CutoffChi(double R) : R_(R) {
    if (!(R > 0)) throw std::invalid_argument("cutoff radius must be positive");
    // admissibility of the join, verified on a fine mesh
    const int N = 100000;
    for (int i = 0; i <= N; ++i) {
        double s = 4.0 * i / N;
        if (chi_dd(s) > 2.0 + 1e-10) throw std::logic_error("cutoff join violates chi'' <= 2");
        double d = chi_d(s);
        if (d < -1e-10 || d > 2.0 * s + 1e-10)
            throw std::logic_error("cutoff join violates 0 <= chi' <= 2s");
    }
}

double CutoffChi::value(double r) const { return R_ * R_ * chi(r / R_); }
double CutoffChi::dr(double r) const { return R_ * chi_d(r / R_); }
double CutoffChi::d2r(double r) const { return chi_dd(r / R_); }

double CutoffChi::lap(double r, int n) const {
    double s = r / R_;
    if (s <= 1) return 2.0 * n;
    return chi_dd(s) + (n - 1) * chi_d(s) / s;
}

double CutoffChi::bilap(double r, int n) const {
    double s = r / R_;
    if (s <= 1 || s >= 3) return 0.0;
    double d1 = chi_d(s), d2 = chi_dd(s), d3 = chi_d3(s), d4 = chi_d4(s);
    // D(s) = chi'' + (n-1) chi'/s; Lap^2 chi_R = (D'' + (n-1) D'/s)/R^2
    double Dp = d3 + (n - 1) * (d2 * s - d1) / (s * s);
    double Dpp = d4 + (n - 1) * (d3 / s - 2.0 * (d2 * s - d1) / (s * s * s));
    return (Dpp + (n - 1) * Dp / s) / (R_ * R_);
}

double virial_V(const RadialField& f, const SystemParams& p) {
    const auto& g = *f.grid();
    std::vector<double> vals(g.size(), 0.0);
    for (int k = 0; k < p.l; ++k) {
        double wk = p.alpha[k] * p.alpha[k] / p.gamma[k];
        for (int i = 0; i < g.size(); ++i)
            vals[i] += wk * g.node(i) * g.node(i) * std::norm(f.comp(k)[i]);
    }
    return integrate(g, std::span<const double>(vals));
}

namespace {

// radial derivative at nodes: centered interior, one-sided at the ends
void radial_derivative(const RadialGrid& g, std::span<const cdouble> u, std::vector<cdouble>& du) {
    const int M = g.size();
    const double h = g.h();
    du.resize(M);
    for (int i = 1; i + 1 < M; ++i) du[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    du[0] = (u[1] - u[0]) / h;
    du[M - 1] = (u[M - 1] - u[M - 2]) / h;
}

} // namespace

double morawetz_R(const RadialField& f, const SystemParams& p, const CutoffChi* chi) {
    const auto& g = *f.grid();
    std::vector<double> vals(g.size(), 0.0);
    std::vector<cdouble> du;
    for (int k = 0; k < p.l; ++k) {
        radial_derivative(g, f.comp(k), du);
        for (int i = 0; i < g.size(); ++i) {
            double r = g.node(i);
            double phi_p = chi ? chi->dr(r) : 2.0 * r;
            vals[i] += 2.0 * p.alpha[k] * phi_p * std::imag(du[i] * std::conj(f.comp(k)[i]));
        }
    }
    return integrate(g, std::span<const double>(vals));
}

double rprime_radial(const RadialField& f, const SystemParams& p, const Nonlinearity& nl,
                     const CutoffChi& chi) {
    const auto& g = *f.grid();
    const int M = g.size();
    const double h = g.h();

    // 4 int chi'' |grad u|^2: face-based so that chi'' = 2 reproduces the
    // same kinetic sum grad_sq uses
    double term1 = 0.0;
    for (int k = 0; k < p.l; ++k) {
        const auto& u = f.comp(k);
        double acc = 0.0;
        for (int j = 1; j <= M; ++j) {
            cdouble up = (j < M) ? u[j] : cdouble{0.0, 0.0};
            double d = std::abs(up - u[j - 1]) / h;
            acc += g.flux_coeff(j) * h * chi.d2r(g.face(j)) * d * d;
        }
        term1 += p.gamma[k] * acc;
    }
    term1 *= 4.0;

    std::vector<double> vals(g.size(), 0.0);
    std::vector<cdouble> z(p.l);
    const int n = g.dim();
    for (int i = 0; i < M; ++i) {
        double r = g.node(i);
        double gu2 = 0.0;
        for (int k = 0; k < p.l; ++k) {
            gu2 += p.gamma[k] * std::norm(f.comp(k)[i]);
            z[k] = f.comp(k)[i];
        }
        vals[i] = -chi.bilap(r, n) * gu2 - 2.0 * chi.lap(r, n) * nl.F(z).real();
    }
    return term1 + integrate(g, std::span<const double>(vals));
}

namespace {

double im_mass_weighted(const RadialField& f, const SystemParams& p, const Nonlinearity& nl) {
    const auto& g = *f.grid();
    auto m = p.masses();
    std::vector<cdouble> z(p.l), fv(p.l);
    std::vector<double> vals(g.size());
    for (int i = 0; i < g.size(); ++i) {
        for (int k = 0; k < p.l; ++k) z[k] = f.comp(k)[i];
        nl.fk(z, fv);
        cdouble acc{0, 0};
        for (int k = 0; k < p.l; ++k) acc += m[k] * fv[k] * std::conj(z[k]);
        vals[i] = g.node(i) * g.node(i) * acc.imag();
    }
    return integrate(g, std::span<const double>(vals));
}

} // namespace

VirialCheckReport virial_identity_check(const std::vector<RadialField>& snaps,
                                        const std::vector<double>& times, const SystemParams& p,
                                        const Nonlinearity& nl) {
    if (snaps.size() < 3 || snaps.size() != times.size())
        throw std::invalid_argument("need at least three uniformly spaced snapshots");
    const double dt = times[1] - times[0];
    for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::invalid_argument("snapshots are not uniformly sampled");

    VirialCheckReport rep;
    rep.t = times;
    const int n = p.n;
    for (const auto& f : snaps) {
        rep.V.push_back(virial_V(f, p));
        rep.W.push_back(im_mass_weighted(f, p, nl));
        rep.K.push_back(kinetic(f, p));
        rep.L.push_back(mass_term(f, p));
    }
    rep.E0 = energy(snaps[0], p, nl);
    double maxK = 0.0;
    for (double k : rep.K) maxK = std::max(maxK, k);
    rep.scale = std::abs(2.0 * n * rep.E0) + 2.0 * std::abs(4.0 - n) * maxK + 1e-300;

    for (std::size_t i = 1; i + 1 < snaps.size(); ++i) {
        double vpp = (rep.V[i + 1] - 2.0 * rep.V[i] + rep.V[i - 1]) / (dt * dt);
        double wp = (rep.W[i + 1] - rep.W[i - 1]) / (2.0 * dt);
        double rhs = 2.0 * n * rep.E0 - 2.0 * n * rep.L[i] + 2.0 * (4.0 - n) * rep.K[i];
        rep.max_mismatch_resonant =
            std::max(rep.max_mismatch_resonant, std::abs(vpp - rhs) / rep.scale);
        rep.max_mismatch_corrected =
            std::max(rep.max_mismatch_corrected, std::abs(vpp - (rhs - 4.0 * wp)) / rep.scale);
    }
    return rep;
}

Bootstrap bootstrap_gamma(double a, double b, double q) {
    if (!(b > 0)) throw std::invalid_argument("b must be positive");
    if (!(q > 1)) throw std::invalid_argument("q must exceed 1");
    Bootstrap bs;
    bs.a = a;
    bs.b = b;
    bs.q = q;
    double e = 1.0 / (q - 1.0);
    double base = b * q;
    double er = std::round(e);
    if (std::abs(e - er) < 1e-12 && er >= 1 && er <= 64) {
        // integer exponent: exact powering keeps rational inputs exact
        double pw = 1.0;
        for (long i = 0; i < (long)er; ++i) pw *= base;
        bs.gamma = 1.0 / pw;
    } else {
        bs.gamma = std::pow(base, -e);
    }
    bs.admissible = a < (1.0 - 1.0 / q) * bs.gamma;
    return bs;
}

Bootstrap::Branch Bootstrap::branch(double G0) const {
    if (G0 < gamma) return Branch::Below;
    if (G0 > gamma) return Branch::Above;
    throw std::domain_error("G(0) equals the barrier; branch undecided");
}

Thresholds thresholds_from(const GroundStateResult& gs, const SystemParams& gs_params,
                           const Nonlinearity& nl, int n) {
    Thresholds th;
    const auto* s = nl.sigma();
    if (!s) throw std::invalid_argument("thresholds need sigma");
    double Q = charge(gs.profile, gs_params, *s);
    double K = kinetic(gs.profile, gs_params);
    double Ecrit = K - 2.0 * potential(gs.profile, nl);
    th.Q_star = Q;
    th.QE_star = Q * Ecrit;
    th.QK_star = Q * K;
    th.E_star = Ecrit;
    th.K_star = K;
    return th;
}

const char* to_string(ClassVerdict v) {
    switch (v) {
        case ClassVerdict::BlowupCriteria: return "BlowupCriteria";
        case ClassVerdict::GlobalCriteria: return "GlobalCriteria";
        case ClassVerdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

Classification classify(const RadialField& u0, const SystemParams& p, const Nonlinearity& nl,
                        const GroundStateResult& gs, const SystemParams& gs_params, int n) {
    if (n < 4 || n > 6) throw std::invalid_argument("classification needs n in {4,5,6}");
    Classification cl;
    cl.n = n;
    cl.thresholds = thresholds_from(gs, gs_params, nl, n);
    const auto* s = nl.sigma();
    if (!s) throw std::invalid_argument("classification needs sigma");

    double Q0 = charge(u0, p, *s);
    double K0 = kinetic(u0, p);
    double E0 = energy(u0, p, nl);

    auto wit = [&](const std::string& name, double lhs, double rhs, bool holds) {
        cl.witnesses.push_back({name, lhs, rhs, holds});
        return holds;
    };

    if (n == 4) {
        bool global = wit("Q(u0) < Q(psi)", Q0, cl.thresholds.Q_star, Q0 < cl.thresholds.Q_star);
        cl.verdict = global ? ClassVerdict::GlobalCriteria : ClassVerdict::Indeterminate;
    } else if (n == 5) {
        bool e_below = wit("Q(u0)E(u0) < Q(psi)Ecrit(psi)", Q0 * E0, cl.thresholds.QE_star,
                           Q0 * E0 < cl.thresholds.QE_star);
        bool k_above = wit("Q(u0)K(u0) > Q(psi)K(psi)", Q0 * K0, cl.thresholds.QK_star,
                           Q0 * K0 > cl.thresholds.QK_star);
        bool k_below = wit("Q(u0)K(u0) < Q(psi)K(psi)", Q0 * K0, cl.thresholds.QK_star,
                           Q0 * K0 < cl.thresholds.QK_star);
        if (e_below && k_above)
            cl.verdict = ClassVerdict::BlowupCriteria;
        else if (e_below && k_below)
            cl.verdict = ClassVerdict::GlobalCriteria;
        else
            cl.verdict = ClassVerdict::Indeterminate;
    } else {
        bool e_below =
            wit("E(u0) < Ecrit(psi)", E0, cl.thresholds.E_star, E0 < cl.thresholds.E_star);
        bool k_above =
            wit("K(u0) > K(psi)", K0, cl.thresholds.K_star, K0 > cl.thresholds.K_star);
        cl.verdict = (e_below && k_above) ? ClassVerdict::BlowupCriteria
                                          : ClassVerdict::Indeterminate;
    }
    return cl;
}

TMonitor monitor_T(const TimeSeries& ts) {
    TMonitor m;
    if (ts.records.empty()) return m;
    m.min_T = m.max_T = ts.records[0].T;
    for (const auto& r : ts.records) {
        m.min_T = std::min(m.min_T, r.T);
        m.max_T = std::max(m.max_T, r.T);
    }
    m.negative_throughout = m.max_T < 0;
    m.empirical_delta = m.negative_throughout ? -m.max_T : 0.0;
    return m;
}

} // namespace qnls
