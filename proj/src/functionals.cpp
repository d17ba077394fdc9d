#include "qnls/functionals.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace qnls {

namespace {

const std::vector<double>& need_sigma(const SystemParams& p, std::span<const double> sigma,
                                      std::vector<double>& storage) {
    if ((int)sigma.size() == p.l) {
        storage.assign(sigma.begin(), sigma.end());
        return storage;
    }
    throw std::invalid_argument("sigma unavailable (solve or declare it first)");
}

} // namespace

double charge(const RadialField& f, const SystemParams& p, std::span<const double> sigma) {
    std::vector<double> s;
    need_sigma(p, sigma, s);
    double q = 0.0;
    for (int k = 0; k < p.l; ++k)
        q += 0.5 * p.alpha[k] * s[k] * norm_sq(*f.grid(), f.comp(k));
    return q;
}

double kinetic(const RadialField& f, const SystemParams& p) {
    double K = 0.0;
    for (int k = 0; k < p.l; ++k) K += p.gamma[k] * grad_sq(*f.grid(), f.comp(k));
    return K;
}

double potential(const RadialField& f, const Nonlinearity& nl) {
    const auto& g = *f.grid();
    const int l = f.components();
    std::vector<cdouble> z(l);
    std::vector<double> vals(g.size());
    for (int i = 0; i < g.size(); ++i) {
        for (int k = 0; k < l; ++k) z[k] = f.comp(k)[i];
        vals[i] = nl.F(z).real();
    }
    return integrate(g, std::span<const double>(vals));
}

double potential_moduli(const RadialField& f, const Nonlinearity& nl) {
    const auto& g = *f.grid();
    const int l = f.components();
    std::vector<double> y(l);
    std::vector<double> vals(g.size());
    for (int i = 0; i < g.size(); ++i) {
        for (int k = 0; k < l; ++k) y[k] = std::abs(f.comp(k)[i]);
        vals[i] = nl.F_moduli(y);
    }
    return integrate(g, std::span<const double>(vals));
}

double mass_term(const RadialField& f, const SystemParams& p) {
    double L = 0.0;
    for (int k = 0; k < p.l; ++k)
        if (p.beta[k] != 0.0) L += p.beta[k] * norm_sq(*f.grid(), f.comp(k));
    return L;
}

double qfunc(const RadialField& f, const SystemParams& p, std::span<const double> sigma) {
    std::vector<double> s;
    need_sigma(p, sigma, s);
    double q = 0.0;
    for (int k = 0; k < p.l; ++k) {
        double c = 0.5 * s[k] * p.alpha[k] * p.omega + p.beta[k];
        q += c * norm_sq(*f.grid(), f.comp(k));
    }
    return q;
}

double energy(const RadialField& f, const SystemParams& p, const Nonlinearity& nl) {
    return kinetic(f, p) + mass_term(f, p) - 2.0 * potential(f, nl);
}

double action_I(const RadialField& f, const SystemParams& p, const Nonlinearity& nl) {
    double Qf;
    if (p.omega != 0.0) {
        const auto* s = nl.sigma();
        if (!s) throw std::invalid_argument("action needs sigma when omega != 0");
        Qf = qfunc(f, p, *s);
    } else {
        Qf = mass_term(f, p);
    }
    return 0.5 * (kinetic(f, p) + Qf) - potential(f, nl);
}

double pohozaev_T(const RadialField& f, const SystemParams& p, const Nonlinearity& nl, int n) {
    return kinetic(f, p) - 0.5 * n * potential(f, nl);
}

double weinstein_J(const RadialField& f, const SystemParams& p, const Nonlinearity& nl) {
    double P = potential(f, nl);
    if (!(P > 0)) throw std::domain_error("Weinstein quotient needs P(u) > 0 (u outside D)");
    double K = kinetic(f, p);
    return std::pow(K, 1.5) / P;
}

double gn_quotient(const RadialField& f, const SystemParams& p, const Nonlinearity& nl, int n) {
    double P = potential(f, nl);
    if (!(P > 0)) throw std::domain_error("quotient needs P(u) > 0 (u outside D)");
    const auto* s = nl.sigma();
    if (!s) throw std::invalid_argument("quotient needs sigma");
    double Qf = qfunc(f, p, *s);
    double K = kinetic(f, p);
    return P / (std::pow(Qf, 0.25 * (6 - n)) * std::pow(K, 0.25 * n));
}

double sharp_constant(const RadialField& psi, const SystemParams& p, const Nonlinearity& nl,
                      int n) {
    if (n >= 1 && n <= 5) {
        const auto* s = nl.sigma();
        if (!s) throw std::invalid_argument("sharp constant needs sigma");
        double Qf = qfunc(psi, p, *s);
        if (!(Qf > 0)) throw std::domain_error("Q(psi) must be positive");
        return 2.0 * std::pow(6.0 - n, 0.25 * (n - 4)) / std::pow((double)n, 0.25 * n) /
               std::sqrt(Qf);
    }
    if (n == 6) {
        double Ecrit = kinetic(psi, p) - 2.0 * potential(psi, nl);
        if (!(Ecrit > 0)) throw std::domain_error("Ecrit(psi) must be positive");
        return std::pow(3.0, -1.5) / std::sqrt(Ecrit);
    }
    throw std::invalid_argument("dimension out of supported range");
}

DiagnosticsRecord make_record(double t, const RadialField& f, const SystemParams& p,
                              const Nonlinearity& nl) {
    DiagnosticsRecord r;
    r.t = t;
    const auto* s = nl.sigma();
    r.K = kinetic(f, p);
    r.P = potential(f, nl);
    r.L = mass_term(f, p);
    r.E = r.K + r.L - 2.0 * r.P;
    r.Q = s ? charge(f, p, *s) : std::numeric_limits<double>::quiet_NaN();
    r.Qfunc = s ? qfunc(f, p, *s) : r.L;
    r.I = 0.5 * (r.K + r.Qfunc) - r.P;
    r.T = r.K - 0.5 * p.n * r.P;
    r.Ecrit = r.K - 2.0 * r.P;
    r.J = (r.P > 0) ? std::pow(r.K, 1.5) / r.P : std::numeric_limits<double>::quiet_NaN();
    return r;
}

std::string DiagnosticsRecord::csv_header() { return "t,Q,E,K,P,L,Qfunc,I,T,J,Ecrit"; }

std::string DiagnosticsRecord::csv_row() const {
    char buf[400];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", t, Q, E, K,
                  P, L, Qfunc, I, T, J, Ecrit);
    return buf;
}

} // namespace qnls
