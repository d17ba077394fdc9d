// Conserved quantities and variational functionals on radial fields:
// charge Q, energy E = K + L - 2P, the action I, the Pohozaev
// functional T_n = K - (n/2)P, the Weinstein quotient J = K^{3/2}/P and
// the sharp Gagliardo-Nirenberg / critical Sobolev constants.
#pragma once

#include <optional>
#include <string>

#include "qnls/grid.hpp"

namespace qnls {

double charge(const RadialField& f, const SystemParams& p, std::span<const double> sigma);
double kinetic(const RadialField& f, const SystemParams& p);
double potential(const RadialField& f, const Nonlinearity& nl); // Re int F(u)
double potential_moduli(const RadialField& f, const Nonlinearity& nl); // int F(|u|)
double mass_term(const RadialField& f, const SystemParams& p);  // sum beta_k |u_k|_2^2
double qfunc(const RadialField& f, const SystemParams& p, std::span<const double> sigma);
double energy(const RadialField& f, const SystemParams& p, const Nonlinearity& nl);
double action_I(const RadialField& f, const SystemParams& p, const Nonlinearity& nl);
double pohozaev_T(const RadialField& f, const SystemParams& p, const Nonlinearity& nl, int n);
double weinstein_J(const RadialField& f, const SystemParams& p, const Nonlinearity& nl);
double gn_quotient(const RadialField& f, const SystemParams& p, const Nonlinearity& nl, int n);

// n <= 5: 2 (6-n)^{(n-4)/4} n^{-n/4} Q(psi)^{-1/2} from a ground state;
// n = 6: 3^{-3/2} Ecrit(psi)^{-1/2}.
double sharp_constant(const RadialField& psi, const SystemParams& p, const Nonlinearity& nl,
                      int n);

struct DiagnosticsRecord {
    double t = 0;
    double Q = 0, E = 0, K = 0, P = 0, L = 0;
    double Qfunc = 0, I = 0, T = 0;
    double J = 0; // NaN when P <= 0
    double Ecrit = 0;

    static std::string csv_header();
    std::string csv_row() const;
};

DiagnosticsRecord make_record(double t, const RadialField& f, const SystemParams& p,
                              const Nonlinearity& nl);

} // namespace qnls
