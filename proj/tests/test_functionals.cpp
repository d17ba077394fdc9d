#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_util.hpp"

using namespace qnls;
using namespace qnls::test;

namespace {

struct Oracle1D {
    GridPtr grid = make_grid(1, 4096, 40.0);
    std::shared_ptr<Nonlinearity> nl = make_scalar_cubic();
    SystemParams params{1, 1, {1.0}, {1.0}, {0.0}, 2.0}; // omega = 2 so c = 1
    RadialField psi;

    Oracle1D() { psi = from_function(grid, 1, [](int, double r) { return sech2_profile(r); }); }
};

} // namespace

TEST_CASE("sech^2 closed-form functionals") {
    Oracle1D o;
    double K = kinetic(o.psi, o.params);
    double P = potential(o.psi, *o.nl);
    double Q = charge(o.psi, o.params, *o.nl->sigma());
    double Qf = qfunc(o.psi, o.params, *o.nl->sigma());
    double E = energy(o.psi, o.params, *o.nl);
    double I = action_I(o.psi, o.params, *o.nl);

    CHECK(rel_err(K, 2.0 / 15.0) <= 1e-5);
    CHECK(rel_err(P, 4.0 / 15.0) <= 1e-6);
    CHECK(rel_err(Q, 1.0 / 3.0) <= 1e-6);
    CHECK(rel_err(Qf, 2.0 / 3.0) <= 1e-6);
    CHECK(rel_err(E, -0.4) <= 1e-5);
    CHECK(rel_err(I, 2.0 / 15.0) <= 1e-5);

    // solution identities: Q(psi) = (6-n) I(psi) at n = 1
    CHECK(rel_err(Qf, 5.0 * I) <= 1e-4);
    // Pohozaev functional vanishes on the ground state
    CHECK(std::abs(pohozaev_T(o.psi, o.params, *o.nl, 1)) <= 1e-4 * K);
}

TEST_CASE("sharp constant and quotient at the 1D ground state") {
    Oracle1D o;
    double C1 = sharp_constant(o.psi, o.params, *o.nl, 1);
    double q = gn_quotient(o.psi, o.params, *o.nl, 1);
    const double C1_exact = std::sqrt(6.0) * std::pow(5.0, -0.75); // 2*5^{-3/4}*(2/3)^{-1/2}
    CHECK(rel_err(C1, C1_exact) <= 1e-5);
    CHECK(rel_err(q, C1_exact) <= 1e-4);
    CHECK(C1 == doctest::Approx(0.73253).epsilon(2e-4));
}

TEST_CASE("random fields never beat the sharp constant") {
    Oracle1D o;
    double C1 = sharp_constant(o.psi, o.params, *o.nl, 1);
    std::mt19937_64 rng(31);
    int with_positive_P = 0;
    for (int s = 0; s < 100; ++s) {
        auto f = random_smooth_field(o.grid, 1, rng);
        double P = potential(f, *o.nl);
        if (!(P > 0)) continue;
        ++with_positive_P;
        CHECK(gn_quotient(f, o.params, *o.nl, 1) <= C1 * (1.0 + 1e-6));
    }
    CHECK(with_positive_P > 50);
}

TEST_CASE("energy and Pohozaev definitional identities on records") {
    auto b = builtin("kappa", 0.5);
    b.params.n = 4;
    b.params.omega = 1.0;
    auto nl = make_poly_nonlinearity(b.F, "kappa");
    auto g = make_grid(4, 512, 12.0);
    std::mt19937_64 rng(37);
    for (int s = 0; s < 10; ++s) {
        auto f = random_smooth_field(g, 2, rng, true);
        auto r = make_record(0.0, f, b.params, *nl);
        double scale = std::abs(r.K) + std::abs(r.L) + std::abs(r.P) + 1.0;
        CHECK(std::abs(r.E - (r.K + r.L - 2.0 * r.P)) <= 1e-12 * scale);
        double T_alt = 0.25 * b.params.n * r.E - 0.25 * (b.params.n - 4.0) * r.K -
                       0.25 * b.params.n * r.L;
        CHECK(std::abs(r.T - T_alt) <= 1e-12 * scale);
    }
}

TEST_CASE("homogeneity of the functionals under amplitude scaling") {
    Oracle1D o;
    double K1 = kinetic(o.psi, o.params);
    double P1 = potential(o.psi, *o.nl);
    double Q1 = charge(o.psi, o.params, *o.nl->sigma());
    RadialField two = cdouble{2.0, 0.0} * o.psi;
    CHECK(rel_err(kinetic(two, o.params), 4.0 * K1) <= 1e-12);
    CHECK(rel_err(potential(two, *o.nl), 8.0 * P1) <= 1e-12);
    CHECK(rel_err(charge(two, o.params, *o.nl->sigma()), 4.0 * Q1) <= 1e-12);
}

TEST_CASE("domain guards") {
    Oracle1D o;
    RadialField zero(o.grid, 1);
    CHECK(charge(zero, o.params, *o.nl->sigma()) == 0.0);
    CHECK(energy(zero, o.params, *o.nl) == 0.0);
    CHECK(action_I(zero, o.params, *o.nl) == 0.0);
    CHECK(pohozaev_T(zero, o.params, *o.nl, 1) == 0.0);
    CHECK_THROWS_AS(weinstein_J(zero, o.params, *o.nl), std::domain_error);

    // the scalar-cubic F = |u|^3 is sign-blind
    auto neg = from_function(o.grid, 1, [](int, double r) { return -std::exp(-r * r); });
    CHECK(potential(neg, *o.nl) > 0);
    CHECK_THROWS_AS(charge(zero, o.params, std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("negative potential makes the Pohozaev functional exceed K") {
    // polynomial F = z1^3 takes negative values on negative reals
    auto F = InteractionPoly::parse("z1^3", 1);
    auto nl = make_poly_nonlinearity(F, "cubic-poly");
    SystemParams p{1, 1, {1.0}, {1.0}, {0.0}, 0.0};
    auto g = make_grid(1, 512, 20.0);
    auto f = from_function(g, 1, [](int, double r) { return -std::exp(-r * r); });
    double P = potential(f, *nl);
    CHECK(P < 0);
    double K = kinetic(f, p);
    CHECK(pohozaev_T(f, p, *nl, 1) > K);
    CHECK(K > 0);
}

TEST_CASE("diagnostics CSV layout") {
    CHECK(DiagnosticsRecord::csv_header() == "t,Q,E,K,P,L,Qfunc,I,T,J,Ecrit");
    DiagnosticsRecord r;
    r.t = 0.5;
    auto row = r.csv_row();
    CHECK(row.substr(0, 4) == "0.5,");
}
