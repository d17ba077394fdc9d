// Acceptance suite: every criterion prints one PASS/FAIL line; the exit
// code is the number of failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qnls/concentration.hpp"
#include "qnls/evolution.hpp"
#include "qnls/virial.hpp"
#include "test_util.hpp"

using namespace qnls;
using namespace qnls::test;

namespace {

struct Runner {
    int failures = 0;

    void run(int id, const std::string& what, const std::function<void()>& body) {
        auto t0 = std::chrono::steady_clock::now();
        std::string err;
        try {
            body();
        } catch (const std::exception& e) {
            err = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (err.empty()) {
            std::printf("[PASS] criterion %2d: %s (%.1fs)\n", id, what.c_str(), secs);
        } else {
            std::printf("[FAIL] criterion %2d: %s (%.1fs): %s\n", id, what.c_str(), secs,
                        err.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

void require_close(double have, double want, double tol, const std::string& what) {
    double err = std::abs(have - want) / std::max(std::abs(want), 1e-300);
    require(err <= tol, what + ": have " + fmt(have) + ", want " + fmt(want) + ", rel err " +
                            fmt(err) + " > " + fmt(tol));
}

struct ScalarOracle {
    GridPtr grid;
    std::shared_ptr<Nonlinearity> nl = make_scalar_cubic();
    SystemParams params;
    GroundStateResult gs;

    ScalarOracle(int n, int M, double rmax, double omega) {
        grid = make_grid(n, M, rmax);
        params = SystemParams{n, 1, {1.0}, {1.0}, {0.0}, omega};
        GroundStateOptions opts;
        if (n == 6) {
            opts.tol = 5e-7;
            opts.max_iter = 20000;
        }
        gs = petviashvili(params, *nl, grid, default_seed(grid, 1), opts);
    }
};

} // namespace

int main() {
    Runner r;

    // ------------------------------------------------------------------
    r.run(1, "scalar oracle reproduces sech^2/2 with its functionals", [] {
        auto t0 = std::chrono::steady_clock::now();
        ScalarOracle o(1, 4096, 40.0, 2.0);
        double linf = 0.0;
        for (int i = 0; i < o.grid->size(); ++i)
            linf = std::max(linf, std::abs(o.gs.profile.comp(0)[i].real() -
                                           sech2_profile(o.grid->node(i))));
        require(linf <= 1e-4, "Linf profile error " + fmt(linf) + " > 1e-4");
        require_close(kinetic(o.gs.profile, o.params), 2.0 / 15.0, 1e-4 / (2.0 / 15.0), "K");
        require_close(potential(o.gs.profile, *o.nl), 4.0 / 15.0, 1e-4 / (4.0 / 15.0), "P");
        require_close(qfunc(o.gs.profile, o.params, *o.nl->sigma()), 2.0 / 3.0,
                      1e-4 / (2.0 / 3.0), "Qfunc");
        require_close(action_I(o.gs.profile, o.params, *o.nl), 2.0 / 15.0, 1e-4 / (2.0 / 15.0),
                      "I");
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        require(secs <= 10.0, "runtime " + fmt(secs) + "s exceeds 10s");
    });

    // ------------------------------------------------------------------
    r.run(2, "Pohozaev certification for every builtin at n in {1,3,5,6}", [] {
        for (const std::string name : {"kappa", "shg3", "thg"}) {
            for (int n : {1, 3, 5, 6}) {
                auto t0 = std::chrono::steady_clock::now();
                auto b = builtin(name, 0.5);
                b.params.n = n;
                b.params.omega = (n == 6) ? 0.0 : 1.0;
                auto nl = make_poly_nonlinearity(b.F, name);
                // the K = nI defect scales like h^2 and needs the finer
                // grid in five dimensions
                auto grid = (n == 5)   ? make_grid(5, 16384, 30.0)
                            : (n == 3) ? make_grid(3, 4096, 30.0)
                                       : make_grid(n, 4096, 40.0);
                GroundStateOptions opts;
                if (n == 6) {
                    opts.tol = 5e-7;
                    opts.max_iter = 20000;
                }
                auto gs = petviashvili(b.params, *nl, grid, default_seed(grid, b.params.l), opts);
                auto tag = name + " n=" + std::to_string(n);
                if (n == 6) {
                    require(gs.identities.dev_3PK <= 1e-4,
                            tag + ": |3P-K|/K = " + fmt(gs.identities.dev_3PK));
                } else {
                    require(gs.identities.dev_P2I <= 1e-4,
                            tag + ": |P-2I|/I = " + fmt(gs.identities.dev_P2I));
                    require(gs.identities.dev_KnI <= 1e-4,
                            tag + ": |K-nI|/I = " + fmt(gs.identities.dev_KnI));
                    require(gs.identities.dev_Q6nI <= 1e-4,
                            tag + ": |Q-(6-n)I|/I = " + fmt(gs.identities.dev_Q6nI));
                }
                double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                require(secs <= 120.0, tag + " runtime " + fmt(secs) + "s exceeds 2min");
            }
        }
    });

    // ------------------------------------------------------------------
    r.run(3, "sharp constant: equality at the ground state, inequality elsewhere", [] {
        ScalarOracle o(1, 8192, 40.0, 2.0);
        double C1 = sharp_constant(o.gs.profile, o.params, *o.nl, 1);
        double q = gn_quotient(o.gs.profile, o.params, *o.nl, 1);
        require_close(q, C1, 1e-5, "quotient vs sharp constant at psi");
        require(std::abs(C1 - 0.73253) <= 1e-4,
                "C1 = " + fmt(C1) + " not within 1e-4 of 0.73253");
        std::mt19937_64 rng(12345);
        int used = 0;
        for (int s = 0; s < 200 && used < 100; ++s) {
            auto f = random_smooth_field(o.grid, 1, rng);
            if (!(potential(f, *o.nl) > 0)) continue;
            ++used;
            double qq = gn_quotient(f, o.params, *o.nl, 1);
            require(qq <= C1 * (1.0 + 1e-6),
                    "random field quotient " + fmt(qq) + " exceeds C1 " + fmt(C1));
        }
        require(used == 100, "needed 100 admissible random fields");
    });

    // ------------------------------------------------------------------
    r.run(4, "symbolic checks: sigma, mass-resonance, gauge residual", [] {
        auto fk = build_fk(builtin("kappa").F);
        auto s = solve_sigma(fk);
        require(s.sigma && s.exact && s.verified, "kappa sigma not found exactly");
        require((*s.sigma) == std::vector<double>{1.0, 2.0}, "kappa sigma != (1,2)");

        auto fk3 = build_fk(builtin("shg3").F);
        auto s3 = solve_sigma(fk3);
        require(s3.sigma && s3.exact && s3.verified, "shg3 sigma not found exactly");
        require((*s3.sigma) == std::vector<double>{2.0, 1.0, 1.0}, "shg3 sigma != (2,1,1)");

        for (double kappa : {0.25, 0.5, 1.0, 2.0}) {
            auto b = builtin("kappa", kappa);
            auto fkk = build_fk(b.F);
            bool holds = check_mass_resonance(fkk, b.params).holds;
            require(holds == (kappa == 0.5),
                    "mass-resonance at kappa=" + fmt(kappa) + " reported " +
                        (holds ? "true" : "false"));
        }

        auto gr = check_gauge(fk, *s.sigma, 100);
        require(gr.max_fk_residual <= 1e-12 && gr.max_reF_residual <= 1e-12,
                "gauge residual " + fmt(gr.max_fk_residual));
    });

    // ------------------------------------------------------------------
    r.run(5, "conservation over 1e4 steps and second-order drift scaling", [] {
        auto b = builtin("kappa", 0.5);
        auto p = b.params;
        p.n = 1;
        p.omega = 0.0;
        auto nl = make_poly_nonlinearity(b.F, "kappa");
        auto g = make_grid(1, 2048, 20.0);
        auto u0 = from_function(g, 2, [](int k, double r) {
            double env = std::exp(-r * r);
            return k == 0 ? cdouble(0.5 * env, 0.15 * env) : cdouble(0.3 * env, -0.1 * env);
        });
        Evolver ev(g, p, nl);

        // 1e4 steps; the short horizon keeps the dispersing data away
        // from the wall while every step still exercises both substeps
        EvolveConfig cfg;
        cfg.dt = 1e-4;
        cfg.T = 1.0;
        cfg.record_every = 100;
        cfg.drift_tol = 1e300;
        auto ts = ev.evolve(u0, cfg);
        require(ts.verdict == Verdict::Completed, "main run did not complete");
        double q0 = ts.records.front().Q;
        double scale = std::max(std::abs(ts.records.front().E), ts.records.front().K);
        double dq = 0.0, de = 0.0;
        for (const auto& rec : ts.records) {
            dq = std::max(dq, std::abs(rec.Q - q0) / q0);
            de = std::max(de, std::abs(rec.E - ts.records.front().E) / scale);
        }
        require(dq <= 1e-8, "charge drift " + fmt(dq) + " > 1e-8");
        require(de <= 1e-6, "energy drift " + fmt(de) + " > 1e-6");

        auto drift = [&](double dt) {
            EvolveConfig c2;
            c2.dt = dt;
            c2.T = 1.0;
            c2.record_every = 25;
            c2.drift_tol = 1e300;
            auto t2 = ev.evolve(u0, c2);
            double worst = 0.0;
            for (const auto& rec : t2.records)
                worst = std::max(worst, std::abs(rec.E - t2.records.front().E));
            return worst;
        };
        double ratio = drift(2e-4) / drift(1e-4);
        require(std::abs(ratio - 4.0) <= 0.5,
                "dt-halving drift ratio " + fmt(ratio) + " outside 4 +- 0.5");

        // pointwise gauge invariant of the nonlinear substep
        auto u = u0;
        for (int s = 0; s < 25; ++s) {
            auto before = u;
            ev.step_nonlinear(u, 1e-3);
            double drift_pt = ev.pointwise_invariant_drift(before, u);
            require(drift_pt <= 1e-10, "pointwise invariant drift " + fmt(drift_pt));
            ev.step_linear_half(u, 1e-3);
        }
    });

    // ------------------------------------------------------------------
    r.run(6, "standing wave: modulus stationary to 1e-5 at T = 10", [] {
        ScalarOracle o(1, 4096, 40.0, 2.0);
        SystemParams pe = o.params;
        pe.omega = 0.0;
        Evolver ev(o.grid, pe, o.nl);
        EvolveConfig cfg;
        cfg.dt = 1e-3;
        cfg.T = 10.0;
        cfg.record_every = 1000;
        cfg.drift_tol = 1e300;
        auto ts = ev.evolve(o.gs.profile, cfg);
        require(ts.verdict == Verdict::Completed, "standing-wave run did not complete");
        double num = 0.0, den = 0.0;
        for (int i = 0; i < o.grid->size(); ++i) {
            double mod = std::abs(ts.final_field.comp(0)[i]);
            double ref = o.gs.profile.comp(0)[i].real();
            num += o.grid->weights()[i] * (mod - ref) * (mod - ref);
            den += o.grid->weights()[i] * ref * ref;
        }
        double err = std::sqrt(num / den);
        require(err <= 1e-5, "modulus L2 deviation " + fmt(err) + " > 1e-5");
    });

    // ------------------------------------------------------------------
    r.run(7, "virial identity at n = 4, resonant and corrected", [] {
        auto run = [](double kappa) {
            auto b = builtin("kappa", kappa);
            auto p = b.params;
            p.n = 4;
            p.omega = 0.0;
            auto nl = make_poly_nonlinearity(b.F, "kappa");
            auto g = make_grid(4, 1024, 16.0);
            Evolver ev(g, p, nl);
            EvolveConfig cfg;
            cfg.dt = 1e-3;
            cfg.T = 0.12;
            cfg.record_every = 1000000;
            cfg.snapshot_every = 1;
            cfg.drift_tol = 1e300;
            auto u0 = from_function(g, 2, [](int k, double r) {
                double env = std::exp(-r * r);
                return k == 0 ? cdouble(0.9 * env, 0.2 * env) : cdouble(0.5 * env, -0.3 * env);
            });
            auto ts = ev.evolve(u0, cfg);
            require(ts.verdict == Verdict::Completed, "virial run did not complete");
            return virial_identity_check(ts.snapshots, ts.snapshot_times, p, *nl);
        };
        auto resonant = run(0.5);
        require(resonant.max_mismatch_resonant <= 1e-3,
                "resonant mismatch " + fmt(resonant.max_mismatch_resonant) + " > 1e-3");
        auto skew = run(1.0);
        require(skew.max_mismatch_corrected <= 1e-3,
                "corrected mismatch " + fmt(skew.max_mismatch_corrected) + " > 1e-3");
        require(skew.max_mismatch_resonant > skew.max_mismatch_corrected,
                "correction term did not improve the identity");
    });

    // ------------------------------------------------------------------
    r.run(8, "classification round-trip: blow-up at n=6, global at n=5", [] {
        {
            ScalarOracle o(6, 4096, 40.0, 0.0);
            auto u0 = cdouble{1.1, 0.0} * o.gs.profile;
            auto cl = classify(u0, o.params, *o.nl, o.gs, o.params, 6);
            require(cl.verdict == ClassVerdict::BlowupCriteria, "1.1 psi not BlowupCriteria");

            Evolver ev(o.grid, o.params, o.nl);
            EvolveConfig cfg;
            cfg.dt = 1e-3;
            cfg.T = 5.0;
            cfg.record_every = 10;
            auto ts = ev.evolve(u0, cfg);
            require(ts.verdict == Verdict::BlowupDetected,
                    std::string("confirming run verdict ") + to_string(ts.verdict));
            auto mon = monitor_T(ts);
            require(mon.negative_throughout, "T_6 not negative throughout");
            for (std::size_t i = 1; i < ts.records.size(); ++i)
                require(ts.records[i].K >= ts.records[i - 1].K * (1.0 - 1e-10),
                        "K not monotone along the blow-up run");
            require(ts.records.back().K >= 2.0 * ts.records.front().K,
                    "K grew by less than 2x before detection");
        }
        {
            ScalarOracle o(5, 8192, 30.0, 1.0);
            auto u0 = cdouble{0.5, 0.0} * o.gs.profile;
            auto cl = classify(u0, o.params, *o.nl, o.gs, o.params, 5);
            require(cl.verdict == ClassVerdict::GlobalCriteria, "0.5 psi not GlobalCriteria");

            SystemParams pe = o.params;
            pe.omega = 0.0;
            Evolver ev(o.grid, pe, o.nl);
            EvolveConfig cfg;
            cfg.dt = 1e-3;
            cfg.T = 5.0;
            cfg.record_every = 50;
            cfg.drift_tol = 1e300;
            auto ts = ev.evolve(u0, cfg);
            require(ts.verdict == Verdict::Completed, "global run did not complete");
            double K0 = ts.records.front().K;
            double a = ts.records.front().E;
            double b = 2.0 * o.gs.sharp_constant *
                       std::pow(charge(u0, o.params, *o.nl->sigma()), 0.25);
            auto bs = bootstrap_gamma(a, b, 1.25);
            bool below = bs.branch(K0) == Bootstrap::Branch::Below;
            for (const auto& rec : ts.records) {
                require(rec.K <= 2.0 * K0, "K exceeded 2 K(u0): " + fmt(rec.K / K0));
                double f = a - rec.K + b * std::pow(rec.K, 1.25);
                require(f >= -1e-9 * std::max(std::abs(a), K0), "barrier f(K) went negative");
                if (below)
                    require(rec.K < bs.gamma, "trajectory crossed the barrier upward");
            }
        }
    });

    // ------------------------------------------------------------------
    r.run(9, "bootstrap lemma: exact barrier and branch separation", [] {
        auto bs = bootstrap_gamma(0.001, 2.0, 1.25);
        require(bs.gamma == 16.0 / 625.0, "gamma not exactly 16/625");
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> ub(0.5, 3.0), uq(1.1, 3.0), u01(0.0, 1.0);
        for (int trial = 0; trial < 1000; ++trial) {
            double bb = ub(rng), qq = uq(rng);
            double gam = std::pow(bb * qq, -1.0 / (qq - 1.0));
            double aa = 0.7 * (1.0 - 1.0 / qq) * gam;
            auto B = bootstrap_gamma(aa, bb, qq);
            require(B.admissible, "synthetic pair inadmissible");
            auto fof = [&](double x) { return aa - x + bb * std::pow(x, qq); };
            bool above = (trial % 2) == 0;
            double xstar = std::pow(1.0 / bb, 1.0 / (qq - 1.0));
            double x = above ? xstar * (1.0 + u01(rng)) : 0.9 * aa * u01(rng);
            for (int i = 0; i < 40; ++i) {
                double prop = x * (0.9 + 0.2 * u01(rng));
                if (fof(prop) >= 0.0) x = prop;
                require(fof(x) >= 0.0, "trajectory left the admissible set");
                require(above ? x > gam : x < gam, "trajectory crossed the barrier");
            }
        }
    });

    // ------------------------------------------------------------------
    r.run(10, "concentration suite", [] {
        auto g = make_grid(6, 4096, 40.0);
        auto nl = make_scalar_cubic();
        SystemParams p{6, 1, {1.0}, {1.0}, {0.0}, 0.0};
        auto u = from_function(g, 1, [](int, double r) {
            double mu = 1.5, d = 1.0 + mu * mu * r * r;
            return 8.0 * mu * mu / (d * d) * std::exp(-std::pow(r / 10.0, 8));
        });

        auto pr = concentration_profile(u, *nl);
        require(pr.monotone, "profile not monotone");
        double prev = -1.0;
        for (int i = 1; i <= 100; ++i) {
            double q = pr.at(0.4 * i);
            require(q >= prev, "Q(R) decreased");
            prev = q;
        }
        double P = potential_moduli(u, *nl);
        require(std::abs(pr.at(g->r_max()) - P) <= 1e-8 * P, "terminal Q(R) misses P");

        auto hc = half_concentration_rescale(u, *nl);
        auto hc2 = half_concentration_rescale(hc.rescaled, *nl);
        require(std::abs(hc2.Rm - 1.0) <= 1e-6, "rescale not idempotent: " + fmt(hc2.Rm));
        RadialField v = cdouble{hc.amplitude_scale, 0.0} * u;
        require_close(kinetic(hc.rescaled, p), kinetic(v, p), 1e-4, "K after rescale");
        require_close(potential(hc.rescaled, *nl), potential(v, *nl), 1e-4, "P after rescale");

        for (auto [rr, RR] : std::vector<std::pair<double, double>>{{1, 10}, {0.5, 20}, {2, 8}}) {
            LogCutoff chi(rr, RR);
            require_close(chi.grad_pow6_integral(), chi.grad_pow6_exact(), 1e-3,
                          "log-cutoff gradient identity");
        }

        GroundStateOptions opts;
        opts.tol = 5e-7;
        opts.max_iter = 20000;
        auto gs = petviashvili(p, *nl, g, default_seed(g, 1), opts);
        auto S = estimate_S(gs, p, *nl);
        double zeta = zeta_from_sobolev(sobolev_constant_estimate(*g));
        double delta = 0.5;
        double R = 8.0, rr = 0.9 * cutoff_Cdelta(delta, zeta) * R;
        std::vector<RadialField> fields;
        fields.push_back(from_function(g, 1, [rr](int, double x) {
            return x < rr ? std::exp(-x * x / (0.1 * rr * rr)) : 0.0;
        }));
        fields.push_back(RadialField(g, 1));
        fields.push_back(from_function(g, 1, [rr, R](int, double x) {
            double mid = 0.5 * (rr + R);
            return (x > rr && x < R) ? std::exp(-30.0 * (x - mid) * (x - mid)) : 0.0;
        }));
        fields.push_back(hc.rescaled);
        for (const auto& f : fields) {
            auto rep = localized_sobolev_check(f, p, *nl, rr, R, delta, S.S, zeta);
            require(rep.pass, "localized Sobolev inequality failed, margins " +
                                  fmt(rep.inner_margin) + " / " + fmt(rep.outer_margin));
        }
    });

    std::printf("%d criterion(s) failed\n", r.failures);
    return r.failures;
}
