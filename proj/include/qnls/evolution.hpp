// Strang-split time integration of the coupled system
//   i alpha_k du_k/dt + gamma_k Lap u_k - beta_k u_k + f_k(u) = 0
// for radial data: unitary Crank-Nicolson half steps for the linear flow
// around a pointwise RK4 solve of the nonlinear flow, with conservation
// and resolution monitoring.
#pragma once

#include "qnls/functionals.hpp"

namespace qnls {

struct EvolveConfig {
    double dt = 1e-3;
    double T = 1.0;
    int record_every = 10;
    double blowup_K_factor = 1e6;
    double tail_tol = 1e-4;
    double drift_tol = 1e-8; // per-step energy drift triggering dt halving
    int snapshot_every = 0;  // 0 disables field snapshots
    long max_steps = 50000000;
};

enum class Verdict { Completed, BlowupDetected, ResolutionLost };
const char* to_string(Verdict v);

struct TimeSeries {
    std::vector<DiagnosticsRecord> records;
    Verdict verdict = Verdict::Completed;
    double verdict_time = 0.0;
    std::vector<RadialField> snapshots;
    std::vector<double> snapshot_times;
    RadialField final_field;

    void write_csv(const std::string& path) const;
};

class Evolver {
public:
    Evolver(GridPtr grid, SystemParams params, std::shared_ptr<const Nonlinearity> nl);

    // One Strang step: half linear, full nonlinear, half linear.
    void step(RadialField& u, double dt);
    void step_linear_half(RadialField& u, double dt);
    void step_nonlinear(RadialField& u, double dt) const;

    TimeSeries evolve(const RadialField& u0, const EvolveConfig& cfg);

    // max over nodes of the relative change of sum_k sigma_k alpha_k |u_k|^2,
    // the quantity the nonlinear flow conserves pointwise.
    double pointwise_invariant_drift(const RadialField& before, const RadialField& after) const;

private:
    void ensure_propagators(double dt);

    GridPtr grid_;
    SystemParams params_;
    std::shared_ptr<const Nonlinearity> nl_;
    double cached_dt_ = -1.0;
    std::vector<CrankNicolson> cn_;
};

} // namespace qnls
