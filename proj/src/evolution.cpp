#include "qnls/evolution.hpp"

#include <cmath>
#include <cstdio>

namespace qnls {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Completed: return "Completed";
        case Verdict::BlowupDetected: return "BlowupDetected";
        case Verdict::ResolutionLost: return "ResolutionLost";
    }
    return "?";
}

void TimeSeries::write_csv(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path);
    std::fprintf(fp, "%s\n", DiagnosticsRecord::csv_header().c_str());
    for (const auto& r : records) std::fprintf(fp, "%s\n", r.csv_row().c_str());
    std::fclose(fp);
}

Evolver::Evolver(GridPtr grid, SystemParams params, std::shared_ptr<const Nonlinearity> nl)
    : grid_(std::move(grid)), params_(std::move(params)), nl_(std::move(nl)) {
    params_.validate();
    if (nl_->components() != params_.l)
        throw std::invalid_argument("nonlinearity/parameter component mismatch");
}

void Evolver::ensure_propagators(double dt) {
    if (dt == cached_dt_) return;
    cn_.clear();
    cn_.reserve(params_.l);
    for (int k = 0; k < params_.l; ++k)
        cn_.emplace_back(grid_, params_.alpha[k], params_.gamma[k], params_.beta[k], dt);
    cached_dt_ = dt;
}

void Evolver::step_linear_half(RadialField& u, double dt) {
    ensure_propagators(dt);
    for (int k = 0; k < params_.l; ++k) cn_[k].apply(u.comp(k));
}

void Evolver::step_nonlinear(RadialField& u, double dt) const {
    // pointwise ODE i alpha_k u_k' = -f_k(u), RK4 in 4 substeps
    const int l = params_.l;
    const int M = grid_->size();
    const double h = dt / 4.0;
    std::vector<cdouble> y(l), k1(l), k2(l), k3(l), k4(l), tmp(l), fv(l);
    std::vector<cdouble> ia(l);
    for (int k = 0; k < l; ++k) ia[k] = cdouble(0.0, 1.0 / params_.alpha[k]);
    for (int i = 0; i < M; ++i) {
        for (int k = 0; k < l; ++k) y[k] = u.comp(k)[i];
        for (int s = 0; s < 4; ++s) {
            nl_->fk(y, fv);
            for (int k = 0; k < l; ++k) k1[k] = ia[k] * fv[k];
            for (int k = 0; k < l; ++k) tmp[k] = y[k] + 0.5 * h * k1[k];
            nl_->fk(tmp, fv);
            for (int k = 0; k < l; ++k) k2[k] = ia[k] * fv[k];
            for (int k = 0; k < l; ++k) tmp[k] = y[k] + 0.5 * h * k2[k];
            nl_->fk(tmp, fv);
            for (int k = 0; k < l; ++k) k3[k] = ia[k] * fv[k];
            for (int k = 0; k < l; ++k) tmp[k] = y[k] + h * k3[k];
            nl_->fk(tmp, fv);
            for (int k = 0; k < l; ++k) k4[k] = ia[k] * fv[k];
            for (int k = 0; k < l; ++k)
                y[k] += (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
        for (int k = 0; k < l; ++k) u.comp(k)[i] = y[k];
    }
}

void Evolver::step(RadialField& u, double dt) {
    step_linear_half(u, dt);
    step_nonlinear(u, dt);
    step_linear_half(u, dt);
}

double Evolver::pointwise_invariant_drift(const RadialField& before,
                                          const RadialField& after) const {
    const auto* s = nl_->sigma();
    if (!s) throw std::invalid_argument("pointwise invariant needs sigma");
    double worst = 0.0;
    for (int i = 0; i < grid_->size(); ++i) {
        double a = 0.0, b = 0.0;
        for (int k = 0; k < params_.l; ++k) {
            a += (*s)[k] * params_.alpha[k] * std::norm(before.comp(k)[i]);
            b += (*s)[k] * params_.alpha[k] * std::norm(after.comp(k)[i]);
        }
        worst = std::max(worst, std::abs(a - b) / (a + 1e-300));
    }
    return worst;
}

TimeSeries Evolver::evolve(const RadialField& u0, const EvolveConfig& cfg) {
    if (!(cfg.dt > 0) || !(cfg.T > 0)) throw std::invalid_argument("dt and T must be positive");
    TimeSeries ts;
    RadialField u = u0;
    double t = 0.0, dt = cfg.dt;

    DiagnosticsRecord r0 = make_record(0.0, u, params_, *nl_);
    ts.records.push_back(r0);
    const double K0 = r0.K;
    const double scale = std::max({std::abs(r0.E), std::abs(r0.K), 1e-300});
    double E_prev = r0.E;

    if (cfg.snapshot_every > 0) {
        ts.snapshots.push_back(u);
        ts.snapshot_times.push_back(0.0);
    }

    long accepted = 0;
    int halvings = 0;
    RadialField backup = u;
    const double t_end = cfg.T * (1.0 - 1e-12);
    while (t < t_end) {
        double dtc = std::min(dt, cfg.T - t);
        backup = u;
        step(u, dtc);
        bool finite = u.finite();
        double Kn = 0, Pn = 0, Ln = 0, E_now = 0;
        if (finite) {
            Kn = kinetic(u, params_);
            Pn = potential(u, *nl_);
            Ln = mass_term(u, params_);
            E_now = Kn + Ln - 2.0 * Pn;
        }
        // a non-finite trial step counts as unbounded energy drift: let
        // the halving cascade try to control it
        if (!finite || std::abs(E_now - E_prev) > cfg.drift_tol * scale) {
            u = backup;
            dt = 0.5 * dtc;
            if (++halvings > 5) {
                // with the drift monitor disabled only NaN lands here
                ts.verdict = cfg.drift_tol < 1e100 ? Verdict::BlowupDetected
                                                   : Verdict::ResolutionLost;
                ts.verdict_time = t;
                break;
            }
            continue;
        }
        halvings = 0;
        t += dtc;
        E_prev = E_now;
        ++accepted;

        if ((accepted % cfg.record_every == 0) || t >= t_end)
            ts.records.push_back(make_record(t, u, params_, *nl_));
        if (cfg.snapshot_every > 0 && accepted % cfg.snapshot_every == 0) {
            ts.snapshots.push_back(u);
            ts.snapshot_times.push_back(t);
        }
        if (Kn > cfg.blowup_K_factor * std::max(K0, 1e-300)) {
            ts.verdict = Verdict::BlowupDetected;
            ts.verdict_time = t;
            break;
        }
        if (u.tail_ratio() > cfg.tail_tol) {
            ts.verdict = Verdict::ResolutionLost;
            ts.verdict_time = t;
            break;
        }
        if (accepted > cfg.max_steps) {
            ts.verdict = Verdict::ResolutionLost;
            ts.verdict_time = t;
            break;
        }
    }
    if (ts.records.back().t != t) ts.records.push_back(make_record(t, u, params_, *nl_));
    ts.final_field = u;
    if (ts.verdict == Verdict::Completed) ts.verdict_time = t;
    return ts;
}

} // namespace qnls
