#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "qnls/functionals.hpp"
#include "qnls/ground_state.hpp"

namespace qnls::test {

inline GridPtr make_grid(int n, int M, double r_max) {
    return std::make_shared<RadialGrid>(n, M, r_max);
}

inline RadialField from_function(GridPtr g, int l,
                                 const std::function<cdouble(int k, double r)>& fn) {
    RadialField f(g, l);
    for (int k = 0; k < l; ++k)
        for (int i = 0; i < g->size(); ++i) f.comp(k)[i] = fn(k, g->node(i));
    return f;
}

// closed-form ground state of -psi'' + psi = 3 psi^2 on the line
inline double sech2_profile(double r) {
    double s = 1.0 / std::cosh(0.5 * r);
    return 0.5 * s * s;
}

inline RadialField random_smooth_field(GridPtr g, int l, std::mt19937_64& rng,
                                       bool complex_parts = false) {
    std::uniform_real_distribution<double> amp(0.2, 1.0), width(0.5, 2.0), shift(0.0, 1.5);
    RadialField f(g, l);
    for (int k = 0; k < l; ++k) {
        double a = amp(rng), w = width(rng), c = shift(rng);
        double b = complex_parts ? amp(rng) : 0.0;
        for (int i = 0; i < g->size(); ++i) {
            double r = g->node(i);
            double env = std::exp(-(r - c) * (r - c) / (w * w)) + std::exp(-r * r / (w * w));
            f.comp(k)[i] = cdouble(a * env, b * env * std::sin(r));
        }
    }
    return f;
}

inline double rel_err(double have, double want) {
    return std::abs(have - want) / (std::abs(want) > 0 ? std::abs(want) : 1.0);
}

} // namespace qnls::test
