// Cell-centered radial discretization of R^n for radially symmetric
// fields: quadrature, radial Laplacian in conservation form, and
// tridiagonal Helmholtz solves. Nodes sit at r_i = (i+1/2) h so the
// (n-1)/r term never touches r = 0.
#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qnls/nonlinearity.hpp"

namespace qnls {

class RadialGrid {
public:
    RadialGrid(int n, int M, double r_max);

    int dim() const { return n_; }
    int size() const { return M_; }
    double r_max() const { return rmax_; }
    double h() const { return h_; }
    double node(int i) const { return r_[i]; }
    double face(int i) const { return h_ * i; } // faces at i h, i = 0..M
    const std::vector<double>& nodes() const { return r_; }
    // quadrature weights s_n r_i^{n-1} h (midpoint rule in r)
    const std::vector<double>& weights() const { return w_; }
    double face_area(int i) const { return fa_[i]; }
    // Flux coefficients of the discrete Laplacian. They telescope the
    // weight sums (c_j r_j = n s_n h sum_{i<j} r_i^{n-1}), which makes
    // the operator exactly self-adjoint w.r.t. the quadrature weights
    // and exact on u = r^2. Within O(h^2) of the face areas; identical
    // for n <= 2.
    double flux_coeff(int i) const { return fc_[i]; }
    double sphere_area() const { return sn_; } // s_n = 2 pi^{n/2} / Gamma(n/2)
    double ball_volume() const;                // vol B(0, r_max)

    static double unit_sphere_area(int n);

private:
    int n_, M_;
    double rmax_, h_, sn_;
    std::vector<double> r_, w_, fa_, fc_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

class RadialField {
public:
    RadialField() = default;
    RadialField(GridPtr grid, int l);

    GridPtr grid() const { return grid_; }
    int components() const { return (int)data_.size(); }
    std::vector<cdouble>& comp(int k) { return data_[k]; }
    const std::vector<cdouble>& comp(int k) const { return data_[k]; }

    bool finite() const;
    double max_abs() const;
    double tail_ratio() const; // max over trailing 5% of nodes / max_abs

    RadialField& operator*=(cdouble s);
    friend RadialField operator*(cdouble s, RadialField f) {
        f *= s;
        return f;
    }

private:
    GridPtr grid_;
    std::vector<std::vector<cdouble>> data_;
};

// sum w_i g_i with pairwise (deterministic) reduction
double integrate(const RadialGrid& g, std::span<const double> samples);
cdouble integrate(const RadialGrid& g, std::span<const cdouble> samples);
cdouble inner(const RadialGrid& g, std::span<const cdouble> u, std::span<const cdouble> v);
double norm_sq(const RadialGrid& g, std::span<const cdouble> u);

// int |d_r u|^2 dmu via face-midpoint differences; by construction equal
// to the Dirichlet form of the discrete Laplacian (outer face sees the
// homogeneous Dirichlet ghost).
double grad_sq(const RadialGrid& g, std::span<const cdouble> u);

// (1/V_i) [A_{i+1}(u_{i+1}-u_i)/h - A_i(u_i-u_{i-1})/h]; zero flux at
// r = 0, Dirichlet ghost beyond r_max. Exact (= 2n) on u = r^2.
void laplacian(const RadialGrid& g, std::span<const cdouble> u, std::span<cdouble> out);
RadialField laplacian(const RadialField& f);

// Solves (-gamma Lap + c) u = rhs. Throws on a singular system.
void helmholtz_solve(const RadialGrid& g, std::span<const cdouble> rhs, double gamma, double c,
                     std::span<cdouble> out);
std::vector<double> helmholtz_solve(const RadialGrid& g, std::span<const double> rhs, double gamma,
                                    double c);

// Crank-Nicolson factor for the unitary half step of
// i alpha u_t = -(gamma Lap - beta) u; reusable across steps.
class CrankNicolson {
public:
    CrankNicolson(GridPtr grid, double alpha, double gamma, double beta, double dt);
    void apply(std::span<cdouble> u) const; // one half step of length dt/2

private:
    GridPtr grid_;
    std::vector<cdouble> diag_, lower_, upper_, rdiag_, rlower_, rupper_;
    mutable std::vector<cdouble> scratch_, cprime_;
};

// Snapshot formats: CSV (r, Re u_k, Im u_k per component) and a compact
// binary (header n, l, M, r_max; little-endian doubles).
void write_csv(const RadialField& f, const std::string& path);
void write_binary(const RadialField& f, const std::string& path);
RadialField read_binary(const std::string& path);

// Cubic (Catmull-Rom) sample of a field component at radius r, even
// reflection at the origin, zero beyond r_max.
cdouble sample_field(const RadialGrid& g, std::span<const cdouble> u, double r);

} // namespace qnls
