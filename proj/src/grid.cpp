#include "qnls/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qnls {

double RadialGrid::unit_sphere_area(int n) {
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

RadialGrid::RadialGrid(int n, int M, double r_max) : n_(n), M_(M), rmax_(r_max) {
    if (n < 1 || n > 6) throw std::invalid_argument("grid dimension must be in 1..6");
    if (M < 16) throw std::invalid_argument("grid needs at least 16 cells");
    if (!(r_max > 0)) throw std::invalid_argument("r_max must be positive");
    h_ = r_max / M;
    sn_ = unit_sphere_area(n);
    r_.resize(M);
    w_.resize(M);
    fa_.resize(M + 1);
    fc_.resize(M + 1);
    for (int i = 0; i <= M; ++i) fa_[i] = sn_ * std::pow(h_ * i, n - 1);
    for (int i = 0; i < M; ++i) {
        r_[i] = (i + 0.5) * h_;
        w_[i] = sn_ * std::pow(r_[i], n - 1) * h_;
    }
    fc_[0] = 0.0;
    double partial = 0.0;
    for (int j = 1; j <= M; ++j) {
        partial += w_[j - 1];
        fc_[j] = n * partial / (h_ * j);
    }
}

double RadialGrid::ball_volume() const { return sn_ / n_ * std::pow(rmax_, n_); }

RadialField::RadialField(GridPtr grid, int l) : grid_(std::move(grid)) {
    data_.assign(l, std::vector<cdouble>(grid_->size(), cdouble{0.0, 0.0}));
}

bool RadialField::finite() const {
    for (const auto& c : data_)
        for (cdouble v : c)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double RadialField::max_abs() const {
    double m = 0.0;
    for (const auto& c : data_)
        for (cdouble v : c) m = std::max(m, std::abs(v));
    return m;
}

double RadialField::tail_ratio() const {
    const int M = grid_->size();
    const int tail = std::max(1, M / 20);
    double mt = 0.0;
    for (const auto& c : data_)
        for (int i = M - tail; i < M; ++i) mt = std::max(mt, std::abs(c[i]));
    double m = max_abs();
    return m > 0 ? mt / m : 0.0;
}

RadialField& RadialField::operator*=(cdouble s) {
    for (auto& c : data_)
        for (auto& v : c) v *= s;
    return *this;
}

namespace {

template <class T>
T pairwise_sum(std::span<const T> v) {
    if (v.size() <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

} // namespace

double integrate(const RadialGrid& g, std::span<const double> s) {
    if ((int)s.size() != g.size()) throw std::invalid_argument("sample/grid size mismatch");
    std::vector<double> tmp(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) tmp[i] = g.weights()[i] * s[i];
    return pairwise_sum(std::span<const double>(tmp));
}

cdouble integrate(const RadialGrid& g, std::span<const cdouble> s) {
    if ((int)s.size() != g.size()) throw std::invalid_argument("sample/grid size mismatch");
    std::vector<cdouble> tmp(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) tmp[i] = g.weights()[i] * s[i];
    return pairwise_sum(std::span<const cdouble>(tmp));
}

cdouble inner(const RadialGrid& g, std::span<const cdouble> u, std::span<const cdouble> v) {
    if (u.size() != v.size()) throw std::invalid_argument("field size mismatch");
    std::vector<cdouble> tmp(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = g.weights()[i] * std::conj(u[i]) * v[i];
    return pairwise_sum(std::span<const cdouble>(tmp));
}

double norm_sq(const RadialGrid& g, std::span<const cdouble> u) {
    std::vector<double> tmp(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) tmp[i] = g.weights()[i] * std::norm(u[i]);
    return pairwise_sum(std::span<const double>(tmp));
}

double grad_sq(const RadialGrid& g, std::span<const cdouble> u) {
    const int M = g.size();
    const double h = g.h();
    std::vector<double> tmp(M);
    for (int j = 1; j < M; ++j) {
        double d = std::abs(u[j] - u[j - 1]) / h;
        tmp[j - 1] = g.flux_coeff(j) * h * d * d;
    }
    double d = std::abs(u[M - 1]) / h; // Dirichlet ghost at the wall
    tmp[M - 1] = g.flux_coeff(M) * h * d * d;
    return pairwise_sum(std::span<const double>(tmp));
}

void laplacian(const RadialGrid& g, std::span<const cdouble> u, std::span<cdouble> out) {
    const int M = g.size();
    const double h = g.h();
    cdouble flux_prev{0.0, 0.0}; // zero flux at r = 0
    for (int i = 0; i < M; ++i) {
        cdouble up = (i + 1 < M) ? u[i + 1] : cdouble{0.0, 0.0};
        cdouble flux_next = g.flux_coeff(i + 1) * (up - u[i]) / h;
        out[i] = (flux_next - flux_prev) / g.weights()[i];
        flux_prev = flux_next;
    }
}

RadialField laplacian(const RadialField& f) {
    RadialField out(f.grid(), f.components());
    for (int k = 0; k < f.components(); ++k) laplacian(*f.grid(), f.comp(k), out.comp(k));
    return out;
}

namespace {

// Thomas solve; the Helmholtz matrix is SPD w.r.t. the cell volumes so no
// pivoting is needed, but a vanishing pivot is reported.
template <class T>
void thomas(std::span<const T> lower, std::span<const T> diag, std::span<const T> upper,
            std::span<const T> rhs, std::span<T> x, std::vector<T>& cprime) {
    const std::size_t n = diag.size();
    cprime.resize(n);
    T piv = diag[0];
    if (std::abs(piv) == 0.0) throw std::runtime_error("singular tridiagonal system");
    cprime[0] = upper[0] / piv;
    x[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i] * cprime[i - 1];
        if (std::abs(piv) == 0.0) throw std::runtime_error("singular tridiagonal system");
        cprime[i] = upper[i] / piv;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cprime[i] * x[i + 1];
}

} // namespace

void helmholtz_solve(const RadialGrid& g, std::span<const cdouble> rhs, double gamma, double c,
                     std::span<cdouble> out) {
    const int M = g.size();
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    std::vector<cdouble> lo(M), di(M), up(M);
    const double h = g.h();
    for (int i = 0; i < M; ++i) {
        double a_lo = g.flux_coeff(i), a_up = g.flux_coeff(i + 1);
        double w = g.weights()[i];
        double couple_lo = (i > 0) ? gamma * a_lo / (h * w) : 0.0;
        double couple_up = gamma * a_up / (h * w); // row M-1 keeps the Dirichlet ghost term
        lo[i] = -couple_lo;
        up[i] = (i + 1 < M) ? -couple_up : cdouble{0.0, 0.0};
        di[i] = couple_lo + couple_up + c;
    }
    std::vector<cdouble> cprime;
    thomas<cdouble>(lo, di, up, rhs, out, cprime);
}

std::vector<double> helmholtz_solve(const RadialGrid& g, std::span<const double> rhs, double gamma,
                                    double c) {
    std::vector<cdouble> r(rhs.size()), x(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) r[i] = rhs[i];
    helmholtz_solve(g, r, gamma, c, x);
    std::vector<double> out(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) out[i] = x[i].real();
    return out;
}

CrankNicolson::CrankNicolson(GridPtr grid, double alpha, double gamma, double beta, double dt)
    : grid_(std::move(grid)) {
    const int M = grid_->size();
    const double h = grid_->h();
    // (I - i tau/2 A) u' = (I + i tau/2 A) u with A = (gamma Lap - beta)/alpha
    // and tau = dt/2, i.e. coefficient mu = dt/(4 alpha).
    const cdouble mu = cdouble(0.0, dt / (4.0 * alpha));
    diag_.resize(M);
    lower_.resize(M);
    upper_.resize(M);
    rdiag_.resize(M);
    rlower_.resize(M);
    rupper_.resize(M);
    for (int i = 0; i < M; ++i) {
        double a_lo = grid_->flux_coeff(i), a_up = grid_->flux_coeff(i + 1);
        double w = grid_->weights()[i];
        double couple_lo = (i > 0) ? gamma * a_lo / (h * w) : 0.0;
        double couple_up = gamma * a_up / (h * w);
        double Adiag = -(couple_lo + couple_up) - beta;
        lower_[i] = -mu * couple_lo;
        upper_[i] = (i + 1 < M) ? -mu * couple_up : cdouble{0.0, 0.0};
        diag_[i] = 1.0 - mu * Adiag;
        rlower_[i] = -lower_[i];
        rupper_[i] = -upper_[i];
        rdiag_[i] = 2.0 - diag_[i];
    }
}

void CrankNicolson::apply(std::span<cdouble> u) const {
    const int M = grid_->size();
    scratch_.resize(M);
    for (int i = 0; i < M; ++i) {
        cdouble v = rdiag_[i] * u[i];
        if (i > 0) v += rlower_[i] * u[i - 1];
        if (i + 1 < M) v += rupper_[i] * u[i + 1];
        scratch_[i] = v;
    }
    thomas<cdouble>(lower_, diag_, upper_, scratch_, u, cprime_);
}

void write_csv(const RadialField& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path);
    std::fprintf(fp, "r");
    for (int k = 1; k <= f.components(); ++k) std::fprintf(fp, ",re_u%d,im_u%d", k, k);
    std::fprintf(fp, "\n");
    const auto& g = *f.grid();
    for (int i = 0; i < g.size(); ++i) {
        std::fprintf(fp, "%.17g", g.node(i));
        for (int k = 0; k < f.components(); ++k)
            std::fprintf(fp, ",%.17g,%.17g", f.comp(k)[i].real(), f.comp(k)[i].imag());
        std::fprintf(fp, "\n");
    }
    std::fclose(fp);
}

void write_binary(const RadialField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    const auto& g = *f.grid();
    std::int64_t hdr[3] = {g.dim(), f.components(), g.size()};
    double rmax = g.r_max();
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    out.write(reinterpret_cast<const char*>(&rmax), sizeof rmax);
    for (int k = 0; k < f.components(); ++k)
        out.write(reinterpret_cast<const char*>(f.comp(k).data()),
                  sizeof(cdouble) * g.size());
}

RadialField read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::int64_t hdr[3];
    double rmax;
    in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    in.read(reinterpret_cast<char*>(&rmax), sizeof rmax);
    if (!in) throw std::runtime_error("truncated snapshot " + path);
    auto grid = std::make_shared<RadialGrid>((int)hdr[0], (int)hdr[2], rmax);
    RadialField f(grid, (int)hdr[1]);
    for (int k = 0; k < f.components(); ++k)
        in.read(reinterpret_cast<char*>(f.comp(k).data()), sizeof(cdouble) * grid->size());
    if (!in) throw std::runtime_error("truncated snapshot " + path);
    return f;
}

cdouble sample_field(const RadialGrid& g, std::span<const cdouble> u, double r) {
    const int M = g.size();
    const double h = g.h();
    if (r >= g.r_max()) return {0.0, 0.0};
    // node index with even reflection below r_0 and Dirichlet beyond wall
    auto at = [&](long i) -> cdouble {
        if (i < 0) i = -i - 1;
        if (i >= M) return {0.0, 0.0};
        return u[i];
    };
    double s = r / h - 0.5;
    long i1 = (long)std::floor(s);
    double t = s - i1;
    cdouble p0 = at(i1 - 1), p1 = at(i1), p2 = at(i1 + 1), p3 = at(i1 + 2);
    cdouble a = 0.5 * (-p0 + 3.0 * p1 - 3.0 * p2 + p3);
    cdouble b = 0.5 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3);
    cdouble c = 0.5 * (-p0 + p2);
    return ((a * t + b) * t + c) * t + p1;
}

} // namespace qnls
