// Interaction polynomials F(z1,...,zl, conj(z1),...) and the derived
// nonlinearities f_k = dF/dconj(z_k) + conj(dF/dz_k), together with the
// structural checks a quadratic Schrodinger system has to satisfy
// (gauge weights sigma, mass-resonance, homogeneity, positivity).
#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qnls/rational.hpp"

namespace qnls {

using cdouble = std::complex<double>;

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
          pos(position) {}
    std::size_t pos;
};

// c * z^a * conj(z)^b with multi-indices a, b of length l.
struct Monomial {
    Coeff coeff;
    std::vector<int> holo;
    std::vector<int> anti;

    int degree() const {
        int d = 0;
        for (int e : holo) d += e;
        for (int e : anti) d += e;
        return d;
    }
};

class InteractionPoly {
public:
    InteractionPoly() = default;
    explicit InteractionPoly(int l) : l_(l) {}

    static InteractionPoly parse(const std::string& text, int l);

    int components() const { return l_; }
    const std::vector<Monomial>& monomials() const { return terms_; }
    bool canonical() const { return canonical_; }
    bool empty() const { return terms_.empty(); }
    bool coefficients_exact() const;

    void add_term(Monomial m);
    InteractionPoly canonicalized() const;

    cdouble eval(std::span<const cdouble> z) const;
    // F restricted to real non-negative arguments; used for F(|u_1|,...).
    double eval_moduli(std::span<const double> y) const;

    InteractionPoly conjugated() const;             // conj coeffs, swap (a,b)
    InteractionPoly wirtinger_z(int k) const;       // d/dz_k
    InteractionPoly wirtinger_zbar(int k) const;    // d/dconj(z_k)
    InteractionPoly scaled(const Coeff& c) const;
    friend InteractionPoly operator+(const InteractionPoly& a, const InteractionPoly& b);
    friend InteractionPoly operator*(const InteractionPoly& a, const InteractionPoly& b);

    std::string pretty() const;

private:
    int l_ = 0;
    bool canonical_ = false;
    std::vector<Monomial> terms_;
};

struct SystemParams {
    int n = 1;                  // spatial dimension, 1..6
    int l = 1;                  // component count
    std::vector<double> alpha;  // alpha_k > 0
    std::vector<double> gamma;  // gamma_k > 0
    std::vector<double> beta;   // beta_k >= 0
    double omega = 0.0;

    void validate() const;
    std::vector<double> masses() const; // m_k = alpha_k / (2 gamma_k)
};

struct DerivedNonlinearity {
    int l = 0;
    std::vector<InteractionPoly> components; // f_1,...,f_l
    std::optional<std::vector<double>> sigma;
    std::vector<Coeff> sigma_exact; // nonempty iff sigma found exactly
    InteractionPoly source;
};

DerivedNonlinearity build_fk(const InteractionPoly& F);

struct HomogeneityReport {
    bool degree3 = true;
    std::vector<Monomial> offending;
    double max_scaling_residual = 0.0; // relative, from sampled F(lambda z) = lambda^3 F(z)
};
HomogeneityReport check_homogeneity(const InteractionPoly& F, unsigned seed = 12345);

struct SigmaResult {
    std::optional<std::vector<double>> sigma; // normalized so min = 1
    int nullspace_dim = 0;
    bool exact = false;     // found by exact rational elimination
    bool verified = false;  // Im sum sigma_k f_k conj(z_k) cancels identically
};
SigmaResult solve_sigma(DerivedNonlinearity& fk);

struct MassResonanceReport {
    bool holds = false;
    InteractionPoly residual; // Im sum m_k f_k(z) conj(z_k) as a polynomial
    double residual_scale = 0.0;
};
MassResonanceReport check_mass_resonance(const DerivedNonlinearity& fk, const SystemParams& params);

struct GaugeReport {
    double max_fk_residual = 0.0;  // |f_k(e^{i sigma theta/2} z) - e^{i sigma_k theta/2} f_k(z)|
    double max_reF_residual = 0.0; // Re F invariance under the same rotation
};
GaugeReport check_gauge(const DerivedNonlinearity& fk, std::span<const double> sigma,
                        int samples = 100, unsigned seed = 12345);

enum class CheckStatus { ExactPass, SampledPass, Fail, Declared };
const char* to_string(CheckStatus s);

struct HypothesisReport {
    struct Item {
        std::string name;
        CheckStatus status;
        std::string note;
    };
    std::vector<Item> items;
    bool all_passed = true;
    bool nontrivial = true;

    void add(const std::string& name, CheckStatus st, const std::string& note = "");
};

// H8 decompositions may be declared as groups of monomial indices; by
// default every monomial is its own super-modular piece.
HypothesisReport check_structure(const InteractionPoly& F, const DerivedNonlinearity& fk,
                                 const SystemParams& params,
                                 const std::vector<std::vector<int>>* declared_h8 = nullptr,
                                 unsigned seed = 12345);

// Runtime evaluation interface shared by polynomial systems and the one
// hard-coded non-polynomial oracle F = |z|^3.
class Nonlinearity {
public:
    virtual ~Nonlinearity() = default;
    virtual int components() const = 0;
    virtual cdouble F(std::span<const cdouble> z) const = 0;
    virtual void fk(std::span<const cdouble> z, std::span<cdouble> out) const = 0;
    virtual double F_moduli(std::span<const double> y) const = 0;
    virtual const std::vector<double>* sigma() const = 0;
    virtual std::string name() const = 0;
    virtual const DerivedNonlinearity* poly() const { return nullptr; }
};

class PolyNonlinearity final : public Nonlinearity {
public:
    PolyNonlinearity(InteractionPoly F, DerivedNonlinearity fk, std::string name)
        : F_(std::move(F)), fk_(std::move(fk)), name_(std::move(name)) {}

    int components() const override { return F_.components(); }
    cdouble F(std::span<const cdouble> z) const override { return F_.eval(z); }
    void fk(std::span<const cdouble> z, std::span<cdouble> out) const override {
        for (int k = 0; k < fk_.l; ++k) out[k] = fk_.components[k].eval(z);
    }
    double F_moduli(std::span<const double> y) const override { return F_.eval_moduli(y); }
    const std::vector<double>* sigma() const override {
        return fk_.sigma ? &*fk_.sigma : nullptr;
    }
    std::string name() const override { return name_; }
    const DerivedNonlinearity* poly() const override { return &fk_; }
    const InteractionPoly& interaction() const { return F_; }

private:
    InteractionPoly F_;
    DerivedNonlinearity fk_;
    std::string name_;
};

// F(z) = |z|^3, f(z) = 3|z|z: the scalar oracle with the closed-form
// ground state (1/2) sech^2(r/2) in one dimension.
std::shared_ptr<Nonlinearity> make_scalar_cubic();

struct BuiltinSystem {
    std::string name;
    InteractionPoly F;
    SystemParams params;
};

// "kappa" (two-component kappa system), "shg3" (three-wave second
// harmonic cascade), "thg" (third harmonic cascade).
BuiltinSystem builtin(const std::string& name, double kappa = 0.5);

// Builds the runtime nonlinearity from F: derives f_k and solves sigma.
std::shared_ptr<Nonlinearity> make_poly_nonlinearity(const InteractionPoly& F,
                                                     const std::string& name = "custom");

} // namespace qnls
