// Exact rational scalar that degrades to double on overflow or
// non-rational input. The symbolic checks (mass-resonance, sigma
// cancellation) are polynomial identities; keeping coefficients exact
// while they stay exact lets "residual is zero" mean zero.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>

namespace qnls {

class Ratio {
public:
    Ratio() : exact_(true), num_(0), den_(1), val_(0.0) {}
    Ratio(std::int64_t n) : exact_(true), num_(n), den_(1), val_(double(n)) {}
    Ratio(std::int64_t n, std::int64_t d) { assign(n, d); }

    static Ratio inexact(double v) {
        Ratio r;
        r.exact_ = false;
        r.val_ = v;
        return r;
    }

    // Exact if v is a dyadic rational with small enough numerator/exponent,
    // which covers every literal the parser produces from decimal strings.
    static Ratio from_double(double v) {
        if (!std::isfinite(v)) return inexact(v);
        if (v == 0.0) return Ratio(0);
        int e = 0;
        double m = std::frexp(v, &e); // v = m * 2^e, |m| in [0.5, 1)
        std::int64_t num = 0;
        int shift = 0;
        while (shift < 62 && m != std::floor(m)) {
            m *= 2.0;
            ++shift;
        }
        if (m != std::floor(m) || std::abs(m) > 9.0e18) return inexact(v);
        num = (std::int64_t)m;
        e -= shift;
        if (e >= 0) {
            if (e > 62) return inexact(v);
            Ratio r;
            if (__builtin_mul_overflow(num, (std::int64_t(1) << e), &r.num_)) return inexact(v);
            r.den_ = 1;
            r.exact_ = true;
            r.val_ = v;
            return r;
        }
        if (-e > 62) return inexact(v);
        return Ratio(num, std::int64_t(1) << (-e));
    }

    bool exact() const { return exact_; }
    double value() const { return val_; }
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return exact_ ? num_ == 0 : val_ == 0.0; }

    Ratio operator-() const {
        if (!exact_) return inexact(-val_);
        Ratio r(*this);
        r.num_ = -num_;
        r.val_ = -val_;
        return r;
    }

    friend Ratio operator+(const Ratio& a, const Ratio& b) {
        if (a.exact_ && b.exact_) {
            __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
            __int128 d = (__int128)a.den_ * b.den_;
            return make128(n, d, a.val_ + b.val_);
        }
        return inexact(a.val_ + b.val_);
    }
    friend Ratio operator-(const Ratio& a, const Ratio& b) { return a + (-b); }
    friend Ratio operator*(const Ratio& a, const Ratio& b) {
        if (a.exact_ && b.exact_) {
            __int128 n = (__int128)a.num_ * b.num_;
            __int128 d = (__int128)a.den_ * b.den_;
            return make128(n, d, a.val_ * b.val_);
        }
        return inexact(a.val_ * b.val_);
    }
    friend Ratio operator/(const Ratio& a, const Ratio& b) {
        if (a.exact_ && b.exact_ && b.num_ != 0) {
            __int128 n = (__int128)a.num_ * b.den_;
            __int128 d = (__int128)a.den_ * b.num_;
            return make128(n, d, a.val_ / b.val_);
        }
        return inexact(a.val_ / b.val_);
    }
    friend bool operator==(const Ratio& a, const Ratio& b) {
        if (a.exact_ && b.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
        return a.val_ == b.val_;
    }

    std::string str() const {
        if (!exact_) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", val_);
            return buf;
        }
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    void assign(std::int64_t n, std::int64_t d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        exact_ = true;
        num_ = n;
        den_ = d;
        val_ = double(n) / double(d);
    }

    static Ratio make128(__int128 n, __int128 d, double approx) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 an = n < 0 ? -n : n;
        __int128 g = gcd128(an, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        const __int128 lim = (__int128)INT64_MAX;
        if (n > lim || n < -lim || d > lim) return inexact(approx);
        Ratio r;
        r.exact_ = true;
        r.num_ = (std::int64_t)n;
        r.den_ = (std::int64_t)d;
        r.val_ = double(r.num_) / double(r.den_);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    bool exact_;
    std::int64_t num_ = 0, den_ = 1;
    double val_ = 0.0;
};

// Complex coefficient with exact rational real/imaginary parts.
struct Coeff {
    Ratio re, im;

    Coeff() = default;
    Coeff(Ratio r) : re(r) {}
    Coeff(Ratio r, Ratio i) : re(r), im(i) {}
    static Coeff one() { return Coeff(Ratio(1)); }
    static Coeff imag_unit() { return Coeff(Ratio(0), Ratio(1)); }

    bool exact() const { return re.exact() && im.exact(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    std::complex<double> value() const { return {re.value(), im.value()}; }
    Coeff conj() const { return Coeff(re, -im); }

    friend Coeff operator+(const Coeff& a, const Coeff& b) { return {a.re + b.re, a.im + b.im}; }
    friend Coeff operator-(const Coeff& a, const Coeff& b) { return {a.re - b.re, a.im - b.im}; }
    friend Coeff operator*(const Coeff& a, const Coeff& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Coeff operator/(const Coeff& a, const Coeff& b) {
        Ratio d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Coeff operator-() const { return {-re, -im}; }

    std::string str() const {
        if (im.is_zero()) return re.str();
        if (re.is_zero()) return im.str() + "*i";
        return "(" + re.str() + (im.value() < 0 ? "" : "+") + im.str() + "*i)";
    }
};

} // namespace qnls
