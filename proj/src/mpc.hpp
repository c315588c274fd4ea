#pragma once

// Minimal complex arithmetic over MPFR with caller-owned scratch, so that
// the Aberth inner loop does not allocate.

#include <mpfr.h>

#include <complex>
#include <string>
#include <utility>

namespace izeros::mp {

struct Real {
    mpfr_t v;
    explicit Real(mpfr_prec_t prec = 64) {
        mpfr_init2(v, prec);
        mpfr_set_zero(v, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v, mpfr_get_prec(o.v));
        mpfr_set(v, o.v, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v, mpfr_get_prec(o.v));
        mpfr_swap(v, o.v);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v, mpfr_get_prec(o.v));
            mpfr_set(v, o.v, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v, o.v);
        return *this;
    }
    ~Real() { mpfr_clear(v); }
    void round_to(mpfr_prec_t prec) { mpfr_prec_round(v, prec, MPFR_RNDN); }
    double d() const { return mpfr_get_d(v, MPFR_RNDN); }
};

struct Complex {
    Real re, im;
    explicit Complex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
    void round_to(mpfr_prec_t prec) {
        re.round_to(prec);
        im.round_to(prec);
    }
    std::complex<double> d() const { return {re.d(), im.d()}; }
    void set(std::complex<double> z) {
        mpfr_set_d(re.v, z.real(), MPFR_RNDN);
        mpfr_set_d(im.v, z.imag(), MPFR_RNDN);
    }
};

struct Scratch {
    Real a, b, c, d, e, f;
    explicit Scratch(mpfr_prec_t prec) : a(prec), b(prec), c(prec), d(prec), e(prec), f(prec) {}
};

// r = x * y; r may alias x or y.
inline void mul(Complex& r, const Complex& x, const Complex& y, Scratch& s) {
    mpfr_mul(s.a.v, x.re.v, y.re.v, MPFR_RNDN);
    mpfr_mul(s.b.v, x.im.v, y.im.v, MPFR_RNDN);
    mpfr_mul(s.c.v, x.re.v, y.im.v, MPFR_RNDN);
    mpfr_mul(s.d.v, x.im.v, y.re.v, MPFR_RNDN);
    mpfr_sub(r.re.v, s.a.v, s.b.v, MPFR_RNDN);
    mpfr_add(r.im.v, s.c.v, s.d.v, MPFR_RNDN);
}

inline void add(Complex& r, const Complex& x, const Complex& y) {
    mpfr_add(r.re.v, x.re.v, y.re.v, MPFR_RNDN);
    mpfr_add(r.im.v, x.im.v, y.im.v, MPFR_RNDN);
}

inline void sub(Complex& r, const Complex& x, const Complex& y) {
    mpfr_sub(r.re.v, x.re.v, y.re.v, MPFR_RNDN);
    mpfr_sub(r.im.v, x.im.v, y.im.v, MPFR_RNDN);
}

// |x|^2 into out
inline void norm(mpfr_t out, const Complex& x, Scratch& s) {
    mpfr_sqr(s.e.v, x.re.v, MPFR_RNDN);
    mpfr_sqr(s.f.v, x.im.v, MPFR_RNDN);
    mpfr_add(out, s.e.v, s.f.v, MPFR_RNDN);
}

inline void abs(mpfr_t out, const Complex& x, Scratch& s) { mpfr_hypot(out, x.re.v, x.im.v, MPFR_RNDU); (void)s; }

// r = x / y; r may alias x or y.
inline void div(Complex& r, const Complex& x, const Complex& y, Scratch& s) {
    mpfr_sqr(s.e.v, y.re.v, MPFR_RNDN);
    mpfr_sqr(s.f.v, y.im.v, MPFR_RNDN);
    mpfr_add(s.e.v, s.e.v, s.f.v, MPFR_RNDN);  // |y|^2
    mpfr_mul(s.a.v, x.re.v, y.re.v, MPFR_RNDN);
    mpfr_mul(s.b.v, x.im.v, y.im.v, MPFR_RNDN);
    mpfr_mul(s.c.v, x.im.v, y.re.v, MPFR_RNDN);
    mpfr_mul(s.d.v, x.re.v, y.im.v, MPFR_RNDN);
    mpfr_add(s.a.v, s.a.v, s.b.v, MPFR_RNDN);
    mpfr_sub(s.c.v, s.c.v, s.d.v, MPFR_RNDN);
    mpfr_div(r.re.v, s.a.v, s.e.v, MPFR_RNDN);
    mpfr_div(r.im.v, s.c.v, s.e.v, MPFR_RNDN);
}

// r += 1 / y
inline void add_inverse(Complex& r, const Complex& y, Scratch& s) {
    mpfr_sqr(s.e.v, y.re.v, MPFR_RNDN);
    mpfr_sqr(s.f.v, y.im.v, MPFR_RNDN);
    mpfr_add(s.e.v, s.e.v, s.f.v, MPFR_RNDN);
    mpfr_div(s.a.v, y.re.v, s.e.v, MPFR_RNDN);
    mpfr_div(s.b.v, y.im.v, s.e.v, MPFR_RNDN);
    mpfr_add(r.re.v, r.re.v, s.a.v, MPFR_RNDN);
    mpfr_sub(r.im.v, r.im.v, s.b.v, MPFR_RNDN);
}

inline std::string to_decimal(const mpfr_t v, int digits) {
    if (mpfr_zero_p(v)) return "0";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

}  // namespace izeros::mp
