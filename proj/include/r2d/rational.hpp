#pragma once

#include <Eigen/Core>
#include <gmpxx.h>

#include <string>

namespace r2d {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parse "num/den" or "num" into a canonical rational. Throws on zero
/// denominator or malformed input.
Rational parse_rational(const std::string& text);

/// Serialize as "num/den", or "num" when the denominator is 1.
std::string rational_to_string(const Rational& q);

/// Complex number with exact rational real and imaginary parts. This is the
/// scalar type of all cylinder functions and operator matrices; every checked
/// identity in the library holds with zero tolerance.
struct CRat {
    Rational re;
    Rational im;

    CRat() : re(0), im(0) {}
    CRat(int v) : re(v), im(0) {}           // NOLINT(google-explicit-constructor)
    CRat(Rational r) : re(std::move(r)), im(0) {}  // NOLINT
    CRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    friend CRat operator+(const CRat& a, const CRat& b) {
        return {Rational(a.re + b.re), Rational(a.im + b.im)};
    }
    friend CRat operator-(const CRat& a, const CRat& b) {
        return {Rational(a.re - b.re), Rational(a.im - b.im)};
    }
    friend CRat operator-(const CRat& a) { return {Rational(-a.re), Rational(-a.im)}; }
    friend CRat operator*(const CRat& a, const CRat& b) {
        return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
    }
    friend CRat operator*(const Rational& s, const CRat& a) {
        return {Rational(s * a.re), Rational(s * a.im)};
    }
    CRat& operator+=(const CRat& o) { re += o.re; im += o.im; return *this; }
    CRat& operator-=(const CRat& o) { re -= o.re; im -= o.im; return *this; }
    CRat& operator*=(const CRat& o) { *this = *this * o; return *this; }

    friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
};

inline CRat conj(const CRat& a) { return {a.re, Rational(-a.im)}; }

std::string to_string(const CRat& a);

using CMat = Eigen::Matrix<CRat, Eigen::Dynamic, Eigen::Dynamic>;
using CVec = Eigen::Matrix<CRat, Eigen::Dynamic, 1>;
using QMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using IntMat = Eigen::Matrix<Integer, Eigen::Dynamic, Eigen::Dynamic>;
using IntVec = Eigen::Matrix<Integer, Eigen::Dynamic, 1>;

bool exactly_equal(const CMat& a, const CMat& b);
bool exactly_equal(const IntMat& a, const IntMat& b);

} // namespace r2d

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
    typedef mpq_class Real;
    typedef mpq_class NonInteger;
    typedef mpq_class Nested;
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 150,
        MulCost = 100
    };
};

template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
    typedef mpz_class Real;
    typedef mpz_class NonInteger;
    typedef mpz_class Nested;
    static inline Real epsilon() { return 0; }
    static inline Real dummy_precision() { return 0; }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 1,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 100,
        MulCost = 100
    };
};

// CRat is declared non-complex on purpose: Eigen only needs ring operations
// here, and conjugation is always applied explicitly by the library.
template <>
struct NumTraits<r2d::CRat> : GenericNumTraits<r2d::CRat> {
    typedef r2d::CRat Real;
    typedef r2d::CRat NonInteger;
    typedef r2d::CRat Nested;
    static inline Real epsilon() { return r2d::CRat(0); }
    static inline Real dummy_precision() { return r2d::CRat(0); }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 12,
        AddCost = 300,
        MulCost = 400
    };
};

} // namespace Eigen
