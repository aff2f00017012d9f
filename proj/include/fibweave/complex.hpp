#pragma once

#include <cmath>
#include <ostream>

#include "fibweave/bigfloat.hpp"

namespace fibweave {

/// Complex number over either `double` or `BigFloat`.
///
/// `std::complex` is only specified for the builtin floating types, so the
/// multiprecision path needs its own.
template <class Real>
struct Complex {
    Real re;
    Real im;

    Complex() : re(), im() {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    /// Zero at the given precision.
    static Complex zero(long bits) { return {RealTraits<Real>::make(0.0, bits), RealTraits<Real>::make(0.0, bits)}; }
    static Complex one(long bits) { return {RealTraits<Real>::make(1.0, bits), RealTraits<Real>::make(0.0, bits)}; }
    static Complex real(Real r) {
        Real z = r * 0.0;
        return {std::move(r), std::move(z)};
    }

    /// e^{i theta}.
    static Complex polar(const Real& theta) {
        using std::cos;
        using std::sin;
        return {cos(theta), sin(theta)};
    }

    /// e^{i pi num / den}, evaluated at `bits` precision.
    static Complex unit_root(long num, long den, long bits) {
        Real theta = RealTraits<Real>::pi(bits) * RealTraits<Real>::ratio(num, den, bits);
        return polar(theta);
    }

    long precision() const { return RealTraits<Real>::precision(re); }

    Complex conj() const { return {re, -im}; }
    Real norm() const { return re * re + im * im; }
    Real abs() const {
        using std::sqrt;
        return sqrt(norm());
    }
    Real arg() const {
        using std::atan2;
        return atan2(im, re);
    }

    Complex operator-() const { return {-re, -im}; }

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
    friend Complex operator*(const Real& s, const Complex& a) { return {a.re * s, a.im * s}; }
    friend Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real d = b.norm();
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }

    Complex& operator+=(const Complex& o) { return *this = *this + o; }
    Complex& operator-=(const Complex& o) { return *this = *this - o; }
    Complex& operator*=(const Complex& o) { return *this = *this * o; }

    friend std::ostream& operator<<(std::ostream& os, const Complex& z) {
        return os << "(" << z.re << (z.im < 0.0 ? " - " : " + ") << (z.im < 0.0 ? -z.im : z.im) << "i)";
    }
};

using BigComplex = Complex<BigFloat>;

}  // namespace fibweave
