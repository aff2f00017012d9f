#pragma once

#include <array>
#include <ostream>
#include <vector>

#include "fibweave/complex.hpp"

namespace fibweave {

/// 2x2 complex matrix, row major: a00 a01 / a10 a11.
template <class Real>
class Mat2 {
public:
    using Scalar = Complex<Real>;

    Mat2() = default;
    Mat2(Scalar a00, Scalar a01, Scalar a10, Scalar a11)
        : e_{std::move(a00), std::move(a01), std::move(a10), std::move(a11)} {}

    static Mat2 identity(long bits) {
        return {Scalar::one(bits), Scalar::zero(bits), Scalar::zero(bits), Scalar::one(bits)};
    }
    static Mat2 diag(Scalar d0, Scalar d1) {
        long bits = d0.precision();
        return {std::move(d0), Scalar::zero(bits), Scalar::zero(bits), std::move(d1)};
    }
    /// Pauli X.
    static Mat2 pauli_x(long bits) {
        return {Scalar::zero(bits), Scalar::one(bits), Scalar::one(bits), Scalar::zero(bits)};
    }
    /// Real matrix [[c, s], [s, -c]].
    static Mat2 reflection(const Real& c, const Real& s) {
        return {Scalar::real(c), Scalar::real(s), Scalar::real(s), Scalar::real(-c)};
    }

    const Scalar& operator()(int r, int c) const { return e_[2 * r + c]; }
    Scalar& operator()(int r, int c) { return e_[2 * r + c]; }

    long precision() const { return e_[0].precision(); }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
    }
    friend Mat2 operator*(const Scalar& s, const Mat2& a) {
        return {s * a(0, 0), s * a(0, 1), s * a(1, 0), s * a(1, 1)};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a(0, 0) - b(0, 0), a(0, 1) - b(0, 1), a(1, 0) - b(1, 0), a(1, 1) - b(1, 1)};
    }

    Mat2 adjoint() const { return {e_[0].conj(), e_[2].conj(), e_[1].conj(), e_[3].conj()}; }
    Scalar det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }

    /// Entrywise max |a_ij|.
    Real max_abs() const {
        Real m = e_[0].abs();
        for (int i = 1; i < 4; ++i) {
            Real v = e_[i].abs();
            if (v > m) m = v;
        }
        return m;
    }

    friend std::ostream& operator<<(std::ostream& os, const Mat2& m) {
        return os << "[[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", " << m(1, 1) << "]]";
    }

private:
    std::array<Scalar, 4> e_;
};

template <class Real>
Mat2<Real> mul(const Mat2<Real>& a, const Mat2<Real>& b) {
    return a * b;
}

template <class Real>
Mat2<Real> adjoint(const Mat2<Real>& a) {
    return a.adjoint();
}

/// max |(M^dagger M - I)_ij|.
template <class Real>
Real unitarity_defect(const Mat2<Real>& m) {
    return (m.adjoint() * m - Mat2<Real>::identity(m.precision())).max_abs();
}

/// Tolerance for the unitarity invariant at a given working precision.
inline double unitarity_tolerance(long precision_bits) {
    return std::ldexp(1.0, -static_cast<int>(precision_bits - 20));
}

/// Integer power of a unitary matrix; negative exponents use the adjoint.
template <class Real>
Mat2<Real> unitary_power(const Mat2<Real>& m, long exponent) {
    Mat2<Real> base = exponent < 0 ? m.adjoint() : m;
    long e = exponent < 0 ? -exponent : exponent;
    Mat2<Real> out = Mat2<Real>::identity(m.precision());
    while (e > 0) {
        if (e & 1) out = out * base;
        base = base * base;
        e >>= 1;
    }
    return out;
}

/// min over unit phases u of max_ij |a_ij - u b_ij|.
///
/// Each entry contributes g(phi) = |a|^2 + |b|^2 - 2|a||b|cos(phi - theta).
/// The minimum of the pointwise max sits either at the minimum of a single
/// g or where two of them cross, so only those candidates are evaluated.
template <class Real>
Real proj_distance(const Mat2<Real>& a, const Mat2<Real>& b) {
    using std::acos;
    using std::atan2;
    using std::sqrt;
    using C = Complex<Real>;
    const long bits = std::max(a.precision(), b.precision());

    std::array<C, 4> cross;   // a_i conj(b_i)
    std::array<Real, 4> base; // |a_i|^2 + |b_i|^2
    for (int i = 0; i < 4; ++i) {
        const C& x = a(i / 2, i % 2);
        const C& y = b(i / 2, i % 2);
        cross[i] = x * y.conj();
        base[i] = x.norm() + y.norm();
    }
    auto worst = [&](const Real& phi) {
        using std::cos;
        using std::sin;
        Real best = RealTraits<Real>::make(0.0, bits);
        for (int i = 0; i < 4; ++i) {
            // Re(cross * e^{-i phi}) = |cross| cos(phi - theta)
            Real v = base[i] - 2.0 * (cross[i].re * cos(phi) + cross[i].im * sin(phi));
            if (v > best) best = v;
        }
        return best;
    };

    std::vector<Real> candidates;
    candidates.push_back(RealTraits<Real>::make(0.0, bits));
    for (int i = 0; i < 4; ++i)
        if (!(cross[i].norm() <= 0.0)) candidates.push_back(cross[i].arg());
    for (int i = 0; i < 4; ++i) {
        for (int k = i + 1; k < 4; ++k) {
            C d = cross[i] - cross[k];
            Real rho = 2.0 * d.abs();
            if (rho <= 0.0) continue;
            Real ratio = (base[i] - base[k]) / rho;
            if (ratio > 1.0 || ratio < -1.0) continue;
            Real psi = d.arg();
            Real delta = acos(ratio);
            candidates.push_back(psi + delta);
            candidates.push_back(psi - delta);
        }
    }
    Real best = worst(candidates.front());
    for (const Real& phi : candidates) {
        Real v = worst(phi);
        if (v < best) best = v;
    }
    if (best < 0.0) best = RealTraits<Real>::make(0.0, bits);
    return sqrt(best);
}

}  // namespace fibweave
