#pragma once

#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "fibweave/mat2.hpp"

namespace fibweave {

/// Fibonacci anyon charge: trivial (0) or the nontrivial particle (1).
enum class Charge : int { Trivial = 0, Tau = 1 };

inline int value(Charge c) { return static_cast<int>(c); }
inline Charge charge_of(int v) { return v ? Charge::Tau : Charge::Trivial; }

/// Allowed outcomes of fusing a and b. Only 1 x 1 = 0 + 1 is nontrivial.
inline std::vector<Charge> fuse(Charge a, Charge b) {
    if (a == Charge::Trivial) return {b};
    if (b == Charge::Trivial) return {a};
    return {Charge::Trivial, Charge::Tau};
}

inline bool fusion_allowed(Charge a, Charge b, Charge c) {
    for (Charge x : fuse(a, b))
        if (x == c) return true;
    return false;
}

/// Model data of the Fibonacci theory at a fixed working precision.
template <class Real>
struct FibConstants {
    long precision_bits;
    Real tau;              // golden ratio
    Complex<Real> omega;   // e^{i pi/5}
    Mat2<Real> R;          // counterclockwise exchange, diag(e^{-4 pi i/5}, e^{3 pi i/5})
    Mat2<Real> F;          // [[1/tau, 1/sqrt(tau)], [1/sqrt(tau), -1/tau]]
    Mat2<Real> S;          // F R F: exchange of the middle two of four anyons
    std::pair<int, int> frobenius_schur{1, 1};

    /// e^{i pi k/5} at working precision.
    Complex<Real> omega_power(long k) const { return Complex<Real>::unit_root(k, 5, precision_bits); }
    Mat2<Real> R_power(long alpha) const { return unitary_power(R, alpha); }
};

/// Builds every constant from scratch at `precision_bits`.
template <class Real>
FibConstants<Real> make_constants(long precision_bits) {
    using std::sqrt;
    if (precision_bits < 53) throw std::invalid_argument("precision must be at least 53 bits");
    const long bits = std::is_same_v<Real, double> ? 53 : precision_bits;
    using C = Complex<Real>;

    Real five = RealTraits<Real>::make(5.0, bits);
    Real tau = (1.0 + sqrt(five)) / 2.0;
    Real inv_tau = 1.0 / tau;
    Real inv_sqrt_tau = 1.0 / sqrt(tau);

    FibConstants<Real> k{
        bits,
        tau,
        C::unit_root(1, 5, bits),
        Mat2<Real>::diag(C::unit_root(-4, 5, bits), C::unit_root(3, 5, bits)),
        Mat2<Real>{C::real(inv_tau), C::real(inv_sqrt_tau), C::real(inv_sqrt_tau), C::real(-inv_tau)},
        Mat2<Real>{},
    };
    k.S = k.F * k.R * k.F;
    return k;
}

struct IdentityResidual {
    std::string name;
    double residual;
    bool passed;
};

struct SelfCheckReport {
    std::vector<IdentityResidual> identities;
    bool all_passed() const {
        for (const auto& r : identities)
            if (!r.passed) return false;
        return true;
    }
    const IdentityResidual* find(const std::string& name) const {
        for (const auto& r : identities)
            if (r.name == name) return &r;
        return nullptr;
    }
};

/// Residuals of the defining identities. Failures are reported, not thrown.
template <class Real>
SelfCheckReport self_check(const FibConstants<Real>& c, double tol) {
    using std::abs;
    const long bits = c.precision_bits;
    const auto I = Mat2<Real>::identity(bits);
    SelfCheckReport report;
    auto add = [&](std::string name, const Real& r) {
        double v = to_double(r);
        report.identities.push_back({std::move(name), v, v <= tol});
    };
    add("tau^2 = tau + 1", abs(c.tau * c.tau - c.tau - 1.0));
    add("F^2 = I", (c.F * c.F - I).max_abs());
    add("R^10 = I", (unitary_power(c.R, 10) - I).max_abs());
    add("S unitary", unitarity_defect(c.S));
    Complex<Real> expected = c.omega_power(4) / c.tau;
    add("<0|S|0> = e^{4 pi i/5}/tau", (c.S(0, 0) - expected).abs());
    return report;
}

}  // namespace fibweave
