#pragma once

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "fibweave/mat2.hpp"

namespace fibweave {

/// diag(1, e^{i pi num/den}) when slot == 1, diag(e^{i pi num/den}, 1) when slot == 0.
struct PhaseDiag {
    long num = 0;
    long den = 1;
    int slot = 1;

    PhaseDiag() = default;
    PhaseDiag(long n, long d, int s = 1) : slot(s) {
        if (d <= 0) throw std::invalid_argument("phase denominator must be positive");
        // Reduce the angle mod 2 pi, then to lowest terms.
        long period = 2 * d;
        n %= period;
        if (n < 0) n += period;
        if (n > d) n -= period;
        long g = std::gcd(n, d);
        if (g == 0) g = d;
        num = n / g;
        den = d / g;
    }

    template <class Real>
    Mat2<Real> evaluate(long bits) const {
        auto phase = Complex<Real>::unit_root(num, den, bits);
        auto one = Complex<Real>::one(bits);
        return slot == 1 ? Mat2<Real>::diag(one, phase) : Mat2<Real>::diag(phase, one);
    }

    friend bool operator==(const PhaseDiag&, const PhaseDiag&) = default;
};

/// An alternating product U^{s_0} D_0 U^{s_1} D_1 ... D_{m-1} U^{s_m}, written
/// left to right as a matrix product. `adjoint[i]` selects U-dagger for slot i.
struct SequenceSpec {
    int k = 0;                   // target order 2k + 1
    std::vector<PhaseDiag> phases;
    std::vector<bool> adjoint;   // size phases.size() + 1
};

/// Fifth order product for the off-diagonal element.
inline SequenceSpec converge5_identity_spec() {
    // phases omega, -omega^-2, -omega^-2, omega with omega = e^{i pi/5}
    return {2, {PhaseDiag(1, 5), PhaseDiag(3, 5), PhaseDiag(3, 5), PhaseDiag(1, 5)},
            {false, true, false, true, false}};
}

/// Fifth order product for the diagonal element.
inline SequenceSpec converge5_not_spec() {
    // phases omega^-1, -omega^-2, -omega^2, omega
    return {2, {PhaseDiag(-1, 5), PhaseDiag(3, 5), PhaseDiag(-3, 5), PhaseDiag(1, 5)},
            {false, true, false, true, false}};
}

/// Q_k U^{(-1)^k} P_k with P_{j+1} = D_j U^{(-1)^j} P_j, Q_{j+1} = Q_j U^{(-1)^j} D_j,
/// D_j = diag(1, (-1)^j w^{(-1)^j (j+1)}), w = e^{i pi/(2k+1)}.
inline SequenceSpec general_spec(int k) {
    if (k < 1) throw std::invalid_argument("general sequence needs k >= 1");
    const long den = 2 * k + 1;
    std::vector<PhaseDiag> d;
    for (int j = 0; j < k; ++j) {
        bool odd = (j % 2) != 0;
        long exponent = (odd ? -1 : 1) * (j + 1) + (odd ? den : 0);
        d.emplace_back(exponent, den);
    }
    SequenceSpec spec;
    spec.k = k;
    // Q_k = U^{s_0} D_0 U^{s_1} D_1 ... U^{s_{k-1}} D_{k-1}
    for (int j = 0; j < k; ++j) {
        spec.adjoint.push_back(j % 2 != 0);
        spec.phases.push_back(d[j]);
    }
    spec.adjoint.push_back(k % 2 != 0);
    // P_k = D_{k-1} U^{s_{k-1}} ... D_0 U^{s_0}
    for (int j = k - 1; j >= 0; --j) {
        spec.phases.push_back(d[j]);
        spec.adjoint.push_back(j % 2 != 0);
    }
    return spec;
}

namespace detail {
template <class Real>
void require_unitary(const Mat2<Real>& u) {
    if (to_double(unitarity_defect(u)) > unitarity_tolerance(u.precision()) * 1024.0)
        throw std::invalid_argument("input matrix is not unitary");
}
}  // namespace detail

template <class Real>
Mat2<Real> apply_sequence(const Mat2<Real>& u, const SequenceSpec& spec) {
    detail::require_unitary(u);
    const long bits = u.precision();
    const Mat2<Real> ud = u.adjoint();
    Mat2<Real> out = spec.adjoint[0] ? ud : u;
    for (std::size_t i = 0; i < spec.phases.size(); ++i) {
        out = out * spec.phases[i].template evaluate<Real>(bits);
        out = out * (spec.adjoint[i + 1] ? ud : u);
    }
    return out;
}

/// Amplitude amplification step U diag(-1,1) U^dagger diag(-1,1) U.
template <class Real>
Mat2<Real> amplify(const Mat2<Real>& u) {
    return apply_sequence(u, SequenceSpec{1, {PhaseDiag(1, 1, 0), PhaseDiag(1, 1, 0)}, {false, true, false}});
}

/// pi/3 convergent search step U diag(e^{i pi/3},1) U^dagger diag(e^{i pi/3},1) U;
/// |<1|A'(U)|0>| = |<1|U|0>|^3.
template <class Real>
Mat2<Real> converge_pi3(const Mat2<Real>& u) {
    return apply_sequence(u, SequenceSpec{1, {PhaseDiag(1, 3, 0), PhaseDiag(1, 3, 0)}, {false, true, false}});
}

/// |<1|result|0>| = |<1|U|0>|^5.
template <class Real>
Mat2<Real> converge5_identity(const Mat2<Real>& u) {
    return apply_sequence(u, converge5_identity_spec());
}

/// |<0|result|0>| = |<0|U|0>|^5.
template <class Real>
Mat2<Real> converge5_not(const Mat2<Real>& u) {
    return apply_sequence(u, converge5_not_spec());
}

template <class Real>
Mat2<Real> general_sequence(const Mat2<Real>& u, int k) {
    return apply_sequence(u, general_spec(k));
}

/// Random unitary diag(1, e^{ia}) [[c, s], [s, -c]] diag(e^{ib}, e^{ic}), theta uniform in [0, pi/2].
template <class Real, class Rng>
Mat2<Real> random_unitary(Rng& rng, long bits) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> half(0.0, M_PI / 2.0);
    using C = Complex<Real>;
    using std::cos;
    using std::sin;
    Real theta = RealTraits<Real>::make(half(rng), bits);
    Real a = RealTraits<Real>::make(angle(rng), bits);
    Real b = RealTraits<Real>::make(angle(rng), bits);
    Real c = RealTraits<Real>::make(angle(rng), bits);
    auto one = C::one(bits);
    return Mat2<Real>::diag(one, C::polar(a)) * Mat2<Real>::reflection(cos(theta), sin(theta)) *
           Mat2<Real>::diag(C::polar(b), C::polar(c));
}

struct OrderFit {
    int k = 0;
    double slope = 0.0;
    double intercept = 0.0;
    bool degenerate = false;
    std::size_t samples = 0;
    double mean_abs_00 = 0.0;  // |<0|G|0>| averaged over samples
    double mean_abs_11 = 0.0;  // |<1|G|1>| averaged over samples
};

/// Least-squares slope of log|<1|G_k(U)|0>| against log|<1|U|0>| for
/// U(theta) = [[cos, sin], [sin, -cos]] with theta evenly spaced in range.
template <class Real = BigFloat>
OrderFit order_estimate(int k, std::size_t sample_count, double theta_lo, double theta_hi, long bits = 256) {
    if (!(theta_lo > 0.0) || !(theta_hi < M_PI / 2.0) || theta_hi < theta_lo)
        throw std::invalid_argument("theta range must lie strictly inside (0, pi/2)");
    if (sample_count == 0) throw std::invalid_argument("need at least one sample");
    using std::cos;
    using std::log;
    using std::sin;
    const SequenceSpec spec = general_spec(k);
    std::vector<double> xs;
    std::vector<double> ys;
    OrderFit fit;
    fit.k = k;
    fit.samples = sample_count;
    for (std::size_t i = 0; i < sample_count; ++i) {
        double t = sample_count == 1 ? theta_lo
                                     : theta_lo + (theta_hi - theta_lo) * static_cast<double>(i) /
                                                      static_cast<double>(sample_count - 1);
        Real theta = RealTraits<Real>::make(t, bits);
        Mat2<Real> u = Mat2<Real>::reflection(cos(theta), sin(theta));
        Mat2<Real> g = apply_sequence(u, spec);
        xs.push_back(to_double(log(u(1, 0).abs())));
        ys.push_back(to_double(log(g(1, 0).abs())));
        fit.mean_abs_00 += to_double(g(0, 0).abs()) / static_cast<double>(sample_count);
        fit.mean_abs_11 += to_double(g(1, 1).abs()) / static_cast<double>(sample_count);
    }
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) {
        fit.degenerate = true;
        return fit;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

}  // namespace fibweave
