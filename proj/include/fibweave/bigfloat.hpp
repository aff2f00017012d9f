#pragma once

#include <mpfr.h>

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace fibweave {

/// Binary floating point value with its own MPFR precision.
///
/// Every value owns its precision; binary operations produce a result at the
/// larger of the two operand precisions. There is no process-wide default.
class BigFloat {
public:
    static constexpr long kMinPrecision = 53;

    explicit BigFloat(long precision_bits = kMinPrecision) {
        mpfr_init2(v_, checked(precision_bits));
        mpfr_set_zero(v_, 1);
    }

    BigFloat(double x, long precision_bits) {
        mpfr_init2(v_, checked(precision_bits));
        mpfr_set_d(v_, x, MPFR_RNDN);
    }

    BigFloat(long numerator, long precision_bits, long denominator) {
        mpfr_init2(v_, checked(precision_bits));
        mpfr_set_si(v_, numerator, MPFR_RNDN);
        if (denominator != 1) mpfr_div_si(v_, v_, denominator, MPFR_RNDN);
    }

    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    BigFloat(BigFloat&& o) noexcept {
        // Steal the limbs; leave `o` as a valid minimal-precision zero.
        v_[0] = o.v_[0];
        mpfr_init2(o.v_, kMinPrecision);
        mpfr_set_zero(o.v_, 1);
    }

    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) std::swap(v_[0], o.v_[0]);
        return *this;
    }

    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat pi(long precision_bits) {
        BigFloat r(precision_bits);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    std::string to_string(int digits = 20) const {
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%.*Rg", digits, v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

    BigFloat operator-() const {
        BigFloat r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigFloat& operator+=(const BigFloat& o) { return *this = *this + o; }
    BigFloat& operator-=(const BigFloat& o) { return *this = *this - o; }
    BigFloat& operator*=(const BigFloat& o) { return *this = *this * o; }
    BigFloat& operator/=(const BigFloat& o) { return *this = *this / o; }

#define FIBWEAVE_BIGFLOAT_BINOP(op, fn, fn_d)                                      \
    friend BigFloat operator op(const BigFloat& a, const BigFloat& b) {           \
        BigFloat r(std::max(a.precision(), b.precision()));                        \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                           \
        return r;                                                                  \
    }                                                                              \
    friend BigFloat operator op(const BigFloat& a, double b) {                     \
        BigFloat r(a.precision());                                                 \
        fn_d(r.v_, a.v_, b, MPFR_RNDN);                                            \
        return r;                                                                  \
    }
    FIBWEAVE_BIGFLOAT_BINOP(+, mpfr_add, mpfr_add_d)
    FIBWEAVE_BIGFLOAT_BINOP(-, mpfr_sub, mpfr_sub_d)
    FIBWEAVE_BIGFLOAT_BINOP(*, mpfr_mul, mpfr_mul_d)
    FIBWEAVE_BIGFLOAT_BINOP(/, mpfr_div, mpfr_div_d)
#undef FIBWEAVE_BIGFLOAT_BINOP

    friend BigFloat operator+(double a, const BigFloat& b) { return b + a; }
    friend BigFloat operator*(double a, const BigFloat& b) { return b * a; }
    friend BigFloat operator-(double a, const BigFloat& b) {
        BigFloat r(b.precision());
        mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(double a, const BigFloat& b) {
        BigFloat r(b.precision());
        mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.v_, b.v_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator<(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
    friend bool operator>(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
    friend bool operator<=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
    friend bool operator>=(const BigFloat& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

#define FIBWEAVE_BIGFLOAT_UNARY(name, fn)        \
    friend BigFloat name(const BigFloat& a) {    \
        BigFloat r(a.precision());               \
        fn(r.v_, a.v_, MPFR_RNDN);               \
        return r;                                \
    }
    FIBWEAVE_BIGFLOAT_UNARY(sqrt, mpfr_sqrt)
    FIBWEAVE_BIGFLOAT_UNARY(abs, mpfr_abs)
    FIBWEAVE_BIGFLOAT_UNARY(sin, mpfr_sin)
    FIBWEAVE_BIGFLOAT_UNARY(cos, mpfr_cos)
    FIBWEAVE_BIGFLOAT_UNARY(exp, mpfr_exp)
    FIBWEAVE_BIGFLOAT_UNARY(log, mpfr_log)
    FIBWEAVE_BIGFLOAT_UNARY(acos, mpfr_acos)
#undef FIBWEAVE_BIGFLOAT_UNARY

    friend BigFloat atan2(const BigFloat& y, const BigFloat& x) {
        BigFloat r(std::max(y.precision(), x.precision()));
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat pow(const BigFloat& a, long e) {
        BigFloat r(a.precision());
        mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }

    friend BigFloat pow(const BigFloat& a, const BigFloat& e) {
        BigFloat r(std::max(a.precision(), e.precision()));
        mpfr_pow(r.v_, a.v_, e.v_, MPFR_RNDN);
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const BigFloat& x) {
        return os << x.to_string(static_cast<int>(os.precision()));
    }

private:
    static mpfr_prec_t checked(long bits) {
        if (bits < kMinPrecision)
            throw std::invalid_argument("precision below 53 bits: " + std::to_string(bits));
        return static_cast<mpfr_prec_t>(bits);
    }

    mpfr_t v_;
};

/// Uniform construction of scalars for the two supported real types.
template <class Real>
struct RealTraits;

template <>
struct RealTraits<double> {
    static double make(double x, long /*bits*/) { return x; }
    static double ratio(long num, long den, long /*bits*/) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double pi(long /*bits*/) { return 3.14159265358979323846; }
    static long precision(double /*x*/) { return 53; }
    static double to_double(double x) { return x; }
};

template <>
struct RealTraits<BigFloat> {
    static BigFloat make(double x, long bits) { return BigFloat(x, bits); }
    static BigFloat ratio(long num, long den, long bits) { return BigFloat(num, bits, den); }
    static BigFloat pi(long bits) { return BigFloat::pi(bits); }
    static long precision(const BigFloat& x) { return x.precision(); }
    static double to_double(const BigFloat& x) { return x.to_double(); }
};

template <class Real>
double to_double(const Real& x) {
    return RealTraits<Real>::to_double(x);
}

}  // namespace fibweave
