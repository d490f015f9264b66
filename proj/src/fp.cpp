#include "tal/fp.hpp"

#include "tal/error.hpp"

namespace tal {

FpFormat::FpFormat(int exponent_bits, int mantissa_bits)
    : exponent_bits_(exponent_bits), mantissa_bits_(mantissa_bits) {
    if (exponent_bits < 2 || exponent_bits > 11)
        throw ContractError("exponent_bits must be in [2, 11], got " + std::to_string(exponent_bits));
    if (mantissa_bits < 1 || mantissa_bits > 30)
        throw ContractError("mantissa_bits must be in [1, 30], got " + std::to_string(mantissa_bits));
    emax_ = (1 << (exponent_bits - 1)) - 1;
    emin_ = 1 - emax_;
    max_finite_ = std::ldexp(2.0 - std::ldexp(1.0, -mantissa_bits), emax_);
    native32_ = exponent_bits == 8 && mantissa_bits == 23;
}

std::string FpFormat::name() const {
    return "e" + std::to_string(exponent_bits_) + "m" + std::to_string(mantissa_bits_);
}

double FpFormat::round(long double x) const { return round_with_residual(x, 0.0L); }

double FpFormat::round_with_residual(long double hi, long double lo) const {
    if (hi == 0 || std::isnan(hi)) return static_cast<double>(hi);
    if (std::isinf(hi)) return std::copysign(max_finite_, static_cast<double>(hi));
    int e2 = 0;
    std::frexp(hi, &e2);  // |hi| in [2^(e2-1), 2^e2)
    const int e = std::max(e2 - 1, emin_);
    const long double quantum = std::ldexp(1.0L, e - mantissa_bits_);
    const long double scaled = hi / quantum;  // exact: power-of-two scaling
    long double r = std::nearbyint(scaled);   // ties to even
    const long double frac = scaled - std::trunc(scaled);
    if (lo != 0 && std::fabs(frac) == 0.5L) {
        // hi sits on a midpoint but the exact value does not: round toward lo.
        const long double down = std::trunc(scaled);
        const long double up = down + (scaled > 0 ? 1 : -1);
        r = ((lo > 0) == (scaled > 0)) ? up : down;
    }
    const long double out = r * quantum;
    if (std::fabs(out) > max_finite_) return std::copysign(max_finite_, static_cast<double>(hi));
    if (out == 0) return std::copysign(0.0, static_cast<double>(hi));
    return static_cast<double>(out);
}

double FpFormat::saturate(float r) const {
    return std::isinf(r) ? std::copysign(max_finite_, static_cast<double>(r)) : static_cast<double>(r);
}

bool FpFormat::representable(double x) const {
    if (std::isnan(x) || std::isinf(x)) return false;
    return round(x) == x;
}

double FpFormat::add(double a, double b) const {
    if (native32_) return saturate(static_cast<float>(a) + static_cast<float>(b));
    const long double x = a, y = b;
    const long double s = x + y;
    // TwoSum: s + err == x + y exactly.
    const long double bb = s - x;
    const long double err = (x - (s - bb)) + (y - bb);
    return round_with_residual(s, err);
}

double FpFormat::sub(double a, double b) const { return add(a, -b); }

double FpFormat::mul(double a, double b) const {
    if (native32_) return saturate(static_cast<float>(a) * static_cast<float>(b));
    // Operands have at most 31 significant bits, so the product is exact.
    return round(static_cast<long double>(a) * b);
}

double FpFormat::div(double a, double b) const {
    if (b == 0) throw ContractError("division by zero");
    if (native32_) return saturate(static_cast<float>(a) / static_cast<float>(b));
    const long double x = a, y = b;
    const long double q = x / y;
    const long double rem = std::fma(-q, y, x);  // x - q*y, exact
    return round_with_residual(q, (y > 0) ? rem : -rem);
}

double FpFormat::sqrt(double a) const {
    if (a < 0) throw ContractError("square root of a negative value");
    if (native32_) return static_cast<double>(std::sqrt(static_cast<float>(a)));
    const long double x = a;
    const long double r = std::sqrt(x);
    const long double rem = std::fma(-r, r, x);  // x - r*r
    return round_with_residual(r, rem);
}

double FpFormat::exp(double a) const {
    const long double e = std::exp(static_cast<long double>(a));
    if (native32_) return saturate(static_cast<float>(e));
    return round(e);
}

}  // namespace tal
