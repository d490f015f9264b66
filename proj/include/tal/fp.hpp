#pragma once

// Parameterized binary floating-point formats with round-to-nearest-even.
// Every primitive operation returns the correctly rounded result of the
// exact operation; overflow saturates to the largest finite magnitude.
// Values are carried in doubles, which hold every value of a supported
// format exactly.

#include <cmath>
#include <limits>
#include <string>

namespace tal {

class FpFormat {
  public:
    /// exponent_bits in [2, 11], mantissa_bits (stored fraction bits) in
    /// [1, 30]. ContractError otherwise.
    FpFormat(int exponent_bits = 8, int mantissa_bits = 23);
    static FpFormat binary32() { return FpFormat(8, 23); }

    int exponent_bits() const noexcept { return exponent_bits_; }
    int mantissa_bits() const noexcept { return mantissa_bits_; }
    int emax() const noexcept { return emax_; }
    int emin() const noexcept { return emin_; }
    double max_finite() const noexcept { return max_finite_; }
    double min_subnormal() const noexcept { return std::ldexp(1.0, emin_ - mantissa_bits_); }
    /// "e8m23" style name.
    std::string name() const;

    /// Nearest format value to x, ties to even.
    double round(long double x) const;
    bool representable(double x) const;

    double add(double a, double b) const;
    double sub(double a, double b) const;
    double mul(double a, double b) const;
    double div(double a, double b) const;
    double sqrt(double a) const;
    /// exp computed in extended precision, rounded once.
    double exp(double a) const;

    friend bool operator==(const FpFormat& a, const FpFormat& b) {
        return a.exponent_bits_ == b.exponent_bits_ && a.mantissa_bits_ == b.mantissa_bits_;
    }

  private:
    /// Rounds hi + lo, where lo is the exact error of an extended-precision
    /// result hi; lo only breaks ties that hi lands on.
    double round_with_residual(long double hi, long double lo) const;
    double saturate(float r) const;

    int exponent_bits_;
    int mantissa_bits_;
    int emax_;
    int emin_;
    double max_finite_;
    bool native32_;
};

}  // namespace tal
