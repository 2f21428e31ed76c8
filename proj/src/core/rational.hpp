#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "error.hpp"

namespace equiorbit {

// Element of Q/Z stored as num/den with 0 <= num < den and gcd(num, den) == 1.
class Fraction {
public:
  constexpr Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) fail(ErrorCode::kInvalidParameter, "fraction with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    num %= den;
    if (num < 0) num += den;
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Order of this element in Q/Z.
  std::int64_t order() const { return den_; }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    const std::int64_t l = std::lcm(a.den_, b.den_);
    return Fraction(a.num_ * (l / a.den_) + b.num_ * (l / b.den_), l);
  }
  friend Fraction operator-(const Fraction& a) { return Fraction(-a.num_, a.den_); }
  friend Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }
  friend Fraction operator*(std::int64_t k, const Fraction& a) {
    return Fraction((k % a.den_) * a.num_, a.den_);
  }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }
  static Fraction parse(const std::string& s);

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Fraction Fraction::parse(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Fraction(std::stoll(s), 1);
    return Fraction(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    fail(ErrorCode::kParse, "malformed fraction '" + s + "'");
  }
}

}  // namespace equiorbit
