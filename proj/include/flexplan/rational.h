#ifndef FLEXPLAN_RATIONAL_H_
#define FLEXPLAN_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace flexplan {

// Exact fraction over 64-bit integers, always stored in lowest terms with a
// positive denominator. Arithmetic that would leave the 64-bit range throws
// std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design of integer literals
  Rational(std::int64_t num, std::int64_t den);

  // Smallest-denominator fraction (denominator <= 1e12) whose double value is
  // exactly `value`. Decimal data such as 0.4 or 1/3 printed with 17 digits
  // come back as 2/5 and 1/3. Values with no such fraction get the closest
  // continued-fraction convergent within the denominator cap.
  static Rational FromDouble(double value);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double ToDouble() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  bool IsZero() const { return num_ == 0; }
  bool IsPositive() const { return num_ > 0; }
  bool IsNegative() const { return num_ < 0; }

  // "p/q", or "p" when the denominator is one.
  std::string ToString() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace flexplan

#endif  // FLEXPLAN_RATIONAL_H_
