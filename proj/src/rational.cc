#include "flexplan/rational.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace flexplan {
namespace {

using Wide = __int128;

constexpr std::int64_t kMaxDenominator = 1'000'000'000'000;

Wide Gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t Narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational arithmetic exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Wide n = num;
  Wide d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Wide g = Gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = Narrow(n);
  den_ = Narrow(d);
}

Rational Rational::FromDouble(double value) {
  if (!std::isfinite(value)) {
    throw std::domain_error("cannot represent non-finite value as rational");
  }
  if (value == std::floor(value) &&
      std::fabs(value) < 9.0e18) {
    return Rational(static_cast<std::int64_t>(value));
  }
  // Continued-fraction convergents h/k of |value|, expanded exactly from its
  // binary representation n / 2^shift.
  const bool negative = value < 0;
  const double target = std::fabs(value);
  int exponent = 0;
  const double mantissa = std::frexp(target, &exponent);
  const int shift = 53 - exponent;
  if (shift > 120) return Rational(0);
  Wide n = static_cast<Wide>(std::ldexp(mantissa, 53));
  Wide d = static_cast<Wide>(1) << shift;
  Wide h_prev = 1, h = n / d;
  Wide k_prev = 0, k = 1;
  Wide rem = n % d;
  n = d;
  d = rem;
  Rational best(Narrow(h), 1);
  auto matches = [target](Wide num, Wide den) {
    return static_cast<double>(num) / static_cast<double>(den) == target;
  };
  while (d != 0 && best.ToDouble() != target) {
    const Wide a = n / d;
    rem = n % d;
    n = d;
    d = rem;
    // Semiconvergents (h_prev + j h) / (k_prev + j k) approach the value
    // monotonically, so the first one that rounds to it has the smallest
    // denominator.
    Wide j_max = a;
    if (k_prev + j_max * k > kMaxDenominator) j_max = (kMaxDenominator - k_prev) / k;
    if (j_max < 1) break;
    if (matches(h_prev + j_max * h, k_prev + j_max * k)) {
      Wide lo = 1;
      Wide hi = j_max;
      while (lo < hi) {
        const Wide mid = lo + (hi - lo) / 2;
        if (matches(h_prev + mid * h, k_prev + mid * k)) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      best = Rational(Narrow(h_prev + lo * h), Narrow(k_prev + lo * k));
      break;
    }
    if (j_max < a) {
      const Rational semi(Narrow(h_prev + j_max * h), Narrow(k_prev + j_max * k));
      if (std::fabs(semi.ToDouble() - target) < std::fabs(best.ToDouble() - target)) {
        best = semi;
      }
      break;
    }
    const Wide h_next = a * h + h_prev;
    const Wide k_next = a * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    best = Rational(Narrow(h), Narrow(k));
  }
  return negative ? -best : best;
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  if (num_ == std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational negation overflows");
  }
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& other) {
  const Wide g = Gcd(den_, other.den_);
  const Wide d = static_cast<Wide>(den_) / g * other.den_;
  const Wide n = static_cast<Wide>(num_) * (other.den_ / g) +
                 static_cast<Wide>(other.num_) * (den_ / g);
  const Wide r = Gcd(n, d);
  num_ = Narrow(r > 1 ? n / r : n);
  den_ = Narrow(r > 1 ? d / r : d);
  return *this;
}

Rational& Rational::operator-=(const Rational& other) {
  return *this += -other;
}

Rational& Rational::operator*=(const Rational& other) {
  const Wide g1 = Gcd(num_, other.den_);
  const Wide g2 = Gcd(other.num_, den_);
  const Wide n = (static_cast<Wide>(num_) / (g1 ? g1 : 1)) *
                 (static_cast<Wide>(other.num_) / (g2 ? g2 : 1));
  const Wide d = (static_cast<Wide>(den_) / (g2 ? g2 : 1)) *
                 (static_cast<Wide>(other.den_) / (g1 ? g1 : 1));
  num_ = Narrow(n);
  den_ = Narrow(d);
  if (num_ == 0) den_ = 1;
  return *this;
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.num_ == 0) throw std::domain_error("rational division by zero");
  Rational inv;
  inv.num_ = other.num_ < 0 ? -other.den_ : other.den_;
  inv.den_ = other.num_ < 0 ? -other.num_ : other.num_;
  return *this *= inv;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const Wide lhs = static_cast<Wide>(a.num_) * b.den_;
  const Wide rhs = static_cast<Wide>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.ToString();
}

}  // namespace flexplan
