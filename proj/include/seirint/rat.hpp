#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace seirint {

/// Exact rational number. Always stored in lowest terms with a positive
/// denominator; zero is 0/1.
class Rat {
 public:
  Rat() = default;
  Rat(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(long n, long d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  explicit Rat(const mpz_class& z) : v_(z) {}

  /// Parses "p" or "p/q" with optional leading sign.
  static Rat parse(std::string_view s) {
    mpq_class q;
    if (q.set_str(std::string(s), 10) != 0)
      throw std::invalid_argument("Rat: malformed rational '" + std::string(s) + "'");
    if (q.get_den() == 0) throw std::domain_error("Rat: zero denominator");
    q.canonicalize();
    return Rat(std::move(q));
  }

  const mpq_class& value() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  /// Correctly rounded when numerator and denominator fit in 53 bits
  /// (a single IEEE division); get_d truncates otherwise.
  double to_double() const {
    if (mpz_sizeinbase(v_.get_num_mpz_t(), 2) <= 53 && mpz_sizeinbase(v_.get_den_mpz_t(), 2) <= 53)
      return v_.get_num().get_d() / v_.get_den().get_d();
    return v_.get_d();
  }

  /// Value as a machine integer; throws if not an integer or out of range.
  long to_long() const {
    if (!is_integer() || !v_.get_num().fits_slong_p())
      throw std::range_error("Rat: not a machine integer: " + str());
    return v_.get_num().get_si();
  }

  Rat abs() const { return Rat(mpq_class(::abs(v_))); }
  Rat inverse() const {
    if (is_zero()) throw std::domain_error("Rat: inverse of zero");
    return Rat(mpq_class(1 / v_));
  }
  Rat pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
    mpq_class q(n, d);
    q.canonicalize();
    return Rat(std::move(q));
  }

  std::string str() const { return v_.get_str(); }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_{0};
};

inline Rat gcd_integer(const Rat& a, const Rat& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.value().get_num_mpz_t(), b.value().get_num_mpz_t());
  return Rat(g);
}

}  // namespace seirint
