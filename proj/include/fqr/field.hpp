#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "fqr/error.hpp"

namespace fqr {

// Exact scalar fields. A field object is a small descriptor (the prime for
// GF(p), nothing for Q); values of GF(p) also carry their modulus so that
// mixing residues of different fields is caught at the operation.

using Rational = mpq_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

namespace detail {

// Accepts "[-]digits" or "[-]digits/digits" with a nonzero denominator.
inline bool well_formed_scalar(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  std::size_t digits = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i, ++digits;
  if (digits == 0) return false;
  if (i == text.size()) return true;
  if (text[i] != '/') return false;
  ++i;
  digits = 0;
  bool nonzero = false;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    nonzero |= text[i] != '0';
    ++i, ++digits;
  }
  return digits > 0 && nonzero && i == text.size();
}

inline Rational parse_rational(std::string_view text) {
  if (!well_formed_scalar(text)) {
    throw Error(ErrorCode::ParseError, "malformed scalar '" + std::string(text) + "'");
  }
  std::string s(text);
  if (s.front() == '+') s.erase(0, 1);
  Rational value(s, 10);
  value.canonicalize();
  return value;
}

}  // namespace detail

struct RationalField {
  using value_type = Rational;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long v) const { return v; }
  value_type parse(std::string_view text) const { return detail::parse_rational(text); }
  std::string format(const value_type& v) const { return v.get_str(); }
  std::string name() const { return "rational"; }

  friend bool operator==(const RationalField&, const RationalField&) = default;
};

/// Canonical residue modulo a prime, 0 <= value < modulus.
class Residue {
 public:
  Residue() = default;
  Residue(std::uint32_t value, std::uint32_t modulus) : value_(value % modulus), modulus_(modulus) {}

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return modulus_; }

  friend bool operator==(const Residue& a, const Residue& b) {
    check(a, b);
    return a.value_ == b.value_;
  }

  friend Residue operator+(const Residue& a, const Residue& b) {
    check(a, b);
    std::uint64_t s = std::uint64_t(a.value_) + b.value_;
    return raw(static_cast<std::uint32_t>(s >= a.modulus_ ? s - a.modulus_ : s), a.modulus_);
  }
  friend Residue operator-(const Residue& a, const Residue& b) {
    check(a, b);
    std::uint64_t s = std::uint64_t(a.value_) + a.modulus_ - b.value_;
    return raw(static_cast<std::uint32_t>(s >= a.modulus_ ? s - a.modulus_ : s), a.modulus_);
  }
  friend Residue operator-(const Residue& a) { return raw(a.value_ == 0 ? 0 : a.modulus_ - a.value_, a.modulus_); }
  friend Residue operator*(const Residue& a, const Residue& b) {
    check(a, b);
    return raw(static_cast<std::uint32_t>(std::uint64_t(a.value_) * b.value_ % a.modulus_), a.modulus_);
  }
  friend Residue operator/(const Residue& a, const Residue& b) { return a * b.inverse(); }

  Residue& operator+=(const Residue& o) { return *this = *this + o; }
  Residue& operator-=(const Residue& o) { return *this = *this - o; }
  Residue& operator*=(const Residue& o) { return *this = *this * o; }
  Residue& operator/=(const Residue& o) { return *this = *this / o; }

  Residue inverse() const {
    if (value_ == 0) throw Error(ErrorCode::Singular, "division by zero in GF(" + std::to_string(modulus_) + ")");
    // Extended Euclid on (value, modulus).
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = modulus_, new_r = value_;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t, new_t = tmp;
      tmp = r - q * new_r;
      r = new_r, new_r = tmp;
    }
    if (t < 0) t += modulus_;
    return raw(static_cast<std::uint32_t>(t), modulus_);
  }

 private:
  static Residue raw(std::uint32_t v, std::uint32_t m) {
    Residue r;
    r.value_ = v;
    r.modulus_ = m;
    return r;
  }
  static void check(const Residue& a, const Residue& b) {
    if (a.modulus_ != b.modulus_) {
      throw Error(ErrorCode::FieldMismatch, "GF(" + std::to_string(a.modulus_) + ") vs GF(" +
                                                std::to_string(b.modulus_) + ")");
    }
  }

  std::uint32_t value_ = 0;
  std::uint32_t modulus_ = 2;
};

inline bool is_zero(const Residue& x) { return x.value() == 0; }

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

class PrimeField {
 public:
  using value_type = Residue;

  explicit PrimeField(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
    if (p >= (std::uint64_t(1) << 31) || !is_prime(p)) {
      throw Error(ErrorCode::InvalidField, std::to_string(p) + " is not a prime below 2^31");
    }
  }

  std::uint32_t characteristic() const { return p_; }

  value_type zero() const { return {0, p_}; }
  value_type one() const { return {1, p_}; }
  value_type from_int(long v) const {
    long r = v % static_cast<long>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r), p_};
  }
  value_type from_rational(const Rational& q) const {
    mpz_class num = q.get_num() % p_;
    if (num < 0) num += p_;
    mpz_class den = q.get_den() % p_;
    if (den == 0) throw Error(ErrorCode::ParseError, "denominator vanishes modulo " + std::to_string(p_));
    return value_type(static_cast<std::uint32_t>(num.get_ui()), p_) /
           value_type(static_cast<std::uint32_t>(den.get_ui()), p_);
  }
  value_type parse(std::string_view text) const { return from_rational(detail::parse_rational(text)); }
  std::string format(const value_type& v) const { return std::to_string(v.value()); }
  std::string name() const { return "prime:" + std::to_string(p_); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

template <class F>
concept ExactField = requires(const F& f, const typename F::value_type& a, std::string_view s) {
  typename F::value_type;
  { f.zero() } -> std::same_as<typename F::value_type>;
  { f.one() } -> std::same_as<typename F::value_type>;
  { f.from_int(1L) } -> std::same_as<typename F::value_type>;
  { f.parse(s) } -> std::same_as<typename F::value_type>;
  { f.format(a) } -> std::same_as<std::string>;
  { is_zero(a) } -> std::same_as<bool>;
  { f == f } -> std::convertible_to<bool>;
};

/// Runtime choice of field, as read from a document.
using AnyField = std::variant<RationalField, PrimeField>;

inline AnyField parse_field_flag(std::string_view text) {
  if (text == "rational") return RationalField{};
  constexpr std::string_view prefix = "prime:";
  if (text.substr(0, prefix.size()) == prefix) {
    std::string digits(text.substr(prefix.size()));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 12) {
      throw Error(ErrorCode::InvalidField, "bad prime in '" + std::string(text) + "'");
    }
    return PrimeField(std::stoull(digits));
  }
  throw Error(ErrorCode::InvalidField, "expected rational or prime:<p>, got '" + std::string(text) + "'");
}

}  // namespace fqr
