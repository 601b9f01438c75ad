#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <compare>
#include <cstring>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "icdof/error.hpp"

namespace icdof {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline BigInt big_from_i128(i128 v) {
  const bool negative = v < 0;
  u128 mag = negative ? u128(0) - u128(v) : u128(v);
  BigInt out = BigInt(static_cast<std::uint64_t>(mag >> 64));
  out <<= 64;
  out += BigInt(static_cast<std::uint64_t>(mag));
  return negative ? BigInt(-out) : out;
}

/// log2 of a positive big integer, accurate to double precision.
inline double log2_big(const BigInt& v) {
  const unsigned bits = boost::multiprecision::msb(v) + 1;
  if (bits <= 62) return std::log2(static_cast<double>(v.convert_to<std::uint64_t>()));
  const unsigned shift = bits - 62;
  const BigInt top = v >> shift;
  return std::log2(static_cast<double>(top.convert_to<std::uint64_t>())) + shift;
}

constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

}  // namespace detail

/*
 * Exact rational number in canonical reduced form (denominator > 0,
 * gcd(|num|, den) = 1).
 *
 * Values whose numerator and denominator both fit in [-(2^63-1), 2^63-1]
 * are stored inline; everything else lives in a heap-allocated BigRational.
 * The representation is normalized after every operation, so a value is
 * small iff it fits, which keeps equality and hashing representation-free.
 * Inline arithmetic runs in 128-bit intermediates and promotes on overflow.
 */
class Rational {
 public:
  Rational() noexcept : num_(0), den_(1) {}

  // NOLINTNEXTLINE(google-explicit-constructor): integer literals read naturally.
  Rational(std::int64_t value) : Rational(from_i128(value, 1)) {}
  Rational(int value) : Rational(static_cast<std::int64_t>(value)) {}

  Rational(std::int64_t num, std::int64_t den) : Rational(checked_ratio(num, den)) {}

  explicit Rational(const BigInt& num, const BigInt& den = BigInt(1)) {
    if (den == 0) fail(ErrorCode::invalid_argument, "zero denominator");
    init_from_big(BigRational(num, den));
  }

  explicit Rational(const BigRational& value) { init_from_big(value); }

  Rational(const Rational& other) : den_(other.den_) {
    if (other.is_small()) {
      num_ = other.num_;
    } else {
      big_ = new BigRational(*other.big_);
    }
  }

  Rational(Rational&& other) noexcept : den_(other.den_) {
    if (other.is_small()) {
      num_ = other.num_;
    } else {
      big_ = other.big_;
      other.den_ = 1;
      other.num_ = 0;
    }
  }

  Rational& operator=(const Rational& other) {
    if (this != &other) {
      Rational copy(other);
      swap(copy);
    }
    return *this;
  }

  Rational& operator=(Rational&& other) noexcept {
    if (this != &other) {
      release();
      den_ = other.den_;
      if (other.is_small()) {
        num_ = other.num_;
      } else {
        big_ = other.big_;
        other.den_ = 1;
        other.num_ = 0;
      }
    }
    return *this;
  }

  ~Rational() { release(); }

  void swap(Rational& other) noexcept {
    std::swap(den_, other.den_);
    // Both union members are trivially copyable 8-byte values.
    std::int64_t tmp;
    static_assert(sizeof(big_) == sizeof(num_));
    std::memcpy(&tmp, &num_, sizeof tmp);
    std::memcpy(&num_, &other.num_, sizeof tmp);
    std::memcpy(&other.num_, &tmp, sizeof tmp);
  }

  /// Accepts "p", "p/q", and finite decimals such as "-0.08" (read exactly).
  static Rational parse(std::string_view text);

  bool is_small() const noexcept { return den_ != 0; }
  bool is_zero() const noexcept { return is_small() && num_ == 0; }
  bool is_one() const noexcept { return is_small() && num_ == 1 && den_ == 1; }
  bool is_integer() const {
    return is_small() ? den_ == 1 : boost::multiprecision::denominator(*big_) == 1;
  }

  int sign() const {
    if (is_small()) return (num_ > 0) - (num_ < 0);
    return big_->sign();
  }

  BigInt numerator() const {
    return is_small() ? BigInt(num_) : BigInt(boost::multiprecision::numerator(*big_));
  }
  BigInt denominator() const {
    return is_small() ? BigInt(den_) : BigInt(boost::multiprecision::denominator(*big_));
  }

  BigRational to_big() const {
    return is_small() ? BigRational(BigInt(num_), BigInt(den_)) : *big_;
  }

  double to_double() const {
    if (is_small()) return static_cast<double>(num_) / static_cast<double>(den_);
    return big_->convert_to<double>();
  }

  /// log2(|x|) for x != 0, without going through a possibly underflowing double.
  double log2_abs() const {
    if (is_small()) {
      const double n = std::abs(static_cast<double>(num_));
      return std::log2(n) - std::log2(static_cast<double>(den_));
    }
    BigInt n = boost::multiprecision::numerator(*big_);
    if (n < 0) n = -n;
    return detail::log2_big(n) - detail::log2_big(boost::multiprecision::denominator(*big_));
  }

  /// Largest integer not exceeding the value.
  BigInt floor() const {
    if (is_small()) {
      std::int64_t q = num_ / den_;
      if (num_ % den_ != 0 && num_ < 0) --q;
      return BigInt(q);
    }
    const BigInt n = boost::multiprecision::numerator(*big_);
    const BigInt d = boost::multiprecision::denominator(*big_);
    BigInt q = n / d;
    if (q * d != n && n < 0) --q;
    return q;
  }

  Rational abs() const { return sign() < 0 ? -*this : *this; }

  std::string str() const {
    if (is_small()) {
      return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    const BigInt n = boost::multiprecision::numerator(*big_);
    const BigInt d = boost::multiprecision::denominator(*big_);
    return d == 1 ? n.str() : n.str() + "/" + d.str();
  }

  std::size_t hash() const {
    if (is_small()) {
      std::uint64_t h = static_cast<std::uint64_t>(num_) * 0x9E3779B97F4A7C15ULL;
      h ^= static_cast<std::uint64_t>(den_) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
    return std::hash<std::string>{}(str());
  }

  Rational operator-() const {
    if (is_small()) return from_i128(-detail::i128(num_), den_);
    return Rational(BigRational(-*big_));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      if (a.den_ == b.den_ && a.den_ == 1) return from_i128(detail::i128(a.num_) + b.num_, 1);
      return from_i128(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                       detail::i128(a.den_) * b.den_);
    }
    return Rational(BigRational(a.to_big() + b.to_big()));
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      return from_i128(detail::i128(a.num_) * b.den_ - detail::i128(b.num_) * a.den_,
                       detail::i128(a.den_) * b.den_);
    }
    return Rational(BigRational(a.to_big() - b.to_big()));
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      return from_i128(detail::i128(a.num_) * b.num_, detail::i128(a.den_) * b.den_);
    }
    return Rational(BigRational(a.to_big() * b.to_big()));
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) fail(ErrorCode::invalid_argument, "division by zero");
    if (a.is_small() && b.is_small()) {
      return from_i128(detail::i128(a.num_) * b.den_, detail::i128(a.den_) * b.num_);
    }
    return Rational(BigRational(a.to_big() / b.to_big()));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.is_small() != b.is_small()) return false;
    if (a.is_small()) return a.num_ == b.num_ && a.den_ == b.den_;
    return *a.big_ == *b.big_;
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.is_small() && b.is_small()) {
      const detail::i128 l = detail::i128(a.num_) * b.den_;
      const detail::i128 r = detail::i128(b.num_) * a.den_;
      return l <=> r;
    }
    const BigRational l = a.to_big();
    const BigRational r = b.to_big();
    if (l < r) return std::strong_ordering::less;
    if (r < l) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  static Rational checked_ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) fail(ErrorCode::invalid_argument, "zero denominator");
    return from_i128(num, den);
  }

  /// Canonicalizes n/d (d != 0) and picks the inline or big representation.
  static Rational from_i128(detail::i128 n, detail::i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const detail::u128 mag = n < 0 ? detail::u128(0) - detail::u128(n) : detail::u128(n);
    if (mag == 0) return Rational();
    const detail::u128 g = detail::gcd_u128(mag, detail::u128(d));
    const detail::u128 rn = mag / g;
    const detail::u128 rd = detail::u128(d) / g;
    Rational out;
    if (rn <= detail::u128(detail::kSmallMax) && rd <= detail::u128(detail::kSmallMax)) {
      out.num_ = n < 0 ? -static_cast<std::int64_t>(rn) : static_cast<std::int64_t>(rn);
      out.den_ = static_cast<std::int64_t>(rd);
      return out;
    }
    const detail::i128 sn = n < 0 ? -detail::i128(rn) : detail::i128(rn);
    out.big_ = new BigRational(detail::big_from_i128(sn), detail::big_from_i128(detail::i128(rd)));
    out.den_ = 0;
    return out;
  }

  void init_from_big(const BigRational& value) {
    const BigInt& n = boost::multiprecision::numerator(value);
    const BigInt& d = boost::multiprecision::denominator(value);
    const BigInt limit(detail::kSmallMax);
    if (n <= limit && n >= -limit && d <= limit) {
      num_ = n.convert_to<std::int64_t>();
      den_ = d.convert_to<std::int64_t>();
    } else {
      big_ = new BigRational(value);
      den_ = 0;
    }
  }

  void release() noexcept {
    if (!is_small()) {
      delete big_;
      den_ = 1;
      num_ = 0;
    }
  }

  union {
    std::int64_t num_;
    BigRational* big_;
  };
  std::int64_t den_;  // 0 marks the big representation
};

inline Rational Rational::parse(std::string_view text) {
  auto bad = [&]() -> Rational {
    fail(ErrorCode::parse_error, "malformed rational '" + std::string(text) + "'");
  };
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  // Signed integer or decimal literal.
  auto parse_number = [&](std::string_view s) -> Rational {
    s = trim(s);
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) return bad();
    std::string digits;
    std::size_t frac_digits = 0;
    bool seen_point = false;
    for (char c : s) {
      if (c == '.' && !seen_point) {
        seen_point = true;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        digits.push_back(c);
        if (seen_point) ++frac_digits;
      } else {
        return bad();
      }
    }
    if (digits.empty()) return bad();
    // cpp_int reads a leading 0 as an octal prefix
    const auto first = digits.find_first_not_of('0');
    BigInt num(first == std::string::npos ? std::string("0") : digits.substr(first));
    BigInt den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
    if (negative) num = -num;
    return Rational(num, den);
  };

  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_number(text);
  const Rational num = parse_number(text.substr(0, slash));
  const std::string_view rest = trim(text.substr(slash + 1));
  if (rest.empty() || rest.front() == '+' || rest.front() == '-') return bad();
  const Rational den = parse_number(rest);
  if (den.is_zero()) fail(ErrorCode::parse_error, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

}  // namespace icdof

template <>
struct std::hash<icdof::Rational> {
  std::size_t operator()(const icdof::Rational& q) const { return q.hash(); }
};
