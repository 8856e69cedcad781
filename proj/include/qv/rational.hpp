#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qv {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat make_rat(std::int64_t num, std::int64_t den = 1) {
  return Rat(BigInt(num), BigInt(den));
}

BigInt rat_floor(const Rat& r);
BigInt rat_ceil(const Rat& r);
/// floor(r + 1/2); used for score-ballot normalization.
BigInt rat_round_half_up(const Rat& r);

/// "p" when integral, "p/q" otherwise. Wire format for all rational values.
std::string rat_to_string(const Rat& r);
/// Accepts "p" and "p/q" with optional sign; rejects q = 0.
std::optional<Rat> rat_from_string(std::string_view s);

std::int64_t to_int64(const BigInt& v);  // throws on overflow

/// Rational extended with -inf/+inf, for residual-order sentinels and
/// breakpoint intervals.
class ExtRat {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  ExtRat() = default;
  ExtRat(Rat v) : value_(std::move(v)) {}            // NOLINT(google-explicit-constructor)
  ExtRat(std::int64_t v) : value_(make_rat(v)) {}    // NOLINT(google-explicit-constructor)

  static ExtRat neg_inf() { return ExtRat(Kind::NegInf); }
  static ExtRat pos_inf() { return ExtRat(Kind::PosInf); }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  const Rat& value() const {
    assert(finite());
    return value_;
  }

  ExtRat operator-(std::int64_t rhs) const {
    if (!finite()) return *this;
    return ExtRat(Rat(value_ - make_rat(rhs)));
  }

  friend bool operator==(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.finite() || a.value_ == b.value_;
  }
  friend bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }
  friend bool operator<(const ExtRat& a, const ExtRat& b) {
    if (a.kind_ == Kind::NegInf) return b.kind_ != Kind::NegInf;
    if (a.kind_ == Kind::PosInf) return false;
    if (b.kind_ == Kind::PosInf) return true;
    if (b.kind_ == Kind::NegInf) return false;
    return a.value_ < b.value_;
  }
  friend bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
  friend bool operator<=(const ExtRat& a, const ExtRat& b) { return !(b < a); }
  friend bool operator>=(const ExtRat& a, const ExtRat& b) { return !(a < b); }

  friend ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }
  friend ExtRat max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

 private:
  explicit ExtRat(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Finite;
  Rat value_;
};

}  // namespace qv
