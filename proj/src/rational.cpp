#include "qv/rational.hpp"

#include <limits>
#include <stdexcept>

namespace qv {

BigInt rat_floor(const Rat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);  // always > 0
  BigInt q = num / den;                                      // truncates toward zero
  if (num < 0 && q * den != num) --q;
  return q;
}

BigInt rat_ceil(const Rat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (num > 0 && q * den != num) ++q;
  return q;
}

BigInt rat_round_half_up(const Rat& r) { return rat_floor(r + Rat(1, 2)); }

std::string rat_to_string(const Rat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::optional<Rat> rat_from_string(std::string_view s) {
  if (s.empty()) return std::nullopt;
  const auto slash = s.find('/');
  const auto parse_int = [](std::string_view t) -> std::optional<BigInt> {
    if (t.empty()) return std::nullopt;
    std::size_t i = 0;
    if (t[0] == '+' || t[0] == '-') i = 1;
    if (i == t.size()) return std::nullopt;
    for (std::size_t k = i; k < t.size(); ++k) {
      if (t[k] < '0' || t[k] > '9') return std::nullopt;
    }
    return BigInt(std::string(t));
  };
  if (slash == std::string_view::npos) {
    auto num = parse_int(s);
    if (!num) return std::nullopt;
    return Rat(*num);
  }
  auto num = parse_int(s.substr(0, slash));
  auto den = parse_int(s.substr(slash + 1));
  if (!num || !den || *den == 0) return std::nullopt;
  return Rat(*num, *den);
}

std::int64_t to_int64(const BigInt& v) {
  if (v > BigInt(std::numeric_limits<std::int64_t>::max()) ||
      v < BigInt(std::numeric_limits<std::int64_t>::min())) {
    throw std::overflow_error("value does not fit in 64 bits: " + v.str());
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace qv
