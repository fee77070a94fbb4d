#include "aftsynth/rational.hpp"

#include <cctype>

namespace aftsynth {

namespace {

bool all_digits(std::string_view s)
{
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text)
{
  if (text.empty())
    return std::nullopt;

  bool negative = false;
  std::string_view body = text;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      return std::nullopt;
    Integer d{std::string(den)};
    if (d == 0)
      return std::nullopt;
    result = Rational(Integer(std::string(num)), d);
  }
  else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty())
      whole = "0";
    if (!all_digits(whole) || !all_digits(frac))
      return std::nullopt;
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i)
      scale *= 10;
    Integer numerator = Integer(std::string(whole)) * scale + Integer(std::string(frac));
    result = Rational(numerator, scale);
  }
  else {
    if (!all_digits(body))
      return std::nullopt;
    result = Rational(Integer(std::string(body)));
  }

  result.canonicalize();
  if (negative)
    result = -result;
  return result;
}

std::string to_string(const Rational& value)
{
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1)
    return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string to_string(const Integer& value) { return value.get_str(); }

std::string to_decimal_string(const Rational& value)
{
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1)
    return v.get_num().get_str();

  Integer den = v.get_den();
  unsigned twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1)
    return to_string(v);

  unsigned digits = std::max(twos, fives);
  Integer scale = 1;
  for (unsigned i = 0; i < digits; ++i)
    scale *= 10;
  Integer scaled = v.get_num() * scale / v.get_den();
  bool negative = scaled < 0;
  if (negative)
    scaled = -scaled;
  std::string s = scaled.get_str();
  if (s.size() <= digits)
    s.insert(0, digits - s.size() + 1, '0');
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

Integer lcm(const Integer& a, const Integer& b)
{
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace aftsynth
