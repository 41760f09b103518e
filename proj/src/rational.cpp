#include "vass/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace vass {

namespace {

bool is_integer_literal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  std::string t(s);
  if (t[0] == '+') t.erase(0, 1);
  return mpz_class(t, 10);
}

}  // namespace

Rational::Rational(long long n, long long d) {
  if (d == 0) throw std::domain_error("zero denominator");
  v_ = mpq_class(mpz_class(static_cast<signed long>(n)), mpz_class(static_cast<signed long>(d)));
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    if (fp.empty() || !is_integer_literal(fp) || fp[0] == '-' || fp[0] == '+')
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    bool neg = !ip.empty() && ip[0] == '-';
    std::string digits;
    if (ip.empty() || ip == "-" || ip == "+") digits = "0";
    else digits = std::string(ip.substr((ip[0] == '-' || ip[0] == '+') ? 1 : 0));
    mpz_class whole = parse_integer(digits);
    mpz_class frac = parse_integer(fp);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    mpq_class q(whole * scale + frac, scale);
    q.canonicalize();
    if (neg) q = -q;
    return Rational(q);
  }
  return Rational(mpq_class(parse_integer(text)));
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

mpz_class Rational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

long long to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer exceeds 64 bits: " + z.get_str());
  return z.get_si();
}

const Rational& ExtRational::value() const {
  if (kind_ != Kind::Finite) throw std::logic_error("ExtRational::value on non-finite " + str());
  return value_;
}

std::string ExtRational::str() const {
  switch (kind_) {
    case Kind::Finite: return value_.str();
    case Kind::PlusInfinity: return "+inf";
    case Kind::MinusInfinity: return "-inf";
    case Kind::Undefined: return "undefined";
  }
  return "undefined";
}

ExtRational ExtRational::parse(std::string_view text) {
  if (text == "+inf" || text == "inf") return plus_infinity();
  if (text == "-inf") return minus_infinity();
  if (text == "undefined") return undefined();
  return ExtRational(Rational::parse(text));
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  using K = ExtRational::Kind;
  if (a.kind_ == K::Undefined || b.kind_ == K::Undefined) return ExtRational::undefined();
  if ((a.kind_ == K::PlusInfinity && b.kind_ == K::MinusInfinity) ||
      (a.kind_ == K::MinusInfinity && b.kind_ == K::PlusInfinity))
    return ExtRational::undefined();
  if (a.kind_ != K::Finite) return a;
  if (b.kind_ != K::Finite) return b;
  return ExtRational(a.value_ + b.value_);
}

ExtRational operator*(const Rational& scale, const ExtRational& a) {
  using K = ExtRational::Kind;
  if (a.kind_ == K::Undefined) return a;
  if (a.kind_ == K::Finite) return ExtRational(scale * a.value_);
  if (scale.is_zero()) return ExtRational(Rational(0));
  bool flip = scale.sign() < 0;
  if (a.kind_ == K::PlusInfinity) return flip ? ExtRational::minus_infinity() : a;
  return flip ? ExtRational::plus_infinity() : a;
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.kind_ != b.kind_) return false;
  return a.kind_ != ExtRational::Kind::Finite || a.value_ == b.value_;
}

std::partial_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  using K = ExtRational::Kind;
  if (a.kind_ == K::Undefined || b.kind_ == K::Undefined) return std::partial_ordering::unordered;
  auto rank = [](K k) { return k == K::MinusInfinity ? 0 : (k == K::Finite ? 1 : 2); };
  int ra = rank(a.kind_), rb = rank(b.kind_);
  if (ra != rb) return ra < rb ? std::partial_ordering::less : std::partial_ordering::greater;
  if (a.kind_ != K::Finite) return std::partial_ordering::equivalent;
  return a.value_ <=> b.value_;
}

}  // namespace vass
