#include "apx/rational.hpp"

#include <cctype>
#include <utility>

#include "apx/errors.hpp"

namespace apx {

std::string to_string(const Nat& n) { return n.get_str(10); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Nat parse_nat(std::string_view text) {
  if (!all_digits(text)) {
    throw ParseError("malformed natural number: '" + std::string(text) + "'");
  }
  return Nat(std::string(text), 10);
}

Rat::Rat(const Nat& num, const Nat& den) {
  if (den == 0) throw Error("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rat::Rat(mpq_class q) : q_(std::move(q)) {
  if (q_.get_den() == 0) throw Error("rational with zero denominator");
  q_.canonicalize();
}

Rat Rat::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num_text = body.substr(0, slash);
  std::string_view den_text = slash == std::string_view::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num_text) || !all_digits(den_text)) {
    throw ParseError("malformed rational: '" + std::string(text) + "'");
  }
  Nat num(std::string(num_text), 10);
  Nat den(std::string(den_text), 10);
  if (den == 0) throw ParseError("zero denominator in rational: '" + std::string(text) + "'");
  if (negative) num = -num;
  return Rat(num, den);
}

std::string Rat::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str(10);
  return q_.get_num().get_str(10) + "/" + q_.get_den().get_str(10);
}

Rat& Rat::operator+=(const Rat& o) {
  q_ += o.q_;
  return *this;
}

Rat& Rat::operator-=(const Rat& o) {
  q_ -= o.q_;
  return *this;
}

Rat& Rat::operator*=(const Rat& o) {
  q_ *= o.q_;
  return *this;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw Error("division by zero");
  q_ /= o.q_;
  return *this;
}

Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }
Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat inverse_power_of_two(unsigned long e) {
  Nat den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, e);
  return Rat(Nat(1), den);
}

Nat floor(const Rat& r) {
  Nat out;
  mpz_fdiv_q(out.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
  return out;
}

}  // namespace apx
