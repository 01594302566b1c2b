#include "apx/schedule.hpp"

#include "apx/errors.hpp"

namespace apx {

Schedule Schedule::dyadic() { return Schedule(Kind::Dyadic, "dyadic", nullptr); }

Schedule Schedule::harmonic() { return Schedule(Kind::Harmonic, "harmonic", nullptr); }

Schedule Schedule::custom(std::function<Rat(std::uint64_t)> r, std::string name,
                          std::uint64_t validated_prefix) {
  Schedule s(Kind::Custom, std::move(name),
             std::make_shared<const std::function<Rat(std::uint64_t)>>(std::move(r)));
  for (std::uint64_t t = 0; t < validated_prefix; ++t) s.r(t);
  return s;
}

Schedule Schedule::by_name(const std::string& name) {
  if (name == "dyadic") return dyadic();
  if (name == "harmonic") return harmonic();
  throw ParseError("unknown schedule '" + name + "' (expected dyadic or harmonic)");
}

Rat Schedule::r(std::uint64_t t) const {
  switch (kind_) {
    case Kind::Dyadic:
      return inverse_power_of_two(t);
    case Kind::Harmonic:
      return Rat(Nat(1), Nat(static_cast<unsigned long>(t)) + 1);
    case Kind::Custom:
      break;
  }
  Rat value = (*custom_)(t);
  if (value.sign() <= 0) {
    throw ScheduleError("schedule '" + name_ + "' has non-positive value " + value.str() +
                        " at t=" + std::to_string(t));
  }
  return value;
}

std::uint64_t Schedule::find_m_below(const Rat& q) const {
  if (q.sign() <= 0) throw Error("find_m_below requires a positive bound, got " + q.str());
  if (kind_ != Kind::Custom) {
    Nat c = -floor(-(Rat(1) / q));  // ceil(1/q)
    if (c <= 1) return 0;
    if (kind_ == Kind::Harmonic) return Nat(c - 1).get_ui();
    Nat below = c - 1;
    return mpz_sizeinbase(below.get_mpz_t(), 2);  // least m with 2^m >= c
  }
  for (std::uint64_t m = 0;; ++m) {
    if (r(m) <= q) return m;
  }
}

Rat Schedule::prefix_min(std::uint64_t s) const {
  if (kind_ != Kind::Custom) return r(s);  // built-ins are decreasing
  Rat best = r(0);
  for (std::uint64_t t = 1; t <= s; ++t) best = min(best, r(t));
  return best;
}

}  // namespace apx
