#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "apx/rational.hpp"

namespace apx {

/// The precision sequence r_0, r_1, r_2, ... of positive rationals with 0 as
/// an accumulation point. Balls of radius index m have radius r_m.
class Schedule {
 public:
  enum class Kind { Dyadic, Harmonic, Custom };

  /// r_t = 2^-t.
  static Schedule dyadic();
  /// r_t = 1/(t+1).
  static Schedule harmonic();
  /// Arbitrary computable sequence. The first `validated_prefix` values are
  /// checked for positivity here; every later evaluation is checked as well.
  static Schedule custom(std::function<Rat(std::uint64_t)> r, std::string name,
                         std::uint64_t validated_prefix = 1024);
  /// "dyadic" or "harmonic"; throws ParseError otherwise.
  static Schedule by_name(const std::string& name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  Rat r(std::uint64_t t) const;

  /// Least m with r_m <= q. Requires q > 0.
  std::uint64_t find_m_below(const Rat& q) const;

  /// min{r_0, ..., r_s}.
  Rat prefix_min(std::uint64_t s) const;

 private:
  Schedule(Kind kind, std::string name, std::shared_ptr<const std::function<Rat(std::uint64_t)>> fn)
      : kind_(kind), name_(std::move(name)), custom_(std::move(fn)) {}

  Kind kind_;
  std::string name_;
  std::shared_ptr<const std::function<Rat(std::uint64_t)>> custom_;
};

}  // namespace apx
