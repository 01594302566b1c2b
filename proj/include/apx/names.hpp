#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "apx/rational.hpp"
#include "apx/renum.hpp"
#include "apx/schedule.hpp"
#include "apx/spaces.hpp"

namespace apx {

constexpr std::uint64_t kDefaultStepCap = 50'000'000;

/// An α-name: a total stream u with d(α(u(t)), x) < r_t for every t.
/// Values are computed on demand and memoized; concurrent readers are safe.
/// The witness, when present, is the named point and is only read by oracles.
class AlphaName {
 public:
  using Fn = std::function<Nat(std::uint64_t)>;

  AlphaName(SpacePtr space, Schedule schedule, Fn fn, std::optional<RealPoint> witness = std::nullopt);

  Nat at(std::uint64_t t) const;

  const SpacePtr& space() const { return space_; }
  const Schedule& schedule() const { return schedule_; }
  const std::optional<RealPoint>& witness() const { return witness_; }

  /// First t <= upto at which the contract fails against the witness
  /// (exact check), or nullopt. Throws if there is no witness.
  std::optional<std::uint64_t> contract_violation(std::uint64_t upto) const;

 private:
  struct Memo;
  SpacePtr space_;
  Schedule schedule_;
  std::shared_ptr<Memo> memo_;
  std::optional<RealPoint> witness_;
};

/// u(t) = encode(point) for every t.
AlphaName constant_name(SpacePtr space, const Schedule& sch, const Point& point);

/// Scalar name of sqrt(c): the midpoint of an exact bisection interval on
/// [0, max(1, c)] narrowed until its width is below r_t.
AlphaName sqrt_name(const Rat& c, const Schedule& sch);

/// The bisection interval [lo, hi] used for sqrt_name at precision t;
/// lo^2 <= c <= hi^2 and hi - lo < r_t.
std::pair<Rat, Rat> sqrt_bracket(const Rat& c, const Schedule& sch, std::uint64_t t);

/// Converts a name under its schedule into one under `target`:
/// u'(t) = u(μs[r_s <= r'_t]).
AlphaName reschedule(const AlphaName& u, const Schedule& target);

/// Componentwise pairing of two scalar names into a name of the plane
/// point (x, y) under the max metric.
AlphaName product_name(const AlphaName& x, const AlphaName& y, SpacePtr plane);

/// A U-name: a total enumeration i ↦ j of a set of ball codes pair(k, m).
/// Element i is the i-th defined stage of the source enumerator, found by a
/// scan limited to `step_cap` stages.
class SetName {
 public:
  SetName(REnum<Nat> source, std::uint64_t step_cap = kDefaultStepCap,
          std::optional<RealPoint> witness = std::nullopt);

  Nat at(std::uint64_t i) const;

  const REnum<Nat>& source() const { return source_; }
  std::uint64_t step_cap() const { return step_cap_; }
  const std::optional<RealPoint>& witness() const { return witness_; }

 private:
  struct Memo;
  REnum<Nat> source_;
  std::uint64_t step_cap_;
  std::shared_ptr<Memo> memo_;
  std::optional<RealPoint> witness_;
};

/// Test builder: stage j emits j when j = pair(k, m), k is a valid index,
/// and x ∈ B(α(k), r_m).
SetName canonical_set_name(SpacePtr space, const Schedule& sch, const RealPoint& x,
                           std::uint64_t step_cap = kDefaultStepCap);

/// Γ_{U,α}(u)(m) = π₁(u(μi[π₂(u(i)) = m])).
AlphaName gamma_U_alpha(const SetName& u, SpacePtr space, const Schedule& sch,
                        std::uint64_t step_cap = kDefaultStepCap);

/// Γ_{β,V}: stage t = <n, l', n', s> is a zero of Λ when l' is a valid index
/// and (β(v(n)), n) <_e (β(l'), n') is confirmed at stage s; the p-th output is
/// pair(l', n') of the p-th zero.
SetName gamma_beta_V(const AlphaName& v, std::uint64_t step_cap = kDefaultStepCap);

/// The Λ-source of gamma_beta_V as a stage function (gaps where Λ ≠ 0).
REnum<Nat> gamma_beta_V_source(const AlphaName& v);

}  // namespace apx
