#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apx/errors.hpp"
#include "apx/rational.hpp"
#include "apx/renum.hpp"
#include "apx/schedule.hpp"
#include "apx/spaces.hpp"

namespace apx {

/// An index quadruple (k, m, l, n): "x ∈ B(α(k), r_m) ⇒ f(x) ∈ B(β(l), r_n)".
struct Quad {
  Nat k;
  std::uint64_t m = 0;
  Nat l;
  std::uint64_t n = 0;
};

bool operator==(const Quad& a, const Quad& b);
bool operator<(const Quad& a, const Quad& b);
std::string describe(const Quad& q);

enum class Flavor { Metric, Topological };
const char* flavor_name(Flavor f);
Flavor flavor_from_name(const std::string& name);

/// Exact oracle for the function a system is meant to represent; nullopt
/// outside the domain or when the value has no exact form.
using Probe = std::function<std::optional<RealPoint>(const RealPoint&)>;

/// Behaviour behind a System. Besides the stage function, a system offers
/// sections: finite sets L_b(k, m, n) ⊆ {l | (k,m,l,n) ∈ S}, monotone in the
/// budget b and exhausting the set as b grows.
class SystemImpl {
 public:
  virtual ~SystemImpl() = default;
  virtual std::optional<Quad> stage(std::uint64_t s) const = 0;
  /// Default: the l's of quadruples emitted at stages 0..budget.
  virtual std::vector<Nat> section(const Nat& k, std::uint64_t m, std::uint64_t n,
                                   std::uint64_t budget) const;
};

/// A recursively enumerable approximation system over two spaces, of metric
/// or topological flavor.
class System {
 public:
  System(Flavor flavor, SpacePtr source, SpacePtr target, Schedule schedule,
         std::shared_ptr<const SystemImpl> impl, std::string label, Probe probe = nullptr);

  Flavor flavor() const { return flavor_; }
  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  const Schedule& schedule() const { return schedule_; }
  const std::string& label() const { return label_; }
  /// The represented function, for oracles only (may be empty).
  const Probe& probe() const { return probe_; }

  std::optional<Quad> stage(std::uint64_t s) const { return impl_->stage(s); }
  std::vector<Nat> section(const Nat& k, std::uint64_t m, std::uint64_t n, std::uint64_t budget) const {
    return impl_->section(k, m, n, budget);
  }
  REnum<Quad> quads() const;

  /// (k,m,l,n) found in the section with the given budget.
  bool contains(const Quad& q, std::uint64_t budget) const;

  System with_flavor(Flavor f) const;
  System with_probe(Probe p) const;

 private:
  Flavor flavor_;
  SpacePtr source_;
  SpacePtr target_;
  Schedule schedule_;
  std::shared_ptr<const SystemImpl> impl_;
  std::string label_;
  Probe probe_;
};

/// A system whose sections are {image(k)} or empty, decided exactly:
/// (k,m,l,n) ∈ S iff k valid, l = image(k) and admit(k, m, n).
/// Stage t = <k, m, n> emits the quadruple when it is in S.
struct FunctionalSpec {
  std::function<std::optional<Nat>(const Nat& k)> image;
  std::function<bool(const Nat& k, std::uint64_t m, std::uint64_t n)> admit;
};
System functional_system(Flavor flavor, SpacePtr source, SpacePtr target, const Schedule& sch,
                         FunctionalSpec spec, std::string label, Probe probe);

// Builders for real arithmetic. Scalar systems act on Q; binary ones on Q^2
// under the max metric.

/// l = k and r_m <= r_n.
System id_system(const Schedule& sch = Schedule::dyadic());
/// l = encode(c) for every valid k and every m, n.
System const_system(const Rat& c, const Schedule& sch = Schedule::dyadic());
/// l = a*k + b and |a| r_m < r_n (every m when a = 0).
System affine_system(const Rat& a, const Rat& b, const Schedule& sch = Schedule::dyadic());
/// l = k1 + k2 and 2 r_m < r_n.
System add_system(const Schedule& sch = Schedule::dyadic());
/// l = k1 * k2 and (|k1| + |k2| + r_m) r_m < r_n.
System mul_system(const Schedule& sch = Schedule::dyadic());
/// l = k^2 and (2|k| + r_m) r_m < r_n.
System sq_system(const Schedule& sch = Schedule::dyadic());
/// The empty system on Q.
System empty_system(const Schedule& sch = Schedule::dyadic(), Flavor flavor = Flavor::Metric);

/// The halving system: α(p,q) = β(p,q) = p/(q+1), f(x) = x/2 on positive
/// irrationals, S = {((p,q), m, (⌊p/2⌋, q), n) | q >= n, m >= n}. It is a
/// metric system under the harmonic schedule, not under the dyadic one.
System halving_system(const Schedule& sch = Schedule::harmonic());

/// K = L = Q with α(k) = |k|, f = id on the non-negative reals,
/// S = {(k, m, l, n) | k = l >= 0, m = n}. Sound, but has no covering m.
System abs_diagonal_system(const Schedule& sch = Schedule::dyadic());

/// Builder by CLI name: id, const:<c>, affine:<a>,<b>, add, mul, sq, empty,
/// halving, abs-diagonal. Throws ParseError.
System builder_by_name(const std::string& name, const Schedule& sch);

/// A quadruple over points instead of indices.
struct PointQuad {
  Point x;
  std::uint64_t m = 0;
  Point y;
  std::uint64_t n = 0;
};
bool operator==(const PointQuad& a, const PointQuad& b);
bool operator<(const PointQuad& a, const PointQuad& b);

using PointPredicate = std::function<bool(const PointQuad&)>;

/// Lifts a set of point quadruples: (k,m,l,n) ∈ S iff (α(k), m, β(l), n) ∈ S₀.
/// Sections search l among the first `budget` target indices.
System lift_point_system(PointPredicate s0, SpacePtr source, SpacePtr target, const Schedule& sch,
                         std::string label = "lifted");

struct SaturationWitness {
  Quad present;  // enumerated
  Quad missing;  // same points, not found
};

struct SaturationBounds {
  std::uint64_t stages = 200;       // quadruples taken from these stages
  std::uint64_t index_bound = 32;   // alternative indices searched below this
  std::uint64_t section_budget = 200;
};

/// Bounded search for (k̄, m, l̄, n) ∉ S with α(k̄) = α(k), β(l̄) = β(l) for an
/// enumerated (k, m, l, n). Empty result: saturated up to bounds.
std::vector<SaturationWitness> is_saturated(const System& s, const SaturationBounds& bounds = {});

/// The closure {(k,m,l,n) | ∃(k',m,l',n) ∈ S, α(k) = α(k'), β(l) = β(l')}.
/// Throws UnsupportedOperation if point equality is not decidable.
System saturate(const System& s);

class SaturationError : public Error {
 public:
  SaturationError(const std::string& what, std::vector<SaturationWitness> witnesses)
      : Error(what), witnesses_(std::move(witnesses)) {}
  const std::vector<SaturationWitness>& witnesses() const { return witnesses_; }

 private:
  std::vector<SaturationWitness> witnesses_;
};

/// Decoded image of the quadruples emitted by the first `bounds.stages`
/// stages. Throws SaturationError if the bounded saturation check fails.
std::vector<PointQuad> project_system(const System& s, const SaturationBounds& bounds = {});

}  // namespace apx
