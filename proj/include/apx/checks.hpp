#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "apx/spaces.hpp"
#include "apx/systems.hpp"

namespace apx {

/// Limits for the bounded oracle checks. Nothing beyond them is examined,
/// and every report says so.
struct CheckBounds {
  std::uint64_t stages = 2000;         // enumerated quadruples checked for soundness
  std::uint64_t n_max = 4;             // target precisions probed
  std::uint64_t m_max = 64;            // witness search for m stops here (the "M")
  std::uint64_t section_budget = 32;   // budget for section probes
  std::uint64_t index_pool = 32;       // candidate indices below this bound
  std::uint64_t target_candidates = 3; // target balls tried per (x, n) in the topological check
};

struct Violation {
  enum class Kind {
    Soundness,   // condition (a) / the "<=" half of the topological condition
    NoCovering,  // no m <= M works for every nearby k (metric condition (b))
    NoWitness,   // no (k, m) with m <= M found (the "=>" half of the topological condition)
  };
  Kind kind;
  std::string text;
};

struct Report {
  std::vector<Violation> violations;
  std::uint64_t quadruples_checked = 0;
  std::uint64_t samples = 0;

  bool empty() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
  std::string str() const;
};

/// Soundness over enumerated quadruples and section probes around each
/// sample, and the covering condition searched up to m <= M. Samples where
/// the probe is undefined are skipped. Requires s.probe().
Report check_metric(const System& s, const std::vector<RealPoint>& samples, const CheckBounds& bounds = {});

/// Both halves of the topological condition: soundness as above, and for
/// target balls around f(x), a (k, m) with m <= M whose section contains l.
Report check_topological(const System& s, const std::vector<RealPoint>& samples,
                         const CheckBounds& bounds = {});

/// Random rational points of the source space of `s` (non-negative for the
/// halving and |k| codings), and when `with_roots` square roots of positive
/// non-square rationals for scalar spaces.
std::vector<RealPoint> sample_points(const Space& space, std::size_t count, std::mt19937_64& rng,
                                     bool with_roots);

/// An index of `space` within r_m of x, when one can be computed exactly.
std::optional<Nat> approximant(const Space& space, const Schedule& sch, const RealPoint& x, std::uint64_t m);

}  // namespace apx
