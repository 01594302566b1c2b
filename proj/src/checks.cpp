#include "apx/checks.hpp"

#include <algorithm>
#include <set>

#include "apx/errors.hpp"
#include "apx/names.hpp"

namespace apx {

bool Report::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; });
}

std::string Report::str() const {
  std::string out;
  for (const auto& v : violations) out += v.text + "\n";
  if (violations.empty()) {
    out += "consistent up to bounds (" + std::to_string(quadruples_checked) + " quadruples, " +
           std::to_string(samples) + " samples)\n";
  } else {
    out += std::to_string(violations.size()) + " violation(s) found\n";
  }
  return out;
}

std::optional<Nat> approximant(const Space& space, const Schedule& sch, const RealPoint& x, std::uint64_t m) {
  if (const auto* p = std::get_if<Point>(&x)) return space.encode(*p);
  const auto& s = std::get<SqrtOf>(x);
  std::uint64_t t = sch.find_m_below(sch.r(m) / (abs(s.scale) + 1));
  auto [lo, hi] = sqrt_bracket(s.c, sch, t);
  Rat q = s.scale * ((lo + hi) / 2) + s.offset;
  auto code = space.encode(Point{q});
  if (!code || !space.ball_contains(*code, sch.r(m), x)) return std::nullopt;
  return code;
}

namespace {

constexpr std::size_t kMaxRecorded = 100;

struct Decoded {
  Quad q;
  Point center;
  Rat rm;
};

class Checker {
 public:
  Checker(const System& s, const CheckBounds& bounds) : s_(s), b_(bounds) {
    if (!s.probe()) throw Error("system '" + s.label() + "' has no probe function to check against");
    for (Quad& q : s.quads().prefix(bounds.stages)) {
      auto c = s.source()->decode(q.k);
      if (!c) continue;
      Rat rm = s.schedule().r(q.m);
      quads_.push_back({std::move(q), std::move(*c), std::move(rm)});
    }
    // Sorted by first coordinate, so each sample only scans centers within
    // the largest radius of its own first coordinate.
    std::sort(quads_.begin(), quads_.end(),
              [](const Decoded& a, const Decoded& b) { return a.center[0] < b.center[0]; });
    for (const auto& d : quads_) {
      if (d.rm > max_radius_) max_radius_ = d.rm;
    }
    pool_ = s.source()->index_prefix(bounds.index_pool);
    report_.quadruples_checked = quads_.size();
  }

  // Rational bounds on the first coordinate of x.
  static std::pair<Rat, Rat> first_coordinate(const RealPoint& x) {
    if (const auto* p = std::get_if<Point>(&x)) return {(*p)[0], (*p)[0]};
    const auto& s = std::get<SqrtOf>(x);
    auto [lo, hi] = sqrt_bracket(s.c, Schedule::dyadic(), 24);
    Rat a = s.scale * lo + s.offset, b = s.scale * hi + s.offset;
    return {min(a, b), max(a, b)};
  }

  void add(Violation::Kind kind, std::string text) {
    if (report_.violations.size() >= kMaxRecorded || !seen_.insert(text).second) return;
    report_.violations.push_back({kind, std::move(text)});
  }

  // Source indices k with x ∈ B(α(k), r_m): the exact approximant first, then the pool.
  std::vector<Nat> near(const RealPoint& x, std::uint64_t m) const {
    const Space& src = *s_.source();
    Rat rm = s_.schedule().r(m);
    std::vector<Nat> out;
    if (auto a = approximant(src, s_.schedule(), x, m)) out.push_back(*a);
    for (const Nat& k : pool_) {
      if (std::find(out.begin(), out.end(), k) == out.end() && src.ball_contains(k, rm, x)) out.push_back(k);
    }
    return out;
  }

  void check_enumerated(const RealPoint& x, const RealPoint& fx) {
    const Space& src = *s_.source();
    const Space& tgt = *s_.target();
    auto [lo, hi] = first_coordinate(x);
    Rat from = lo - max_radius_, to = hi + max_radius_;
    auto first = std::lower_bound(quads_.begin(), quads_.end(), from,
                                  [](const Decoded& d, const Rat& v) { return d.center[0] < v; });
    for (auto it = first; it != quads_.end() && !(to < it->center[0]); ++it) {
      const Decoded& d = *it;
      if (!src.point_dist_lt(d.center, x, d.rm)) continue;
      if (!tgt.ball_contains(d.q.l, s_.schedule().r(d.q.n), fx)) {
        add(Violation::Kind::Soundness, soundness_text(d.q, x, fx));
      }
    }
  }

  // Section probe at (k, m, n) for k near x; returns whether the section is non-empty.
  bool probe_section(const RealPoint& x, const RealPoint& fx, const Nat& k, std::uint64_t m, std::uint64_t n) {
    auto ls = s_.section(k, m, n, b_.section_budget);
    Rat rn = s_.schedule().r(n);
    for (const Nat& l : ls) {
      if (!s_.target()->ball_contains(l, rn, fx)) add(Violation::Kind::Soundness, soundness_text({k, m, l, n}, x, fx));
    }
    return !ls.empty();
  }

  std::string soundness_text(const Quad& q, const RealPoint& x, const RealPoint& fx) const {
    auto c = s_.source()->decode(q.k);
    auto d = s_.target()->decode(q.l);
    return "condition (a) violated: quadruple " + describe(q) + " with x=" + describe(x) + " in B(" +
           (c ? describe(*c) : "?") + ", " + s_.schedule().r(q.m).str() + ") but f(x)=" + describe(fx) +
           " not in B(" + (d ? describe(*d) : "?") + ", " + s_.schedule().r(q.n).str() + ")";
  }

  const System& s_;
  CheckBounds b_;
  std::vector<Decoded> quads_;
  Rat max_radius_ = 0;
  std::vector<Nat> pool_;
  Report report_;
  std::set<std::string> seen_;
};

}  // namespace

Report check_metric(const System& s, const std::vector<RealPoint>& samples, const CheckBounds& bounds) {
  Checker ch(s, bounds);
  for (const RealPoint& x : samples) {
    auto fx = s.probe()(x);
    if (!fx) continue;
    ++ch.report_.samples;
    ch.check_enumerated(x, *fx);
    // Witnesses grow with n, so each search starts at the previous one and
    // wraps around; the range covered is still 0..M.
    std::uint64_t start = 0;
    for (std::uint64_t n = 0; n <= bounds.n_max; ++n) {
      bool covered = false;
      for (std::uint64_t i = 0; i <= bounds.m_max && !covered; ++i) {
        std::uint64_t m = (start + i) % (bounds.m_max + 1);
        auto ks = ch.near(x, m);
        bool all = !ks.empty();
        for (const Nat& k : ks) {
          if (!ch.probe_section(x, *fx, k, m, n)) all = false;
        }
        covered = all;
        if (covered) start = m;
      }
      if (!covered) {
        ch.add(Violation::Kind::NoCovering, "condition (b): no witness m <= " + std::to_string(bounds.m_max) +
                                                " for x=" + describe(x) + ", n=" + std::to_string(n) +
                                                " (every nearby k needs some l)");
      }
    }
  }
  return ch.report_;
}

Report check_topological(const System& s, const std::vector<RealPoint>& samples, const CheckBounds& bounds) {
  Checker ch(s, bounds);
  const Space& tgt = *s.target();
  std::vector<Nat> target_pool = tgt.index_prefix(bounds.index_pool);
  for (const RealPoint& x : samples) {
    auto fx = s.probe()(x);
    if (!fx) continue;
    ++ch.report_.samples;
    ch.check_enumerated(x, *fx);
    for (std::uint64_t n = 0; n <= bounds.n_max; ++n) {
      Rat rn = s.schedule().r(n);
      std::vector<Nat> ls;
      if (auto a = approximant(tgt, s.schedule(), *fx, n)) ls.push_back(*a);
      for (const Nat& l : target_pool) {
        if (ls.size() >= bounds.target_candidates) break;
        if (std::find(ls.begin(), ls.end(), l) == ls.end() && tgt.ball_contains(l, rn, *fx)) ls.push_back(l);
      }
      for (const Nat& l : ls) {
        bool found = false;
        for (std::uint64_t m = 0; m <= bounds.m_max && !found; ++m) {
          for (const Nat& k : ch.near(x, m)) {
            ch.probe_section(x, *fx, k, m, n);
            if (s.contains({k, m, l, n}, bounds.section_budget)) {
              found = true;
              break;
            }
          }
        }
        if (!found) {
          auto d = tgt.decode(l);
          ch.add(Violation::Kind::NoWitness, "no witness (k, m) with m <= " + std::to_string(bounds.m_max) +
                                                 " for x=" + describe(x) + " and target ball (" +
                                                 (d ? describe(*d) : to_string(l)) + ", n=" + std::to_string(n) +
                                                 ")");
        }
      }
    }
  }
  return ch.report_;
}

std::vector<RealPoint> sample_points(const Space& space, std::size_t count, std::mt19937_64& rng,
                                     bool with_roots) {
  auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  bool nonneg = !space.encode(Point(space.dimension(), Rat(-1))).has_value();
  bool integers = !space.encode(Point(space.dimension(), Rat(1, 2))).has_value();
  std::vector<RealPoint> out;
  while (out.size() < count) {
    if (with_roots && space.dimension() == 1 && uniform(0, 1) == 0) {
      Rat c(Nat(uniform(1, 40)), Nat(uniform(1, 12)));
      bool square = mpz_perfect_square_p(c.num().get_mpz_t()) && mpz_perfect_square_p(c.den().get_mpz_t());
      if (!square) out.push_back(SqrtOf{c});
      continue;
    }
    Point p;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
      long num = uniform(nonneg ? 0 : -40, 40);
      long den = integers ? 1 : uniform(1, 12);
      p.push_back(Rat(Nat(num), Nat(den)));
    }
    if (space.encode(p)) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace apx
