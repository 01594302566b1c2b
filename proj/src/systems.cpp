#include "apx/systems.hpp"

#include <algorithm>
#include <set>

#include "apx/errors.hpp"
#include "apx/tupling.hpp"

namespace apx {

bool operator==(const Quad& a, const Quad& b) {
  return a.k == b.k && a.m == b.m && a.l == b.l && a.n == b.n;
}

bool operator<(const Quad& a, const Quad& b) {
  if (a.k != b.k) return a.k < b.k;
  if (a.m != b.m) return a.m < b.m;
  if (a.l != b.l) return a.l < b.l;
  return a.n < b.n;
}

std::string describe(const Quad& q) {
  return "(" + to_string(q.k) + ", " + std::to_string(q.m) + ", " + to_string(q.l) + ", " +
         std::to_string(q.n) + ")";
}

const char* flavor_name(Flavor f) { return f == Flavor::Metric ? "metric" : "topological"; }

Flavor flavor_from_name(const std::string& name) {
  if (name == "metric") return Flavor::Metric;
  if (name == "topological") return Flavor::Topological;
  throw ParseError("unknown system flavor '" + name + "'");
}

std::vector<Nat> SystemImpl::section(const Nat& k, std::uint64_t m, std::uint64_t n,
                                     std::uint64_t budget) const {
  std::vector<Nat> out;
  for (std::uint64_t s = 0; s <= budget; ++s) {
    auto q = stage(s);
    if (q && q->k == k && q->m == m && q->n == n &&
        std::find(out.begin(), out.end(), q->l) == out.end()) {
      out.push_back(q->l);
    }
  }
  return out;
}

System::System(Flavor flavor, SpacePtr source, SpacePtr target, Schedule schedule,
               std::shared_ptr<const SystemImpl> impl, std::string label, Probe probe)
    : flavor_(flavor),
      source_(std::move(source)),
      target_(std::move(target)),
      schedule_(std::move(schedule)),
      impl_(std::move(impl)),
      label_(std::move(label)),
      probe_(std::move(probe)) {}

REnum<Quad> System::quads() const {
  auto impl = impl_;
  return REnum<Quad>([impl](std::uint64_t s) { return impl->stage(s); });
}

bool System::contains(const Quad& q, std::uint64_t budget) const {
  auto ls = section(q.k, q.m, q.n, budget);
  return std::find(ls.begin(), ls.end(), q.l) != ls.end();
}

System System::with_flavor(Flavor f) const {
  System out = *this;
  out.flavor_ = f;
  return out;
}

System System::with_probe(Probe p) const {
  System out = *this;
  out.probe_ = std::move(p);
  return out;
}

namespace {

class FunctionalImpl : public SystemImpl {
 public:
  FunctionalImpl(SpacePtr source, FunctionalSpec spec)
      : source_(std::move(source)), spec_(std::move(spec)) {}

  std::optional<Quad> stage(std::uint64_t s) const override {
    auto [k, m, n] = tuple_decode<3>(s);
    Nat kk(static_cast<unsigned long>(k));
    auto ls = section(kk, m, n, s);
    if (ls.empty()) return std::nullopt;
    return Quad{kk, m, ls.front(), n};
  }

  std::vector<Nat> section(const Nat& k, std::uint64_t m, std::uint64_t n,
                           std::uint64_t budget) const override {
    if (!source_->valid_index(k, budget) || !spec_.admit(k, m, n)) return {};
    auto l = spec_.image(k);
    if (!l) return {};
    return {*l};
  }

 private:
  SpacePtr source_;
  FunctionalSpec spec_;
};

Point decode_or_throw(const Space& space, const Nat& k) {
  auto p = space.decode(k);
  if (!p) throw InvalidIndex("index " + to_string(k) + " is not in the domain of " + space.name());
  return *p;
}

bool is_rational_square(const Rat& c) {
  if (c.sign() < 0) return false;
  return mpz_perfect_square_p(c.num().get_mpz_t()) && mpz_perfect_square_p(c.den().get_mpz_t());
}

// scale * sqrt(c) + offset, collapsed to a rational point when exact.
RealPoint surd(const Rat& c, const Rat& scale, const Rat& offset) {
  if (scale.is_zero() || c.is_zero()) return Point{offset};
  if (is_rational_square(c)) {
    Nat rn, rd;
    mpz_sqrt(rn.get_mpz_t(), c.num().get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), c.den().get_mpz_t());
    return Point{scale * Rat(rn, rd) + offset};
  }
  return SqrtOf{c, scale, offset};
}

std::optional<Rat> scalar_of(const RealPoint& x) {
  if (const auto* p = std::get_if<Point>(&x); p && p->size() == 1) return (*p)[0];
  return std::nullopt;
}

}  // namespace

System functional_system(Flavor flavor, SpacePtr source, SpacePtr target, const Schedule& sch,
                         FunctionalSpec spec, std::string label, Probe probe) {
  auto impl = std::make_shared<FunctionalImpl>(source, std::move(spec));
  return System(flavor, std::move(source), std::move(target), sch, std::move(impl), std::move(label),
                std::move(probe));
}

System id_system(const Schedule& sch) {
  SpacePtr q = RationalSpace::scalar();
  FunctionalSpec spec{
      [](const Nat& k) -> std::optional<Nat> { return k; },
      [sch](const Nat&, std::uint64_t m, std::uint64_t n) { return sch.r(m) <= sch.r(n); }};
  return functional_system(Flavor::Metric, q, q, sch, std::move(spec), "id",
                           [](const RealPoint& x) -> std::optional<RealPoint> { return x; });
}

System const_system(const Rat& c, const Schedule& sch) {
  SpacePtr q = RationalSpace::scalar();
  Nat code = encode_rational(c);
  FunctionalSpec spec{[code](const Nat&) -> std::optional<Nat> { return code; },
                      [](const Nat&, std::uint64_t, std::uint64_t) { return true; }};
  return functional_system(Flavor::Metric, q, q, sch, std::move(spec), "const:" + c.str(),
                           [c](const RealPoint&) -> std::optional<RealPoint> { return Point{c}; });
}

System affine_system(const Rat& a, const Rat& b, const Schedule& sch) {
  SpacePtr q = RationalSpace::scalar();
  FunctionalSpec spec{
      [q, a, b](const Nat& k) -> std::optional<Nat> {
        return encode_rational(a * decode_or_throw(*q, k)[0] + b);
      },
      [sch, a](const Nat&, std::uint64_t m, std::uint64_t n) {
        return a.is_zero() || abs(a) * sch.r(m) < sch.r(n);
      }};
  Probe probe = [a, b](const RealPoint& x) -> std::optional<RealPoint> {
    if (auto v = scalar_of(x)) return Point{a * *v + b};
    if (const auto* s = std::get_if<SqrtOf>(&x)) return surd(s->c, a * s->scale, a * s->offset + b);
    return std::nullopt;
  };
  return functional_system(Flavor::Metric, q, q, sch, std::move(spec),
                           "affine:" + a.str() + "," + b.str(), std::move(probe));
}

namespace {

System binary_system(const Schedule& sch, std::string label,
                     std::function<Rat(const Rat&, const Rat&)> op,
                     std::function<bool(const Rat&, const Rat&, const Rat&, const Rat&)> admit) {
  SpacePtr plane = RationalSpace::plane(RationalSpace::Metric::Max);
  SpacePtr q = RationalSpace::scalar();
  FunctionalSpec spec{
      [plane, op](const Nat& k) -> std::optional<Nat> {
        Point p = decode_or_throw(*plane, k);
        return encode_rational(op(p[0], p[1]));
      },
      [plane, sch, admit](const Nat& k, std::uint64_t m, std::uint64_t n) {
        Point p = decode_or_throw(*plane, k);
        return admit(p[0], p[1], sch.r(m), sch.r(n));
      }};
  Probe probe = [op](const RealPoint& x) -> std::optional<RealPoint> {
    const auto* p = std::get_if<Point>(&x);
    if (!p || p->size() != 2) return std::nullopt;
    return Point{op((*p)[0], (*p)[1])};
  };
  return functional_system(Flavor::Metric, plane, q, sch, std::move(spec), std::move(label),
                           std::move(probe));
}

}  // namespace

System add_system(const Schedule& sch) {
  return binary_system(
      sch, "add", [](const Rat& x, const Rat& y) { return x + y; },
      [](const Rat&, const Rat&, const Rat& rm, const Rat& rn) { return 2 * rm < rn; });
}

System mul_system(const Schedule& sch) {
  return binary_system(
      sch, "mul", [](const Rat& x, const Rat& y) { return x * y; },
      [](const Rat& x, const Rat& y, const Rat& rm, const Rat& rn) {
        return (abs(x) + abs(y) + rm) * rm < rn;
      });
}

System sq_system(const Schedule& sch) {
  SpacePtr q = RationalSpace::scalar();
  FunctionalSpec spec{
      [q](const Nat& k) -> std::optional<Nat> {
        Rat x = decode_or_throw(*q, k)[0];
        return encode_rational(x * x);
      },
      [q, sch](const Nat& k, std::uint64_t m, std::uint64_t n) {
        Rat x = decode_or_throw(*q, k)[0];
        Rat rm = sch.r(m);
        return (2 * abs(x) + rm) * rm < sch.r(n);
      }};
  Probe probe = [](const RealPoint& x) -> std::optional<RealPoint> {
    if (auto v = scalar_of(x)) return Point{*v * *v};
    if (const auto* s = std::get_if<SqrtOf>(&x)) {
      // (a sqrt(c) + b)^2 = 2ab sqrt(c) + a^2 c + b^2
      return surd(s->c, 2 * s->scale * s->offset, s->scale * s->scale * s->c + s->offset * s->offset);
    }
    return std::nullopt;
  };
  return functional_system(Flavor::Metric, q, q, sch, std::move(spec), "sq", std::move(probe));
}

System empty_system(const Schedule& sch, Flavor flavor) {
  SpacePtr q = RationalSpace::scalar();
  FunctionalSpec spec{[](const Nat&) -> std::optional<Nat> { return std::nullopt; },
                      [](const Nat&, std::uint64_t, std::uint64_t) { return false; }};
  return functional_system(flavor, q, q, sch, std::move(spec), "empty", nullptr);
}

System halving_system(const Schedule& sch) {
  SpacePtr h = RationalSpace::halving();
  FunctionalSpec spec{
      [](const Nat& k) -> std::optional<Nat> {
        auto [p, q] = cantor_unpair(k);
        return cantor_pair(Nat(p / 2), q);
      },
      [](const Nat& k, std::uint64_t m, std::uint64_t n) {
        auto q = cantor_unpair(k).second;
        return q >= Nat(static_cast<unsigned long>(n)) && m >= n;
      }};
  // f(x) = x/2 on the positive irrationals; rational inputs are outside E.
  Probe probe = [](const RealPoint& x) -> std::optional<RealPoint> {
    const auto* s = std::get_if<SqrtOf>(&x);
    if (!s || !s->offset.is_zero() || s->scale.sign() <= 0 || s->c.sign() <= 0 ||
        is_rational_square(s->c)) {
      return std::nullopt;
    }
    return SqrtOf{s->c, s->scale / 2, 0};
  };
  return functional_system(Flavor::Metric, h, h, sch, std::move(spec), "halving", std::move(probe));
}

System abs_diagonal_system(const Schedule& sch) {
  SpacePtr a = RationalSpace::abs_line();
  FunctionalSpec spec{[](const Nat& k) -> std::optional<Nat> { return k; },
                      [](const Nat& k, std::uint64_t m, std::uint64_t n) {
                        auto x = decode_rational(k);
                        return x && x->sign() >= 0 && m == n;
                      }};
  Probe probe = [](const RealPoint& x) -> std::optional<RealPoint> {
    if (auto v = scalar_of(x)) {
      if (v->sign() < 0) return std::nullopt;
      return x;
    }
    if (const auto* s = std::get_if<SqrtOf>(&x); s && s->scale.sign() >= 0 && s->offset.sign() >= 0) {
      return x;
    }
    return std::nullopt;
  };
  return functional_system(Flavor::Metric, a, a, sch, std::move(spec), "abs-diagonal",
                           std::move(probe));
}

System builder_by_name(const std::string& name, const Schedule& sch) {
  if (name == "id") return id_system(sch);
  if (name == "add") return add_system(sch);
  if (name == "mul") return mul_system(sch);
  if (name == "sq") return sq_system(sch);
  if (name == "empty") return empty_system(sch);
  if (name == "halving") return halving_system(sch);
  if (name == "abs-diagonal") return abs_diagonal_system(sch);
  if (name.rfind("const:", 0) == 0) return const_system(Rat::parse(name.substr(6)), sch);
  if (name.rfind("affine:", 0) == 0) {
    std::string args = name.substr(7);
    auto comma = args.find(',');
    if (comma == std::string::npos) throw ParseError("affine builder needs 'affine:<a>,<b>'");
    return affine_system(Rat::parse(args.substr(0, comma)), Rat::parse(args.substr(comma + 1)), sch);
  }
  throw ParseError("unknown system '" + name +
                   "' (expected id, const:<c>, affine:<a>,<b>, add, mul, sq, empty, halving, "
                   "abs-diagonal, or a .jsonl file)");
}

bool operator==(const PointQuad& a, const PointQuad& b) {
  return a.x == b.x && a.m == b.m && a.y == b.y && a.n == b.n;
}

bool operator<(const PointQuad& a, const PointQuad& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.m != b.m) return a.m < b.m;
  if (a.y != b.y) return a.y < b.y;
  return a.n < b.n;
}

namespace {

class LiftImpl : public SystemImpl {
 public:
  LiftImpl(PointPredicate s0, SpacePtr source, SpacePtr target)
      : s0_(std::move(s0)), source_(std::move(source)), target_(std::move(target)) {}

  std::optional<Quad> stage(std::uint64_t s) const override {
    auto [k, m, l, n] = tuple_decode<4>(s);
    Quad q{Nat(static_cast<unsigned long>(k)), m, Nat(static_cast<unsigned long>(l)), n};
    if (admits(q, s)) return q;
    return std::nullopt;
  }

  std::vector<Nat> section(const Nat& k, std::uint64_t m, std::uint64_t n,
                           std::uint64_t budget) const override {
    std::vector<Nat> out;
    if (!source_->valid_index(k, budget)) return out;
    for (const Nat& l : target_->index_prefix(budget)) {
      if (admits(Quad{k, m, l, n}, budget)) out.push_back(l);
    }
    return out;
  }

 private:
  bool admits(const Quad& q, std::uint64_t stage) const {
    if (!source_->valid_index(q.k, stage) || !target_->valid_index(q.l, stage)) return false;
    auto x = source_->decode(q.k);
    auto y = target_->decode(q.l);
    if (!x || !y) return false;
    return s0_(PointQuad{*x, q.m, *y, q.n});
  }

  PointPredicate s0_;
  SpacePtr source_;
  SpacePtr target_;
};

bool same(const Space& space, const Nat& a, const Nat& b) {
  auto eq = space.same_point(a, b);
  if (!eq) throw UnsupportedOperation("point equality is not decidable in " + space.name());
  return *eq;
}

class SaturateImpl : public SystemImpl {
 public:
  explicit SaturateImpl(System inner) : inner_(std::move(inner)) {}

  // Stage <a, k, l>: inner stage a gives (k', m, l', n); emit (k, m, l, n)
  // when k, l name the same points as k', l'.
  std::optional<Quad> stage(std::uint64_t s) const override {
    auto [a, k, l] = tuple_decode<3>(s);
    auto q = inner_.stage(a);
    if (!q) return std::nullopt;
    Nat kk(static_cast<unsigned long>(k));
    Nat ll(static_cast<unsigned long>(l));
    if (!inner_.source()->valid_index(kk, s) || !inner_.target()->valid_index(ll, s)) {
      return std::nullopt;
    }
    if (!same(*inner_.source(), kk, q->k) || !same(*inner_.target(), ll, q->l)) return std::nullopt;
    return Quad{kk, q->m, ll, q->n};
  }

  std::vector<Nat> section(const Nat& k, std::uint64_t m, std::uint64_t n,
                           std::uint64_t budget) const override {
    const Space& src = *inner_.source();
    const Space& tgt = *inner_.target();
    std::vector<Nat> out;
    if (!src.valid_index(k, budget)) return out;
    std::vector<Nat> ks{k};
    for (const Nat& c : src.index_prefix(budget)) {
      if (c != k && same(src, c, k)) ks.push_back(c);
    }
    std::vector<Nat> ls = tgt.index_prefix(budget);
    std::set<Nat> seen;
    for (const Nat& kp : ks) {
      for (const Nat& lp : inner_.section(kp, m, n, budget)) {
        if (seen.insert(lp).second) out.push_back(lp);
        for (const Nat& l : ls) {
          if (!seen.count(l) && same(tgt, l, lp)) {
            seen.insert(l);
            out.push_back(l);
          }
        }
      }
    }
    return out;
  }

 private:
  System inner_;
};

}  // namespace

System lift_point_system(PointPredicate s0, SpacePtr source, SpacePtr target, const Schedule& sch,
                         std::string label) {
  auto impl = std::make_shared<LiftImpl>(std::move(s0), source, target);
  return System(Flavor::Metric, std::move(source), std::move(target), sch, std::move(impl),
                std::move(label));
}

std::vector<SaturationWitness> is_saturated(const System& s, const SaturationBounds& bounds) {
  const Space& src = *s.source();
  const Space& tgt = *s.target();
  std::vector<Nat> ks = src.index_prefix(bounds.index_bound);
  std::vector<Nat> ls = tgt.index_prefix(bounds.index_bound);
  std::vector<SaturationWitness> out;
  for (const Quad& q : s.quads().prefix(bounds.stages)) {
    for (const Nat& kb : ks) {
      if (!same(src, kb, q.k)) continue;
      for (const Nat& lb : ls) {
        if (!same(tgt, lb, q.l)) continue;
        Quad candidate{kb, q.m, lb, q.n};
        if (!s.contains(candidate, bounds.section_budget)) out.push_back({q, candidate});
      }
    }
  }
  return out;
}

System saturate(const System& s) {
  // Probe decidability up front so the error surfaces at construction.
  for (const Space* space : {s.source().get(), s.target().get()}) {
    auto idx = space->index_prefix(64);
    if (!idx.empty()) same(*space, idx.front(), idx.front());
  }
  auto impl = std::make_shared<SaturateImpl>(s);
  return System(s.flavor(), s.source(), s.target(), s.schedule(), std::move(impl),
                "saturate(" + s.label() + ")", s.probe());
}

std::vector<PointQuad> project_system(const System& s, const SaturationBounds& bounds) {
  auto witnesses = is_saturated(s, bounds);
  if (!witnesses.empty()) {
    const auto& w = witnesses.front();
    throw SaturationError("system '" + s.label() + "' is not saturated: " + describe(w.present) +
                              " is enumerated but " + describe(w.missing) + " is not",
                          std::move(witnesses));
  }
  std::set<PointQuad> seen;
  std::vector<PointQuad> out;
  for (const Quad& q : s.quads().prefix(bounds.stages)) {
    auto x = s.source()->decode(q.k);
    auto y = s.target()->decode(q.l);
    if (!x || !y) continue;
    PointQuad pq{*x, q.m, *y, q.n};
    if (seen.insert(pq).second) out.push_back(pq);
  }
  return out;
}

}  // namespace apx
