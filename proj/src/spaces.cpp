#include "apx/spaces.hpp"

#include "apx/errors.hpp"
#include "apx/tupling.hpp"

namespace apx {

std::string describe(const Point& p) {
  if (p.size() == 1) return p[0].str();
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += p[i].str();
  }
  return out + ")";
}

std::string describe(const RealPoint& x) {
  if (const auto* p = std::get_if<Point>(&x)) return describe(*p);
  const auto& s = std::get<SqrtOf>(x);
  std::string out = "sqrt(" + s.c.str() + ")";
  if (s.scale != 1) out = s.scale.str() + "*" + out;
  if (!s.offset.is_zero()) out += (s.offset.sign() > 0 ? "+" : "") + s.offset.str();
  return out;
}

nlohmann::json Space::index_to_json(const Nat& l) const { return to_string(l); }

Nat Space::index_from_json(const nlohmann::json& j) const {
  if (j.is_number_unsigned()) return Nat(static_cast<unsigned long>(j.get<std::uint64_t>()));
  if (j.is_string()) return parse_nat(j.get<std::string>());
  throw ParseError("index must be a natural number");
}

REnum<Nat> Space::index_set() const {
  // The space outlives its enumerators by contract (spaces are held by shared_ptr
  // in every system and name), so capturing `this` is safe.
  return REnum<Nat>([this](std::uint64_t s) -> std::optional<Nat> {
    Nat l(static_cast<unsigned long>(s));
    if (valid_index(l, s)) return l;
    return std::nullopt;
  });
}

std::vector<Nat> Space::index_prefix(std::uint64_t b) const {
  std::vector<Nat> out;
  for (std::uint64_t s = 0; s < b; ++s) {
    Nat l(static_cast<unsigned long>(s));
    if (valid_index(l, b)) out.push_back(l);
  }
  return out;
}

bool Space::ball_contains(const Nat& center, const Rat& r, const RealPoint& x) const {
  auto c = decode(center);
  if (!c) return false;
  return point_dist_lt(*c, x, r);
}

namespace {

Nat zigzag(const Nat& p) { return p >= 0 ? Nat(2 * p) : Nat(-2 * p - 1); }

Nat unzigzag(const Nat& z) {
  if (z % 2 == 0) return z / 2;
  return -(z + 1) / 2;
}

Nat gcd(const Nat& a, const Nat& b) {
  Nat g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// |a - sqrt(c)| < bound, exactly.
bool near_sqrt(const Rat& a, const Rat& c, const Rat& bound) {
  if (bound.sign() <= 0) return false;
  Rat hi = a + bound;
  if (hi.sign() <= 0 || !(hi * hi > c)) return false;
  Rat lo = a - bound;
  return lo.sign() < 0 || lo * lo < c;
}

}  // namespace

Nat encode_rational(const Rat& x) { return cantor_pair(zigzag(x.num()), x.den() - 1); }

std::optional<Rat> decode_rational(const Nat& code) {
  if (code < 0) return std::nullopt;
  auto [z, qm1] = cantor_unpair(code);
  Nat p = unzigzag(z);
  Nat q = qm1 + 1;
  Nat ap = abs(p);
  if (gcd(ap, q) != 1) return std::nullopt;
  return Rat(p, q);
}

RationalSpace::RationalSpace(std::size_t dim, Metric metric, Coding coding)
    : dim_(dim), metric_(metric), coding_(coding) {
  if (dim == 0) throw Error("space dimension must be positive");
  if (coding != Coding::Vector && dim != 1) throw Error("only the vector coding supports dimension > 1");
}

SpacePtr RationalSpace::scalar() {
  return std::make_shared<RationalSpace>(1, Metric::Max, Coding::Vector);
}
SpacePtr RationalSpace::plane(Metric metric) {
  return std::make_shared<RationalSpace>(2, metric, Coding::Vector);
}
SpacePtr RationalSpace::halving() {
  return std::make_shared<RationalSpace>(1, Metric::Max, Coding::Halving);
}
SpacePtr RationalSpace::abs_line() {
  return std::make_shared<RationalSpace>(1, Metric::Max, Coding::Abs);
}
SpacePtr RationalSpace::naturals() {
  return std::make_shared<RationalSpace>(1, Metric::Max, Coding::Nat);
}

namespace {

const char* coding_name(RationalSpace::Coding c) {
  switch (c) {
    case RationalSpace::Coding::Vector: return "vector";
    case RationalSpace::Coding::Halving: return "halving";
    case RationalSpace::Coding::Abs: return "abs";
    case RationalSpace::Coding::Nat: return "nat";
  }
  return "?";
}

}  // namespace

std::string RationalSpace::name() const {
  switch (coding_) {
    case Coding::Vector: {
      std::string base = dim_ == 1 ? "Q" : "Q^" + std::to_string(dim_);
      if (dim_ == 1) return base;
      return base + (metric_ == Metric::Max ? " (max)" : " (euclidean)");
    }
    case Coding::Halving: return "R>=0 via p/(q+1)";
    case Coding::Abs: return "R>=0 via |k|";
    case Coding::Nat: return "N";
  }
  return "?";
}

nlohmann::json RationalSpace::descriptor() const {
  return {{"kind", "rational"},
          {"dim", dim_},
          {"metric", metric_ == Metric::Max ? "max" : "euclidean"},
          {"coding", coding_name(coding_)}};
}

bool RationalSpace::valid_index(const Nat& l, std::uint64_t) const {
  if (l < 0) return false;
  switch (coding_) {
    case Coding::Vector:
      if (dim_ == 1) return decode_rational(l).has_value();
      for (const Nat& c : tuple_decode(l, dim_)) {
        if (!decode_rational(c)) return false;
      }
      return true;
    case Coding::Abs:
      return decode_rational(l).has_value();
    case Coding::Halving:
    case Coding::Nat:
      return true;
  }
  return false;
}

std::optional<Point> RationalSpace::decode(const Nat& l) const {
  if (l < 0) return std::nullopt;
  switch (coding_) {
    case Coding::Vector: {
      Point p;
      std::vector<Nat> parts = dim_ == 1 ? std::vector<Nat>{l} : tuple_decode(l, dim_);
      for (const Nat& c : parts) {
        auto x = decode_rational(c);
        if (!x) return std::nullopt;
        p.push_back(*x);
      }
      return p;
    }
    case Coding::Abs: {
      auto x = decode_rational(l);
      if (!x) return std::nullopt;
      return Point{abs(*x)};
    }
    case Coding::Halving: {
      auto [p, q] = cantor_unpair(l);
      return Point{Rat(p, q + 1)};
    }
    case Coding::Nat:
      return Point{Rat(l)};
  }
  return std::nullopt;
}

std::optional<Nat> RationalSpace::encode(const Point& p) const {
  if (p.size() != dim_) return std::nullopt;
  switch (coding_) {
    case Coding::Vector: {
      if (dim_ == 1) return encode_rational(p[0]);
      std::vector<Nat> parts;
      for (const Rat& x : p) parts.push_back(encode_rational(x));
      return tuple_encode(parts);
    }
    case Coding::Abs:
      if (p[0].sign() < 0) return std::nullopt;
      return encode_rational(p[0]);
    case Coding::Halving:
      if (p[0].sign() < 0) return std::nullopt;
      return cantor_pair(p[0].num(), p[0].den() - 1);
    case Coding::Nat:
      if (p[0].sign() < 0 || !p[0].is_integer()) return std::nullopt;
      return p[0].num();
  }
  return std::nullopt;
}

bool RationalSpace::rational_dist_lt(const Point& a, const Point& b, const Rat& bound) const {
  if (a.size() != dim_ || b.size() != dim_) throw Error("point dimension mismatch");
  if (bound.sign() <= 0) return false;
  if (metric_ == Metric::Max || dim_ == 1) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!(abs(a[i] - b[i]) < bound)) return false;
    }
    return true;
  }
  Rat sum = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    Rat d = a[i] - b[i];
    sum += d * d;
  }
  return sum < bound * bound;
}

bool RationalSpace::point_dist_lt(const Point& p, const RealPoint& x, const Rat& bound) const {
  if (const auto* q = std::get_if<Point>(&x)) return rational_dist_lt(p, *q, bound);
  if (dim_ != 1) throw Error("square-root points are scalar");
  const auto& s = std::get<SqrtOf>(x);
  // |p - (a*sqrt(c) + b)| = |±(p - b) - |a|*sqrt(c)| and |a|*sqrt(c) = sqrt(a^2 c).
  Rat shifted = p[0] - s.offset;
  if (s.scale.sign() < 0) shifted = -shifted;
  return near_sqrt(shifted, s.scale * s.scale * s.c, bound);
}

Verdict RationalSpace::dist_lt(const Nat& a, const Nat& b, const Rat& bound, std::uint64_t) const {
  auto pa = decode(a);
  if (!pa) throw InvalidIndex("index " + to_string(a) + " is not in the domain of " + name());
  auto pb = decode(b);
  if (!pb) throw InvalidIndex("index " + to_string(b) + " is not in the domain of " + name());
  return rational_dist_lt(*pa, *pb, bound) ? Verdict::Confirmed : Verdict::Unknown;
}

std::optional<bool> RationalSpace::same_point(const Nat& a, const Nat& b) const {
  auto pa = decode(a);
  auto pb = decode(b);
  if (!pa || !pb) return std::nullopt;
  return *pa == *pb;
}

nlohmann::json RationalSpace::index_to_json(const Nat& l) const {
  switch (coding_) {
    case Coding::Vector: {
      auto p = decode(l);
      if (!p) throw InvalidIndex("index " + to_string(l) + " is not in the domain of " + name());
      nlohmann::json arr = nlohmann::json::array();
      for (const Rat& x : *p) arr.push_back(x.str());
      return arr;
    }
    case Coding::Abs: {
      auto x = decode_rational(l);
      if (!x) throw InvalidIndex("index " + to_string(l) + " is not in the domain of " + name());
      return x->str();
    }
    case Coding::Halving:
    case Coding::Nat:
      if (l.fits_ulong_p()) return l.get_ui();
      return to_string(l);
  }
  return nullptr;
}

Nat RationalSpace::index_from_json(const nlohmann::json& j) const {
  switch (coding_) {
    case Coding::Vector: {
      if (!j.is_array() || j.size() != dim_) {
        throw ParseError("expected an array of " + std::to_string(dim_) + " rational strings");
      }
      Point p;
      for (const auto& x : j) {
        if (!x.is_string()) throw ParseError("vector components must be rational strings");
        p.push_back(Rat::parse(x.get<std::string>()));
      }
      return *encode(p);
    }
    case Coding::Abs:
      if (!j.is_string()) throw ParseError("expected a rational string");
      return encode_rational(Rat::parse(j.get<std::string>()));
    case Coding::Halving:
    case Coding::Nat:
      return Space::index_from_json(j);
  }
  throw ParseError("unsupported coding");
}

SpacePtr space_from_descriptor(const nlohmann::json& d) {
  if (!d.is_object() || d.value("kind", "") != "rational") {
    throw ParseError("unsupported space descriptor: " + d.dump());
  }
  auto dim = d.value("dim", 1u);
  std::string metric = d.value("metric", "max");
  std::string coding = d.value("coding", "vector");
  RationalSpace::Metric mk;
  if (metric == "max") mk = RationalSpace::Metric::Max;
  else if (metric == "euclidean") mk = RationalSpace::Metric::Euclidean;
  else throw ParseError("unknown metric '" + metric + "'");
  RationalSpace::Coding ck;
  if (coding == "vector") ck = RationalSpace::Coding::Vector;
  else if (coding == "halving") ck = RationalSpace::Coding::Halving;
  else if (coding == "abs") ck = RationalSpace::Coding::Abs;
  else if (coding == "nat") ck = RationalSpace::Coding::Nat;
  else throw ParseError("unknown coding '" + coding + "'");
  return std::make_shared<RationalSpace>(dim, mk, ck);
}

Verdict formally_included(const Space& space, const Schedule& sch, const BallIndex& inner,
                          const BallIndex& outer, std::uint64_t stage) {
  Rat margin = sch.r(outer.m) - sch.r(inner.m);
  if (margin.sign() <= 0) return Verdict::Unknown;
  return space.dist_lt(outer.k, inner.k, margin, stage);
}

}  // namespace apx
