#include "apx/names.hpp"

#include <map>
#include <mutex>
#include <vector>

#include "apx/errors.hpp"
#include "apx/tupling.hpp"

namespace apx {

struct AlphaName::Memo {
  Fn fn;
  std::mutex mu;
  std::map<std::uint64_t, Nat> values;
};

AlphaName::AlphaName(SpacePtr space, Schedule schedule, Fn fn, std::optional<RealPoint> witness)
    : space_(std::move(space)),
      schedule_(std::move(schedule)),
      memo_(std::make_shared<Memo>()),
      witness_(std::move(witness)) {
  memo_->fn = std::move(fn);
}

Nat AlphaName::at(std::uint64_t t) const {
  {
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->values.find(t);
    if (it != memo_->values.end()) return it->second;
  }
  // Computed outside the lock: the function may force other names.
  Nat value = memo_->fn(t);
  std::lock_guard<std::mutex> lock(memo_->mu);
  return memo_->values.try_emplace(t, std::move(value)).first->second;
}

std::optional<std::uint64_t> AlphaName::contract_violation(std::uint64_t upto) const {
  if (!witness_) throw Error("name has no witness point to check against");
  for (std::uint64_t t = 0; t <= upto; ++t) {
    if (!space_->ball_contains(at(t), schedule_.r(t), *witness_)) return t;
  }
  return std::nullopt;
}

AlphaName constant_name(SpacePtr space, const Schedule& sch, const Point& point) {
  auto code = space->encode(point);
  if (!code) throw Error("point " + describe(point) + " is not encodable in " + space->name());
  Nat k = *code;
  return AlphaName(std::move(space), sch, [k](std::uint64_t) { return k; }, RealPoint{point});
}

std::pair<Rat, Rat> sqrt_bracket(const Rat& c, const Schedule& sch, std::uint64_t t) {
  if (c.sign() < 0) throw Error("sqrt of negative rational " + c.str());
  Rat lo = 0;
  Rat hi = max(Rat(1), c);
  Rat r = sch.r(t);
  while (!(hi - lo < r)) {
    Rat mid = (lo + hi) / 2;
    Rat sq = mid * mid;
    if (sq == c) return {mid, mid};
    if (sq < c) lo = mid;
    else hi = mid;
  }
  return {lo, hi};
}

AlphaName sqrt_name(const Rat& c, const Schedule& sch) {
  if (c.sign() < 0) throw Error("sqrt of negative rational " + c.str());
  SpacePtr space = RationalSpace::scalar();
  return AlphaName(
      space, sch,
      [c, sch](std::uint64_t t) {
        auto [lo, hi] = sqrt_bracket(c, sch, t);
        return encode_rational((lo + hi) / 2);
      },
      RealPoint{SqrtOf{c}});
}

AlphaName reschedule(const AlphaName& u, const Schedule& target) {
  Schedule source = u.schedule();
  return AlphaName(
      u.space(), target,
      [u, source, target](std::uint64_t t) { return u.at(source.find_m_below(target.r(t))); },
      u.witness());
}

AlphaName product_name(const AlphaName& x, const AlphaName& y, SpacePtr plane) {
  if (x.schedule().name() != y.schedule().name()) {
    throw Error("product_name needs both names under the same schedule");
  }
  std::optional<RealPoint> witness;
  if (x.witness() && y.witness()) {
    const auto* px = std::get_if<Point>(&*x.witness());
    const auto* py = std::get_if<Point>(&*y.witness());
    if (px && py) witness = RealPoint{Point{(*px)[0], (*py)[0]}};
  }
  return AlphaName(
      std::move(plane), x.schedule(),
      [x, y](std::uint64_t t) {
        std::vector<Nat> parts{x.at(t), y.at(t)};
        return tuple_encode(parts);
      },
      witness);
}

struct SetName::Memo {
  std::mutex mu;
  std::vector<Nat> found;
  std::uint64_t next_stage = 0;
};

SetName::SetName(REnum<Nat> source, std::uint64_t step_cap, std::optional<RealPoint> witness)
    : source_(std::move(source)),
      step_cap_(step_cap),
      memo_(std::make_shared<Memo>()),
      witness_(std::move(witness)) {}

Nat SetName::at(std::uint64_t i) const {
  std::lock_guard<std::mutex> lock(memo_->mu);
  while (memo_->found.size() <= i) {
    if (memo_->next_stage >= step_cap_) {
      throw StepCapExceeded("set name element " + std::to_string(i) + " not reached", step_cap_);
    }
    auto x = source_.stage(memo_->next_stage++);
    if (x) memo_->found.push_back(std::move(*x));
  }
  return memo_->found[i];
}

SetName canonical_set_name(SpacePtr space, const Schedule& sch, const RealPoint& x,
                           std::uint64_t step_cap) {
  REnum<Nat> source([space, sch, x](std::uint64_t j) -> std::optional<Nat> {
    Nat code(static_cast<unsigned long>(j));
    auto [k, m] = cantor_unpair(code);
    if (!m.fits_ulong_p() || !space->valid_index(k, j)) return std::nullopt;
    if (space->ball_contains(k, sch.r(m.get_ui()), x)) return code;
    return std::nullopt;
  });
  return SetName(std::move(source), step_cap, x);
}

AlphaName gamma_U_alpha(const SetName& u, SpacePtr space, const Schedule& sch,
                        std::uint64_t step_cap) {
  return AlphaName(
      std::move(space), sch,
      [u, step_cap](std::uint64_t m) {
        Nat target(static_cast<unsigned long>(m));
        for (std::uint64_t i = 0; i < step_cap; ++i) {
          auto [k, mm] = cantor_unpair(u.at(i));
          if (mm == target) return k;
        }
        throw StepCapExceeded("no element with radius index " + std::to_string(m) +
                                  " in the set name",
                              step_cap);
      },
      u.witness());
}

REnum<Nat> gamma_beta_V_source(const AlphaName& v) {
  return REnum<Nat>([v](std::uint64_t t) -> std::optional<Nat> {
    auto [n, l, nn, s] = tuple_decode<4>(t);
    const Space& space = *v.space();
    Nat lp(static_cast<unsigned long>(l));
    if (!space.valid_index(lp, s)) return std::nullopt;
    Nat center = v.at(n);
    if (!space.valid_index(center, s)) return std::nullopt;
    if (formally_included(space, v.schedule(), {center, n}, {lp, nn}, s) != Verdict::Confirmed) {
      return std::nullopt;
    }
    return cantor_pair(lp, Nat(static_cast<unsigned long>(nn)));
  });
}

SetName gamma_beta_V(const AlphaName& v, std::uint64_t step_cap) {
  return SetName(gamma_beta_V_source(v), step_cap, v.witness());
}

}  // namespace apx
