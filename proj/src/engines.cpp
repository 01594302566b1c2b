#include "apx/engines.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <tuple>

#include "apx/errors.hpp"
#include "apx/tupling.hpp"

namespace apx {

namespace {

Nat nat(std::uint64_t x) { return Nat(static_cast<unsigned long>(x)); }

}  // namespace

REnum<Nat> enum_apply(const REnum<IndexPair>& r, const REnum<Nat>& m) {
  return REnum<Nat>([r, m](std::uint64_t t) -> std::optional<Nat> {
    auto [a, b] = cantor_unpair(t);
    auto ij = r.stage(a);
    if (!ij) return std::nullopt;
    auto i = m.stage(b);
    if (!i || *i != ij->first) return std::nullopt;
    return ij->second;
  });
}

REnum<Nat> apply_operator(const EnumOperatorSet& w, const REnum<Nat>& m) {
  return REnum<Nat>([w, m](std::uint64_t t) -> std::optional<Nat> {
    auto [a, b] = cantor_unpair(t);
    auto dj = w.stage(a);
    if (!dj) return std::nullopt;
    for (const Nat& d : dj->first) {
      if (!m.member_by_stage(d, b)) return std::nullopt;
    }
    return dj->second;
  });
}

EnumOperatorSet operator_from_pairs(const REnum<IndexPair>& r) {
  return map_renum(r, [](const IndexPair& ij) { return OperatorPair{{ij.first}, ij.second}; });
}

REnum<IndexPair> pair_coded(const System& s) {
  return map_renum(s.quads(), [](const Quad& q) {
    return IndexPair{cantor_pair(q.k, nat(q.m)), cantor_pair(q.l, nat(q.n))};
  });
}

SetName apply_topological(const System& s, const SetName& u, std::uint64_t step_cap) {
  REnum<Nat> source([s, u](std::uint64_t t) -> std::optional<Nat> {
    auto [b, n, j, budget] = tuple_decode<4>(t);
    auto [k, m] = cantor_unpair(u.at(b));
    if (!m.fits_ulong_p()) return std::nullopt;
    auto ls = s.section(k, m.get_ui(), n, budget);
    if (j >= ls.size()) return std::nullopt;
    return cantor_pair(ls[j], nat(n));
  });
  std::optional<RealPoint> witness;
  if (u.witness() && s.probe()) witness = s.probe()(*u.witness());
  return SetName(std::move(source), step_cap, witness);
}

REnum<Nat> apply_topological_literal(const System& s, const SetName& u) {
  return enum_apply(pair_coded(s), u.source());
}

REnum<std::vector<Nat>> hk_closure(const REnum<std::vector<Nat>>& h) {
  return REnum<std::vector<Nat>>([h](std::uint64_t t) -> std::optional<std::vector<Nat>> {
    if (t == 0) return std::nullopt;
    std::vector<std::uint64_t> chain;
    try {
      chain = sequence_decode(t);
    } catch (const Error&) {
      return std::nullopt;
    }
    auto first = h.stage(chain[0]);
    if (!first || first->size() != 3) return std::nullopt;
    std::vector<Nat> prefix{(*first)[0], (*first)[1]};
    Nat last = (*first)[2];
    for (std::size_t r = 1; r < chain.size(); ++r) {
      auto link = h.stage(chain[r]);
      if (!link || link->size() != 3 || (*link)[0] != last) return std::nullopt;
      prefix.push_back((*link)[1]);
      last = (*link)[2];
    }
    prefix.push_back(last);
    return prefix;
  });
}

REnum<Nat> initial_indices(const REnum<std::vector<Nat>>& h) {
  return REnum<Nat>([h](std::uint64_t s) -> std::optional<Nat> {
    auto t = h.stage(s);
    if (!t || t->size() != 3 || (*t)[0] != (*t)[1]) return std::nullopt;
    return (*t)[2];
  });
}

std::vector<IndexPair> build_R_approximation(const EnumOperatorSet& w,
                                             const REnum<std::vector<Nat>>& h, std::uint64_t b) {
  std::vector<std::vector<Nat>> hs;
  for (auto& t : h.prefix(b)) {
    if (t.size() == 3) hs.push_back(std::move(t));
  }
  std::vector<OperatorPair> ws = w.prefix(b);

  auto outputs = [&](const std::vector<Nat>& d) {
    std::vector<Nat> js;
    for (const auto& [dd, j] : ws) {
      if (std::includes(d.begin(), d.end(), dd.begin(), dd.end())) js.push_back(j);
    }
    return js;
  };

  std::set<IndexPair> r;
  std::vector<Nat> free_outputs = outputs({});
  for (const auto& t : hs) {
    if (t[0] != t[1]) continue;
    for (const Nat& j : free_outputs) r.emplace(t[2], j);
  }

  // A chain (i_1, ..., i_k, i) only matters through the set {i_1, ..., i_k}
  // (for F) and its last index i (for extension), so explore those states.
  using State = std::pair<std::vector<Nat>, Nat>;
  std::set<State> seen;
  std::deque<State> queue;
  auto push = [&](std::vector<Nat> d, Nat last) {
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    State st{std::move(d), std::move(last)};
    if (seen.insert(st).second) queue.push_back(std::move(st));
  };
  for (const auto& t : hs) push({t[0], t[1]}, t[2]);
  while (!queue.empty()) {
    State st = std::move(queue.front());
    queue.pop_front();
    for (const Nat& j : outputs(st.first)) r.emplace(st.second, j);
    for (const auto& t : hs) {
      if (t[0] != st.second) continue;
      std::vector<Nat> d = st.first;
      d.push_back(t[1]);
      push(std::move(d), t[2]);
    }
  }
  return {r.begin(), r.end()};
}

REnum<IndexPair> build_R(const EnumOperatorSet& w, const REnum<std::vector<Nat>>& h) {
  return from_approximations<IndexPair>(
      [w, h](std::uint64_t b) { return build_R_approximation(w, h, b); });
}

AlphaName evaluate_metric(const System& s, const AlphaName& input, std::uint64_t step_cap) {
  AlphaName u = input.schedule().name() == s.schedule().name() ? input : reschedule(input, s.schedule());
  std::optional<RealPoint> witness;
  if (u.witness() && s.probe()) witness = s.probe()(*u.witness());
  return AlphaName(
      s.target(), s.schedule(),
      [s, u, step_cap](std::uint64_t n) {
        for (std::uint64_t t = 0; t < step_cap; ++t) {
          auto [m, j, budget] = tuple_decode<3>(t);
          auto ls = s.section(u.at(m), m, n, budget);
          if (j < ls.size()) return ls[j];
        }
        throw StepCapExceeded("evaluation of '" + s.label() + "' found no output for n=" + std::to_string(n),
                              step_cap);
      },
      witness);
}

namespace {

using SectionKey = std::tuple<Nat, std::uint64_t, std::uint64_t, std::uint64_t>;

class SectionCache {
 public:
  template <class F>
  std::vector<Nat> get(const SectionKey& key, F compute) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    std::vector<Nat> value = compute();
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.try_emplace(key, std::move(value)).first->second;
  }

 private:
  mutable std::mutex mu_;
  mutable std::map<SectionKey, std::vector<Nat>> cache_;
};

std::vector<Nat> pool_with(const Nat& first, const Space& space, std::uint64_t budget) {
  std::vector<Nat> pool{first};
  for (Nat& l : space.index_prefix(budget)) {
    if (l != first) pool.push_back(std::move(l));
  }
  return pool;
}

class MetricToTopImpl : public SystemImpl {
 public:
  explicit MetricToTopImpl(System inner) : inner_(std::move(inner)) {}

  std::optional<Quad> stage(std::uint64_t t) const override {
    auto [a, lp, np, s] = tuple_decode<4>(t);
    auto q = inner_.stage(a);
    if (!q) return std::nullopt;
    const Space& tgt = *inner_.target();
    Nat l2 = nat(lp);
    if (!tgt.valid_index(l2, s) || !tgt.valid_index(q->l, s)) return std::nullopt;
    if (formally_included(tgt, inner_.schedule(), {q->l, q->n}, {l2, np}, s) != Verdict::Confirmed) {
      return std::nullopt;
    }
    return Quad{q->k, q->m, l2, np};
  }

  std::vector<Nat> section(const Nat& k, std::uint64_t m, std::uint64_t n2,
                           std::uint64_t budget) const override {
    return cache_.get({k, m, n2, budget}, [&] { return compute(k, m, n2, budget); });
  }

 private:
  std::vector<Nat> compute(const Nat& k, std::uint64_t m, std::uint64_t n2, std::uint64_t budget) const {
    const Space& tgt = *inner_.target();
    const Schedule& sch = inner_.schedule();
    std::vector<Nat> prefix = tgt.index_prefix(budget);
    std::vector<Nat> out;
    std::set<Nat> seen;
    for (std::uint64_t n = 0; n <= budget; ++n) {
      if (sch.r(n2) <= sch.r(n)) continue;  // no margin: <_e is false
      for (const Nat& l : inner_.section(k, m, n, budget)) {
        if (!tgt.valid_index(l, budget)) continue;
        auto consider = [&](const Nat& l2) {
          if (seen.count(l2) || !tgt.valid_index(l2, budget)) return;
          if (formally_included(tgt, sch, {l, n}, {l2, n2}, budget) == Verdict::Confirmed) {
            seen.insert(l2);
            out.push_back(l2);
          }
        };
        consider(l);
        for (const Nat& l2 : prefix) consider(l2);
      }
    }
    return out;
  }

  System inner_;
  SectionCache cache_;
};

class TopToMetricImpl : public SystemImpl {
 public:
  explicit TopToMetricImpl(System inner) : inner_(std::move(inner)) {}

  std::optional<Quad> stage(std::uint64_t t) const override {
    auto [a, kp, mp, s] = tuple_decode<4>(t);
    auto q = inner_.stage(a);
    if (!q) return std::nullopt;
    const Space& src = *inner_.source();
    Nat k2 = nat(kp);
    if (!src.valid_index(k2, s) || !src.valid_index(q->k, s)) return std::nullopt;
    if (formally_included(src, inner_.schedule(), {k2, mp}, {q->k, q->m}, s) != Verdict::Confirmed) {
      return std::nullopt;
    }
    return Quad{k2, mp, q->l, q->n};
  }

  std::vector<Nat> section(const Nat& k2, std::uint64_t m2, std::uint64_t n,
                           std::uint64_t budget) const override {
    return cache_.get({k2, m2, n, budget}, [&] { return compute(k2, m2, n, budget); });
  }

 private:
  std::vector<Nat> compute(const Nat& k2, std::uint64_t m2, std::uint64_t n, std::uint64_t budget) const {
    const Space& src = *inner_.source();
    const Schedule& sch = inner_.schedule();
    std::vector<Nat> out;
    if (!src.valid_index(k2, budget)) return out;
    std::set<Nat> seen;
    for (const Nat& k : pool_with(k2, src, budget)) {
      for (std::uint64_t m = 0; m <= budget; ++m) {
        if (sch.r(m) <= sch.r(m2)) continue;  // no margin: <_d is false
        if (formally_included(src, sch, {k2, m2}, {k, m}, budget) != Verdict::Confirmed) continue;
        for (const Nat& l : inner_.section(k, m, n, budget)) {
          if (seen.insert(l).second) out.push_back(l);
        }
      }
    }
    return out;
  }

  System inner_;
  SectionCache cache_;
};

}  // namespace

System metric_to_topological(const System& s) {
  if (s.flavor() != Flavor::Metric) throw Error("metric_to_topological expects a metric system");
  return System(Flavor::Topological, s.source(), s.target(), s.schedule(),
                std::make_shared<MetricToTopImpl>(s), "m2t(" + s.label() + ")", s.probe());
}

System topological_to_metric(const System& s) {
  if (s.flavor() != Flavor::Topological) throw Error("topological_to_metric expects a topological system");
  return System(Flavor::Metric, s.source(), s.target(), s.schedule(),
                std::make_shared<TopToMetricImpl>(s), "t2m(" + s.label() + ")", s.probe());
}

bool operator==(const MeetTuple& a, const MeetTuple& b) {
  return a.k1 == b.k1 && a.m1 == b.m1 && a.k2 == b.k2 && a.m2 == b.m2 && a.k == b.k && a.m == b.m;
}

bool operator<(const MeetTuple& a, const MeetTuple& b) {
  return std::tie(a.k1, a.m1, a.k2, a.m2, a.k, a.m) < std::tie(b.k1, b.m1, b.k2, b.m2, b.k, b.m);
}

bool in_intersection_H(const Space& space, const Schedule& sch, const MeetTuple& t, std::uint64_t stage) {
  for (const Nat* k : {&t.k1, &t.k2, &t.k}) {
    if (!space.valid_index(*k, stage)) return false;
  }
  return formally_included(space, sch, {t.k, t.m}, {t.k1, t.m1}, stage) == Verdict::Confirmed &&
         formally_included(space, sch, {t.k, t.m}, {t.k2, t.m2}, stage) == Verdict::Confirmed;
}

REnum<MeetTuple> intersection_H(SpacePtr space, const Schedule& sch) {
  return REnum<MeetTuple>([space, sch](std::uint64_t t) -> std::optional<MeetTuple> {
    auto [k1, m1, k2, m2, k, m, s] = tuple_decode<7>(t);
    MeetTuple mt{nat(k1), m1, nat(k2), m2, nat(k), m};
    if (in_intersection_H(*space, sch, mt, s)) return mt;
    return std::nullopt;
  });
}

std::vector<BallIndex> intersection_section(const Space& space, const Schedule& sch, const BallIndex& a,
                                            const BallIndex& b, std::uint64_t budget) {
  std::vector<BallIndex> out;
  for (const Nat& k : space.index_prefix(budget)) {
    for (std::uint64_t m = 0; m <= budget; ++m) {
      if (in_intersection_H(space, sch, {a.k, a.m, b.k, b.m, k, m}, budget)) out.push_back({k, m});
    }
  }
  return out;
}

}  // namespace apx
