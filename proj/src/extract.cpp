#include <set>

#include "apx/engines.hpp"
#include "apx/errors.hpp"
#include "apx/tupling.hpp"

namespace apx {

RecursiveOperator identity_operator() {
  return {"identity", [](const std::vector<Nat>& u, std::uint64_t p, std::uint64_t) -> std::optional<Nat> {
            if (p < u.size()) return u[p];
            return std::nullopt;
          }};
}

RecursiveOperator constant_operator(const Nat& code) {
  return {"constant:" + to_string(code),
          [code](const std::vector<Nat>&, std::uint64_t, std::uint64_t) -> std::optional<Nat> { return code; }};
}

namespace {

class ExtractImpl : public SystemImpl {
 public:
  ExtractImpl(RecursiveOperator f, SpacePtr source, SpacePtr target, Schedule sch, ExtractBounds bounds)
      : f_(std::move(f)),
        src_(std::move(source)),
        tgt_(std::move(target)),
        sch_(std::move(sch)),
        bounds_(bounds) {}

  std::optional<Quad> stage(std::uint64_t t) const override { return literal_stage(Nat(static_cast<unsigned long>(t))); }

  // Stage numbers of all but the smallest quadruples exceed 64 bits, so
  // decoding works over Nat.
  std::optional<Quad> literal_stage(const Nat& t) const {
    std::vector<Nat> parts = tuple_decode(t, 8);
    const Nat &k = parts[0], &l = parts[2], &code = parts[6];
    for (std::size_t i : {1, 3, 4, 5, 7}) {
      if (!parts[i].fits_ulong_p()) return std::nullopt;
    }
    std::uint64_t m = parts[1].get_ui(), n = parts[3].get_ui(), s = parts[4].get_ui(), p = parts[5].get_ui(),
                  c = parts[7].get_ui();
    std::vector<Nat> u;
    try {
      u = sequence_decode(code);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (u.size() != s + 1) return std::nullopt;
    Quad q{k, m, l, n};
    if (!src_->valid_index(q.k, c) || !tgt_->valid_index(q.l, c)) return std::nullopt;
    if (!radius_conditions(m, n, s, p)) return std::nullopt;
    for (std::uint64_t i = 0; i <= s; ++i) {
      if (!close_to_center(u[i], q.k, i, c)) return std::nullopt;
    }
    auto o = f_.apply(u, p, c);
    if (!o || !tgt_->valid_index(*o, c)) return std::nullopt;
    if (tgt_->dist_lt(*o, q.l, sch_.r(n) / 2, c) != Verdict::Confirmed) return std::nullopt;
    return q;
  }

  std::vector<Nat> section(const Nat& k, std::uint64_t m, std::uint64_t n,
                           std::uint64_t budget) const override {
    std::vector<Nat> out;
    if (!src_->valid_index(k, budget)) return out;
    std::vector<Nat> pool{k};
    for (Nat& c : src_->index_prefix(budget)) {
      if (c != k) pool.push_back(std::move(c));
    }
    std::vector<Nat> targets = tgt_->index_prefix(budget);
    std::set<Nat> seen;
    std::uint64_t examined = 0;
    for (std::uint64_t s = 0; s <= budget; ++s) {
      if (sch_.prefix_min(s) < 2 * sch_.r(m)) continue;
      // Choices for u°(t): pool members within r_t / 2 of α(k).
      std::vector<std::vector<const Nat*>> choices(s + 1);
      bool feasible = true;
      for (std::uint64_t t = 0; t <= s && feasible; ++t) {
        for (const Nat& c : pool) {
          if (close_to_center(c, k, t, budget)) choices[t].push_back(&c);
        }
        feasible = !choices[t].empty();
      }
      if (!feasible) continue;
      for (std::uint64_t p = 0; p <= budget; ++p) {
        if (!(sch_.r(p) <= sch_.r(n) / 2)) continue;
        std::vector<std::size_t> digit(s + 1, 0);
        std::vector<Nat> u(s + 1);
        for (;;) {
          if (examined++ >= bounds_.max_segments) return out;
          for (std::uint64_t t = 0; t <= s; ++t) u[t] = *choices[t][digit[t]];
          auto o = f_.apply(u, p, budget);
          if (o && tgt_->valid_index(*o, budget)) {
            auto consider = [&](const Nat& l) {
              if (seen.count(l) || !tgt_->valid_index(l, budget)) return;
              if (tgt_->dist_lt(*o, l, sch_.r(n) / 2, budget) == Verdict::Confirmed) {
                seen.insert(l);
                out.push_back(l);
              }
            };
            consider(*o);
            for (const Nat& l : targets) consider(l);
          }
          if (!next_segment(digit, choices)) break;
        }
      }
    }
    return out;
  }

 private:
  // Odometer over the choice lists, last position fastest; false after the
  // last combination.
  static bool next_segment(std::vector<std::size_t>& digit,
                           const std::vector<std::vector<const Nat*>>& choices) {
    for (std::size_t pos = digit.size(); pos-- > 0;) {
      if (++digit[pos] < choices[pos].size()) return true;
      digit[pos] = 0;
    }
    return false;
  }

  bool radius_conditions(std::uint64_t m, std::uint64_t n, std::uint64_t s, std::uint64_t p) const {
    return sch_.prefix_min(s) >= 2 * sch_.r(m) && sch_.r(p) <= sch_.r(n) / 2;
  }

  bool close_to_center(const Nat& c, const Nat& k, std::uint64_t t, std::uint64_t stage) const {
    if (!src_->valid_index(c, stage)) return false;
    return src_->dist_lt(c, k, sch_.r(t) / 2, stage) == Verdict::Confirmed;
  }

  RecursiveOperator f_;
  SpacePtr src_;
  SpacePtr tgt_;
  Schedule sch_;
  ExtractBounds bounds_;
};

}  // namespace

System extract_metric_system(RecursiveOperator f, SpacePtr source, SpacePtr target, const Schedule& sch,
                             ExtractBounds bounds) {
  std::string label = "extract(" + f.name + ")";
  auto impl = std::make_shared<ExtractImpl>(std::move(f), source, target, sch, bounds);
  return System(Flavor::Metric, std::move(source), std::move(target), sch, std::move(impl), std::move(label));
}

std::function<std::optional<Quad>(const Nat&)> extract_literal_stages(RecursiveOperator f, SpacePtr source,
                                                                     SpacePtr target, const Schedule& sch) {
  auto impl = std::make_shared<ExtractImpl>(std::move(f), std::move(source), std::move(target), sch, ExtractBounds{});
  return [impl](const Nat& t) { return impl->literal_stage(t); };
}

}  // namespace apx
