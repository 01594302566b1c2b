#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "apx/tupling.hpp"

namespace apx {

/// A recursively enumerable set given by a deterministic stage function.
/// The denoted set is {stage(s) | s in N, stage(s) defined}; a stage may be
/// a gap, and elements may repeat. Copies share the same stage function.
template <class T>
class REnum {
 public:
  using StageFn = std::function<std::optional<T>(std::uint64_t)>;

  explicit REnum(StageFn fn) : fn_(std::make_shared<const StageFn>(std::move(fn))) {}

  std::optional<T> stage(std::uint64_t s) const { return (*fn_)(s); }

  /// Distinct elements emitted at stages 0..s-1, in first-seen order.
  std::vector<T> prefix(std::uint64_t s) const {
    std::vector<T> out;
    std::set<T> seen;
    for (std::uint64_t i = 0; i < s; ++i) {
      auto x = stage(i);
      if (x && seen.insert(*x).second) out.push_back(std::move(*x));
    }
    return out;
  }

  /// True iff some s' <= s has stage(s') == x.
  bool member_by_stage(const T& x, std::uint64_t s) const {
    for (std::uint64_t i = 0; i <= s; ++i) {
      auto y = stage(i);
      if (y && *y == x) return true;
    }
    return false;
  }

 private:
  std::shared_ptr<const StageFn> fn_;
};

template <class T>
REnum<T> empty_renum() {
  return REnum<T>([](std::uint64_t) -> std::optional<T> { return std::nullopt; });
}

/// Emits xs[s] at stage s, then nothing.
template <class T>
REnum<T> finite_renum(std::vector<T> xs) {
  auto data = std::make_shared<const std::vector<T>>(std::move(xs));
  return REnum<T>([data](std::uint64_t s) -> std::optional<T> {
    if (s < data->size()) return (*data)[s];
    return std::nullopt;
  });
}

template <class T, class F>
auto map_renum(const REnum<T>& e, F f) {
  using U = std::invoke_result_t<F, const T&>;
  return REnum<U>([e, f](std::uint64_t s) -> std::optional<U> {
    auto x = e.stage(s);
    if (!x) return std::nullopt;
    return f(*x);
  });
}

template <class T, class P>
REnum<T> filter_renum(const REnum<T>& e, P pred) {
  return REnum<T>([e, pred](std::uint64_t s) -> std::optional<T> {
    auto x = e.stage(s);
    if (x && pred(*x)) return x;
    return std::nullopt;
  });
}

/// Stage t = pair(a, b) emits (A.stage(a), B.stage(b)) when both are defined.
template <class A, class B>
REnum<std::pair<A, B>> dovetail_product(const REnum<A>& a, const REnum<B>& b) {
  return REnum<std::pair<A, B>>([a, b](std::uint64_t t) -> std::optional<std::pair<A, B>> {
    auto [i, j] = cantor_unpair(t);
    auto x = a.stage(i);
    if (!x) return std::nullopt;
    auto y = b.stage(j);
    if (!y) return std::nullopt;
    return std::pair<A, B>{std::move(*x), std::move(*y)};
  });
}

/// Even stages come from A, odd stages from B.
template <class T>
REnum<T> dovetail_union(const REnum<T>& a, const REnum<T>& b) {
  return REnum<T>([a, b](std::uint64_t t) -> std::optional<T> {
    return (t % 2 == 0) ? a.stage(t / 2) : b.stage(t / 2);
  });
}

/// Flattens a monotone family of finite approximations W_0 ⊆ W_1 ⊆ ... into
/// a stage function: stage pair(b, i) emits the i-th element of W_b. The
/// family must be deterministic; results are cached per b.
template <class T>
REnum<T> from_approximations(std::function<std::vector<T>(std::uint64_t)> w) {
  struct State {
    std::function<std::vector<T>(std::uint64_t)> w;
    std::mutex mu;
    std::map<std::uint64_t, std::vector<T>> cache;
  };
  auto st = std::make_shared<State>();
  st->w = std::move(w);
  return REnum<T>([st](std::uint64_t t) -> std::optional<T> {
    auto [b, i] = cantor_unpair(t);
    const std::vector<T>* level = nullptr;
    {
      std::lock_guard<std::mutex> lock(st->mu);
      auto it = st->cache.find(b);
      if (it != st->cache.end()) level = &it->second;
    }
    if (!level) {
      std::vector<T> computed = st->w(b);
      std::lock_guard<std::mutex> lock(st->mu);
      level = &st->cache.try_emplace(b, std::move(computed)).first->second;
    }
    if (i < level->size()) return (*level)[i];
    return std::nullopt;
  });
}

}  // namespace apx
