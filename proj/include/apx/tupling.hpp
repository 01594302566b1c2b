#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "apx/rational.hpp"

namespace apx {

// Cantor pairing: pair(s,t) = (s+t)(s+t+1)/2 + t, a bijection N x N -> N.
// The uint64_t overloads are used for stage numbers and throw apx::Error on
// overflow; the Nat overloads are used for point indices.

std::uint64_t cantor_pair(std::uint64_t s, std::uint64_t t);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n);

Nat cantor_pair(const Nat& s, const Nat& t);
std::pair<Nat, Nat> cantor_unpair(const Nat& n);

// Fixed-length tuples by right-nested pairing:
// <x> = x, <x0, x1, ..., xk> = pair(x0, <x1, ..., xk>).

Nat tuple_encode(std::span<const Nat> xs);
std::vector<Nat> tuple_decode(const Nat& code, std::size_t length);

std::uint64_t tuple_encode(std::span<const std::uint64_t> xs);

template <std::size_t N>
std::array<std::uint64_t, N> tuple_decode(std::uint64_t code) {
  static_assert(N >= 1);
  std::array<std::uint64_t, N> out{};
  for (std::size_t i = 0; i + 1 < N; ++i) {
    auto [head, rest] = cantor_unpair(code);
    out[i] = head;
    code = rest;
  }
  out[N - 1] = code;
  return out;
}

// Finite sequences of any length: [] -> 0, xs -> 1 + pair(len - 1, <xs>).

Nat sequence_encode(std::span<const Nat> xs);
std::vector<Nat> sequence_decode(const Nat& code);

std::uint64_t sequence_encode(std::span<const std::uint64_t> xs);
std::vector<std::uint64_t> sequence_decode(std::uint64_t code);

}  // namespace apx
