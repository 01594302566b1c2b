#include "apx/tupling.hpp"

#include <cmath>
#include <limits>

#include "apx/errors.hpp"

namespace apx {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

// Largest w with w(w+1)/2 <= n.
std::uint64_t diagonal_of(std::uint64_t n) {
  auto w = static_cast<std::uint64_t>((std::sqrt(8.0L * static_cast<long double>(n) + 1.0L) - 1.0L) / 2.0L);
  auto tri = [](std::uint64_t x) { return static_cast<u128>(x) * (x + 1) / 2; };
  while (w > 0 && tri(w) > n) --w;
  while (tri(w + 1) <= n) ++w;
  return w;
}

}  // namespace

std::uint64_t cantor_pair(std::uint64_t s, std::uint64_t t) {
  u128 sum = static_cast<u128>(s) + t;
  u128 value = sum * (sum + 1) / 2 + t;
  if (value > kMax) throw Error("cantor_pair overflow on 64-bit stage numbers");
  return static_cast<std::uint64_t>(value);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n) {
  std::uint64_t w = diagonal_of(n);
  std::uint64_t t = n - static_cast<std::uint64_t>(static_cast<u128>(w) * (w + 1) / 2);
  return {w - t, t};
}

Nat cantor_pair(const Nat& s, const Nat& t) {
  if (s < 0 || t < 0) throw Error("cantor_pair on negative argument");
  Nat sum = s + t;
  return sum * (sum + 1) / 2 + t;
}

std::pair<Nat, Nat> cantor_unpair(const Nat& n) {
  if (n < 0) throw Error("cantor_unpair on negative argument");
  Nat disc = 8 * n + 1;
  Nat root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  Nat w = (root - 1) / 2;
  Nat t = n - w * (w + 1) / 2;
  return {w - t, t};
}

Nat tuple_encode(std::span<const Nat> xs) {
  if (xs.empty()) throw Error("tuple_encode of an empty tuple");
  Nat code = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) code = cantor_pair(xs[i], code);
  return code;
}

std::vector<Nat> tuple_decode(const Nat& code, std::size_t length) {
  if (length == 0) throw Error("tuple_decode with zero length");
  std::vector<Nat> out;
  out.reserve(length);
  Nat rest = code;
  for (std::size_t i = 0; i + 1 < length; ++i) {
    auto [head, tail] = cantor_unpair(rest);
    out.push_back(std::move(head));
    rest = std::move(tail);
  }
  out.push_back(std::move(rest));
  return out;
}

std::uint64_t tuple_encode(std::span<const std::uint64_t> xs) {
  if (xs.empty()) throw Error("tuple_encode of an empty tuple");
  std::uint64_t code = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 0;) code = cantor_pair(xs[i], code);
  return code;
}

Nat sequence_encode(std::span<const Nat> xs) {
  if (xs.empty()) return Nat(0);
  return 1 + cantor_pair(Nat(static_cast<unsigned long>(xs.size() - 1)), tuple_encode(xs));
}

std::vector<Nat> sequence_decode(const Nat& code) {
  if (code == 0) return {};
  auto [len_minus_one, body] = cantor_unpair(Nat(code - 1));
  if (!len_minus_one.fits_ulong_p() || len_minus_one.get_ui() > (1ul << 20)) {
    throw Error("sequence_decode: implausible sequence length");
  }
  return tuple_decode(body, len_minus_one.get_ui() + 1);
}

std::uint64_t sequence_encode(std::span<const std::uint64_t> xs) {
  if (xs.empty()) return 0;
  std::uint64_t code = cantor_pair(xs.size() - 1, tuple_encode(xs));
  if (code == kMax) throw Error("sequence_encode overflow");
  return code + 1;
}

std::vector<std::uint64_t> sequence_decode(std::uint64_t code) {
  if (code == 0) return {};
  auto [len_minus_one, body] = cantor_unpair(code - 1);
  if (len_minus_one > (1u << 20)) throw Error("sequence_decode: implausible sequence length");
  std::vector<std::uint64_t> out;
  out.reserve(len_minus_one + 1);
  for (std::uint64_t i = 0; i < len_minus_one; ++i) {
    auto [head, tail] = cantor_unpair(body);
    out.push_back(head);
    body = tail;
  }
  out.push_back(body);
  return out;
}

}  // namespace apx
