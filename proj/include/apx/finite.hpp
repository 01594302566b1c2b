#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "apx/rational.hpp"
#include "apx/renum.hpp"
#include "json.hpp"

namespace apx {

/// A pair (i, j) of base indices: "x ∈ U_i ⇒ f(x) ∈ V_j".
using IndexPair = std::pair<Nat, Nat>;

/// Two finite spaces with indexed bases, a domain E ⊆ X and f: E → Y.
/// Points and base members are stored as positions in X and Y.
struct FiniteInstance {
  std::vector<std::string> X, Y;
  std::vector<std::vector<std::size_t>> U, V;
  std::vector<std::size_t> E;
  std::map<std::size_t, std::size_t> f;

  /// Throws Error if a table refers outside its carrier or f is not total on E.
  void validate() const;

  static FiniteInstance from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  bool in_U(std::size_t i, std::size_t x) const;
  bool in_V(std::size_t j, std::size_t y) const;
};

/// X = Y = {0,1}, U_0 = V_0 = {0}, U_1 = U_2 = V_1 = V_2 = {0,1}, f ≡ 1, E = X.
FiniteInstance two_point_instance();

/// [x]_U, sorted.
std::vector<Nat> x_U(const FiniteInstance& inst, std::size_t x);
/// [y]_V, sorted.
std::vector<Nat> y_V(const FiniteInstance& inst, std::size_t y);

/// {(i, j) | U_i ∩ E ⊆ f⁻¹(V_j)}, sorted.
std::vector<IndexPair> maximal_uv_system(const FiniteInstance& inst);

struct UVViolation {
  std::size_t j;
  std::vector<std::size_t> uncovered;  // in f⁻¹(V_j) but in no U_i ∩ E with (i,j) ∈ R
  std::vector<std::size_t> spurious;   // in some U_i ∩ E with (i,j) ∈ R but not in f⁻¹(V_j)
};

/// Checks f⁻¹(V_j) = ⋃{U_i ∩ E | (i,j) ∈ R} for every j. Pairs with indices
/// outside the tables are ignored. Empty result: R is an approximation system.
std::vector<UVViolation> check_uv_condition(const FiniteInstance& inst, const std::vector<IndexPair>& r);
std::string describe(const FiniteInstance& inst, const UVViolation& v);

/// H = {(i1, i2, i) | U_i ⊆ U_i1 ∩ U_i2}, the largest set usable as the
/// intersection witness.
std::vector<std::vector<Nat>> exhaustive_H(const FiniteInstance& inst);

/// U_i1 ∩ U_i2 = ⋃{U_i | (i1, i2, i) ∈ H} for all i1, i2.
bool intersection_condition_holds(const FiniteInstance& inst, const std::vector<std::vector<Nat>>& h);

/// f is continuous on E: the maximal system satisfies the covering condition.
bool is_continuous(const FiniteInstance& inst);

/// A random instance with 1..max_points points per carrier and 1..max_bases
/// bases each, resampled until the bases are closed under intersection in
/// the sense of intersection_condition_holds and f is continuous.
FiniteInstance random_finite_instance(std::mt19937_64& rng, std::size_t max_points = 4,
                                      std::size_t max_bases = 6);

}  // namespace apx
