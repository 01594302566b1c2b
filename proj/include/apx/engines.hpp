#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "apx/finite.hpp"
#include "apx/names.hpp"
#include "apx/renum.hpp"
#include "apx/systems.hpp"

namespace apx {

// ---- enumeration operators ------------------------------------------------

/// F(M) = {j | ∃i ∈ M, (i, j) ∈ R}. Stage pair(a, b) emits j when
/// R.stage(a) = (i, j) and M.stage(b) = i.
REnum<Nat> enum_apply(const REnum<IndexPair>& r, const REnum<Nat>& m);

/// An enumeration operator given by pairs (D, j), D finite and sorted:
/// F(M) = {j | some enumerated (D, j) has D ⊆ M}.
using OperatorPair = std::pair<std::vector<Nat>, Nat>;
using EnumOperatorSet = REnum<OperatorPair>;

/// Stage pair(a, b) emits j when W.stage(a) = (D, j) and every element of D
/// appears in M by stage b.
REnum<Nat> apply_operator(const EnumOperatorSet& w, const REnum<Nat>& m);

/// W = {({i}, j) | (i, j) ∈ R}.
EnumOperatorSet operator_from_pairs(const REnum<IndexPair>& r);

/// R = {(<k,m>, <l,n>) | (k,m,l,n) ∈ S}, staged like S.
REnum<IndexPair> pair_coded(const System& s);

/// Applies a topological system to a U-name: the output enumerates
/// F(rng u) for the pair-coded R. Stage <b, n, j, budget> takes i = u(b) =
/// <k, m> and emits <l, n> for the j-th l of S's section at (k, m, n).
SetName apply_topological(const System& s, const SetName& u, std::uint64_t step_cap = kDefaultStepCap);

/// The same operator over the literal stage functions (pair_coded + enum_apply).
REnum<Nat> apply_topological_literal(const System& s, const SetName& u);

// ---- the finite construction of a (U,V)-system from an operator ---------

/// ⋃_{k>=2} H_k with H_2 = H and H_{k+1} joining on the middle index.
/// Stage t decodes as a sequence of H-stage numbers s_0..s_r; the chain
/// H(s_0), ..., H(s_r) must link last-to-first. Emits (i_1, ..., i_k, i).
REnum<std::vector<Nat>> hk_closure(const REnum<std::vector<Nat>>& h);

/// I₀ = {i | ∃i' (i', i', i) ∈ H}.
REnum<Nat> initial_indices(const REnum<std::vector<Nat>>& h);

/// R = {(i, j) | i ∈ I₀, j ∈ F(∅)} ∪ {(i, j) | (i_1..i_k, i) ∈ H_k, j ∈ F({i_1..i_k})}.
/// Computed as monotone finite approximations from prefixes of W and H
/// (chains are explored up to their set of used indices and last index).
REnum<IndexPair> build_R(const EnumOperatorSet& w, const REnum<std::vector<Nat>>& h);

/// The approximation of build_R from the first `b` stages of W and H.
std::vector<IndexPair> build_R_approximation(const EnumOperatorSet& w,
                                             const REnum<std::vector<Nat>>& h, std::uint64_t b);

// ---- metric engines --------------------------------------------------------

/// Evaluation: v(n) = the l found by the least t = <m, j, s> such that the
/// section of S at (u(m), m, n) with budget s has a j-th element l.
/// Throws StepCapExceeded after `step_cap` values of t.
AlphaName evaluate_metric(const System& s, const AlphaName& u, std::uint64_t step_cap = kDefaultStepCap);

/// S' = {(k, m, l', n') | l' ∈ L, ∃l, n ((k,m,l,n) ∈ S, (β(l), n) <_e (β(l'), n'))}.
/// Stage <a, l', n', s> checks S.stage(a) and the inclusion at stage s.
System metric_to_topological(const System& s);

/// S' = {(k', m', l, n) | k' ∈ K, ∃k, m ((k,m,l,n) ∈ S, (α(k'), m') <_d (α(k), m))}.
System topological_to_metric(const System& s);

/// A 6-tuple (k1, m1, k2, m2, k, m) with (k, m) formally included in both
/// (k1, m1) and (k2, m2).
struct MeetTuple {
  Nat k1;
  std::uint64_t m1;
  Nat k2;
  std::uint64_t m2;
  Nat k;
  std::uint64_t m;
};
bool operator==(const MeetTuple& a, const MeetTuple& b);
bool operator<(const MeetTuple& a, const MeetTuple& b);

/// Stage <k1, m1, k2, m2, k, m, s> emits the tuple when both inclusions are
/// confirmed at stage s.
REnum<MeetTuple> intersection_H(SpacePtr space, const Schedule& sch);
bool in_intersection_H(const Space& space, const Schedule& sch, const MeetTuple& t, std::uint64_t stage);
/// Balls (k, m), k among the first `budget` indices and m <= budget, included
/// in both given balls at stage `budget`.
std::vector<BallIndex> intersection_section(const Space& space, const Schedule& sch,
                                            const BallIndex& a, const BallIndex& b, std::uint64_t budget);

// ---- extraction from a recursive operator ---------------------------------

/// A recursive operator on index streams, given by its action on finite
/// initial segments u° = (u(0), ..., u(s)). Must be deterministic, monotone
/// in effort and in extensions of u°, and its answer may only depend on u°.
struct RecursiveOperator {
  std::string name;
  std::function<std::optional<Nat>(const std::vector<Nat>& u, std::uint64_t p, std::uint64_t effort)> apply;
};

/// F(u)(p) = u(p).
RecursiveOperator identity_operator();
/// F(u)(p) = code for every p.
RecursiveOperator constant_operator(const Nat& code);

struct ExtractBounds {
  /// Candidate segments u° examined per section; beyond it the section is
  /// truncated (desk-scale guard, the search is exponential in s).
  std::uint64_t max_segments = 200'000;
};

/// S = {(k, m, l, n) | ∃s, p, u° with min{r_0..r_s} >= 2 r_m, r_p <= r_n / 2,
/// d(α(u°(t)), α(k)) < r_t / 2 for t <= s, p ∈ dom F(u°) and
/// e(β(F(u°)(p)), β(l)) < r_n / 2}.
/// Stage <k, m, l, n, s, p, code(u°), c> checks the conditions with
/// confirmation stage and effort c. Sections with budget b search s, p <= b,
/// u° over {k} and the first b indices, l over F(u°)(p) and the first b indices.
System extract_metric_system(RecursiveOperator f, SpacePtr source, SpacePtr target, const Schedule& sch,
                             ExtractBounds bounds = {});

/// The stage function of extract_metric_system over arbitrary stage numbers;
/// System::stage only reaches the ones that fit 64 bits.
std::function<std::optional<Quad>(const Nat&)> extract_literal_stages(RecursiveOperator f, SpacePtr source,
                                                                     SpacePtr target, const Schedule& sch);

}  // namespace apx
