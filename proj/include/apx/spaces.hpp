#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "apx/rational.hpp"
#include "apx/renum.hpp"
#include "apx/schedule.hpp"
#include "json.hpp"

namespace apx {

/// A point of Q^p.
using Point = std::vector<Rat>;

/// The real scale * sqrt(c) + offset with c >= 0 rational. Scalar only.
struct SqrtOf {
  Rat c;
  Rat scale = 1;
  Rat offset = 0;
};

/// A point of R^p known exactly: rational data or a scalar square root.
using RealPoint = std::variant<Point, SqrtOf>;

std::string describe(const Point& p);
std::string describe(const RealPoint& x);

enum class Verdict { Unknown, Confirmed };

/// A semi-computable metric space: a partial enumeration γ of a dense subset
/// (the index set), and a semi-decision of d(γ(l), γ(l')) < bound.
class Space {
 public:
  virtual ~Space() = default;

  virtual std::string name() const = 0;
  virtual nlohmann::json descriptor() const = 0;
  virtual std::size_t dimension() const = 0;

  /// Semi-decides membership of l in dom(γ); monotone in stage.
  virtual bool valid_index(const Nat& l, std::uint64_t stage) const = 0;

  /// Sound, monotone in stage, complete in the limit. Throws InvalidIndex
  /// when either index is not in the domain.
  virtual Verdict dist_lt(const Nat& a, const Nat& b, const Rat& bound,
                          std::uint64_t stage) const = 0;

  /// Decides γ(a) = γ(b) when the space supports it.
  virtual std::optional<bool> same_point(const Nat& a, const Nat& b) const = 0;

  /// Exact rational data of γ(l), for oracles and output; nullopt if the
  /// index is invalid.
  virtual std::optional<Point> decode(const Nat& l) const = 0;
  virtual std::optional<Nat> encode(const Point& p) const = 0;

  /// Exact test d(p, x) < bound.
  virtual bool point_dist_lt(const Point& p, const RealPoint& x, const Rat& bound) const = 0;

  virtual nlohmann::json index_to_json(const Nat& l) const;
  virtual Nat index_from_json(const nlohmann::json& j) const;

  /// dom(γ) as a stage function: stage s emits s when s is confirmed valid.
  REnum<Nat> index_set() const;

  /// Indices below b confirmed valid by stage b, in increasing order.
  std::vector<Nat> index_prefix(std::uint64_t b) const;

  /// Exact test x ∈ B(γ(center), r); false for invalid centers.
  bool ball_contains(const Nat& center, const Rat& r, const RealPoint& x) const;
};

using SpacePtr = std::shared_ptr<const Space>;

/// Q^p with exact distances. The coding decides how indices map to points.
class RationalSpace : public Space {
 public:
  enum class Metric { Max, Euclidean };
  enum class Coding {
    Vector,   // Q^p, p scalar codes tupled; scalar code(p/q) = pair(zigzag(p), q-1)
    Halving,  // N^2 -> Q>=0, (p,q) |-> p/(q+1); non-injective
    Abs,      // Q -> Q>=0, k |-> |k| with the scalar vector code; non-injective
    Nat,      // discrete N with |i-j|
  };

  RationalSpace(std::size_t dim, Metric metric, Coding coding);

  static SpacePtr scalar();
  static SpacePtr plane(Metric metric = Metric::Max);
  static SpacePtr halving();
  static SpacePtr abs_line();
  static SpacePtr naturals();

  Metric metric() const { return metric_; }
  Coding coding() const { return coding_; }

  std::string name() const override;
  nlohmann::json descriptor() const override;
  std::size_t dimension() const override { return dim_; }
  bool valid_index(const Nat& l, std::uint64_t stage) const override;
  Verdict dist_lt(const Nat& a, const Nat& b, const Rat& bound, std::uint64_t stage) const override;
  std::optional<bool> same_point(const Nat& a, const Nat& b) const override;
  std::optional<Point> decode(const Nat& l) const override;
  std::optional<Nat> encode(const Point& p) const override;
  bool point_dist_lt(const Point& p, const RealPoint& x, const Rat& bound) const override;
  nlohmann::json index_to_json(const Nat& l) const override;
  Nat index_from_json(const nlohmann::json& j) const override;

  /// Exact test d(a, b) < bound on rational points.
  bool rational_dist_lt(const Point& a, const Point& b, const Rat& bound) const;

 private:
  std::size_t dim_;
  Metric metric_;
  Coding coding_;
};

/// Scalar rational code: pair(zigzag(p), q-1) for p/q in lowest terms.
Nat encode_rational(const Rat& x);
/// Inverse of encode_rational; nullopt when the pair is not in lowest terms.
std::optional<Rat> decode_rational(const Nat& code);

/// Reconstructs a space from its descriptor (used by JSONL replay).
SpacePtr space_from_descriptor(const nlohmann::json& d);

/// A ball B(γ(k), r_m).
struct BallIndex {
  Nat k;
  std::uint64_t m;
};

/// Semi-decides (γ(k), m) <_d (γ(k'), m'), i.e. d(γ(k'), γ(k)) < r_m' - r_m.
/// A non-positive margin gives Unknown at every stage.
Verdict formally_included(const Space& space, const Schedule& sch, const BallIndex& inner,
                          const BallIndex& outer, std::uint64_t stage);

}  // namespace apx
