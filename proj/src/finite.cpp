#include "apx/finite.hpp"

#include <algorithm>
#include <set>

#include "apx/errors.hpp"

namespace apx {

namespace {

Nat idx(std::size_t i) { return Nat(static_cast<unsigned long>(i)); }

std::size_t position(const std::vector<std::string>& carrier, const nlohmann::json& label,
                     const char* what) {
  if (!label.is_string()) throw ParseError(std::string(what) + ": point labels must be strings");
  auto it = std::find(carrier.begin(), carrier.end(), label.get<std::string>());
  if (it == carrier.end()) {
    throw ParseError(std::string(what) + ": unknown point '" + label.get<std::string>() + "'");
  }
  return static_cast<std::size_t>(it - carrier.begin());
}

std::vector<std::string> labels(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(std::string("instance needs an array '") + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& x : j[key]) {
    if (!x.is_string()) throw ParseError(std::string(key) + ": point labels must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::vector<std::vector<std::size_t>> tables(const nlohmann::json& j, const char* key,
                                             const std::vector<std::string>& carrier) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(std::string("instance needs an array of arrays '") + key + "'");
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& set : j[key]) {
    if (!set.is_array()) throw ParseError(std::string(key) + ": base sets must be arrays");
    std::vector<std::size_t> members;
    for (const auto& x : set) members.push_back(position(carrier, x, key));
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

bool contains(const std::vector<std::size_t>& xs, std::size_t x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

}  // namespace

void FiniteInstance::validate() const {
  for (const auto& u : U) {
    for (auto x : u) {
      if (x >= X.size()) throw Error("base set U refers outside X");
    }
  }
  for (const auto& v : V) {
    for (auto y : v) {
      if (y >= Y.size()) throw Error("base set V refers outside Y");
    }
  }
  for (auto x : E) {
    if (x >= X.size()) throw Error("domain E refers outside X");
    auto it = f.find(x);
    if (it == f.end()) throw Error("f is not defined at '" + X[x] + "' in E");
    if (it->second >= Y.size()) throw Error("f maps outside Y");
  }
}

FiniteInstance FiniteInstance::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  FiniteInstance inst;
  inst.X = labels(j, "X");
  inst.Y = labels(j, "Y");
  inst.U = tables(j, "U", inst.X);
  inst.V = tables(j, "V", inst.Y);
  if (!j.contains("E") || !j["E"].is_array()) throw ParseError("instance needs an array 'E'");
  for (const auto& x : j["E"]) inst.E.push_back(position(inst.X, x, "E"));
  std::sort(inst.E.begin(), inst.E.end());
  inst.E.erase(std::unique(inst.E.begin(), inst.E.end()), inst.E.end());
  if (!j.contains("f") || !j["f"].is_array()) throw ParseError("instance needs an array 'f' of pairs");
  for (const auto& pair : j["f"]) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("f entries must be [x, y] pairs");
    inst.f[position(inst.X, pair[0], "f")] = position(inst.Y, pair[1], "f");
  }
  inst.validate();
  return inst;
}

nlohmann::json FiniteInstance::to_json() const {
  auto table = [](const std::vector<std::vector<std::size_t>>& t, const std::vector<std::string>& c) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& set : t) {
      nlohmann::json s = nlohmann::json::array();
      for (auto x : set) s.push_back(c[x]);
      out.push_back(s);
    }
    return out;
  };
  nlohmann::json e = nlohmann::json::array();
  for (auto x : E) e.push_back(X[x]);
  nlohmann::json fj = nlohmann::json::array();
  for (const auto& [x, y] : f) fj.push_back({X[x], Y[y]});
  return {{"X", X}, {"Y", Y}, {"U", table(U, X)}, {"V", table(V, Y)}, {"E", e}, {"f", fj}};
}

bool FiniteInstance::in_U(std::size_t i, std::size_t x) const { return i < U.size() && contains(U[i], x); }
bool FiniteInstance::in_V(std::size_t j, std::size_t y) const { return j < V.size() && contains(V[j], y); }

FiniteInstance two_point_instance() {
  FiniteInstance inst;
  inst.X = {"0", "1"};
  inst.Y = {"0", "1"};
  inst.U = {{0}, {0, 1}, {0, 1}};
  inst.V = {{0}, {0, 1}, {0, 1}};
  inst.E = {0, 1};
  inst.f = {{0, 1}, {1, 1}};
  return inst;
}

std::vector<Nat> x_U(const FiniteInstance& inst, std::size_t x) {
  std::vector<Nat> out;
  for (std::size_t i = 0; i < inst.U.size(); ++i) {
    if (inst.in_U(i, x)) out.push_back(idx(i));
  }
  return out;
}

std::vector<Nat> y_V(const FiniteInstance& inst, std::size_t y) {
  std::vector<Nat> out;
  for (std::size_t j = 0; j < inst.V.size(); ++j) {
    if (inst.in_V(j, y)) out.push_back(idx(j));
  }
  return out;
}

std::vector<IndexPair> maximal_uv_system(const FiniteInstance& inst) {
  std::vector<IndexPair> out;
  for (std::size_t i = 0; i < inst.U.size(); ++i) {
    for (std::size_t j = 0; j < inst.V.size(); ++j) {
      bool inside = std::all_of(inst.E.begin(), inst.E.end(), [&](std::size_t x) {
        return !inst.in_U(i, x) || inst.in_V(j, inst.f.at(x));
      });
      if (inside) out.emplace_back(idx(i), idx(j));
    }
  }
  return out;
}

std::vector<UVViolation> check_uv_condition(const FiniteInstance& inst, const std::vector<IndexPair>& r) {
  std::vector<UVViolation> out;
  for (std::size_t j = 0; j < inst.V.size(); ++j) {
    std::set<std::size_t> preimage;
    for (auto x : inst.E) {
      if (inst.in_V(j, inst.f.at(x))) preimage.insert(x);
    }
    std::set<std::size_t> covered;
    for (const auto& [i, jj] : r) {
      if (jj != idx(j) || !i.fits_ulong_p() || i.get_ui() >= inst.U.size()) continue;
      for (auto x : inst.E) {
        if (inst.in_U(i.get_ui(), x)) covered.insert(x);
      }
    }
    if (preimage == covered) continue;
    UVViolation v{j, {}, {}};
    std::set_difference(preimage.begin(), preimage.end(), covered.begin(), covered.end(),
                        std::back_inserter(v.uncovered));
    std::set_difference(covered.begin(), covered.end(), preimage.begin(), preimage.end(),
                        std::back_inserter(v.spurious));
    out.push_back(std::move(v));
  }
  return out;
}

std::string describe(const FiniteInstance& inst, const UVViolation& v) {
  auto names = [&](const std::vector<std::size_t>& xs) {
    std::string s = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + inst.X[xs[i]];
    return s + "}";
  };
  std::string out = "j=" + std::to_string(v.j) + ": f^-1(V_j) differs from the union of U_i ∩ E";
  if (!v.uncovered.empty()) out += "; uncovered " + names(v.uncovered);
  if (!v.spurious.empty()) out += "; spurious " + names(v.spurious);
  return out;
}

std::vector<std::vector<Nat>> exhaustive_H(const FiniteInstance& inst) {
  std::vector<std::vector<Nat>> out;
  const std::size_t n = inst.U.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        bool inside = std::all_of(inst.U[i].begin(), inst.U[i].end(),
                                  [&](std::size_t x) { return inst.in_U(a, x) && inst.in_U(b, x); });
        if (inside) out.push_back({idx(a), idx(b), idx(i)});
      }
    }
  }
  return out;
}

bool intersection_condition_holds(const FiniteInstance& inst, const std::vector<std::vector<Nat>>& h) {
  const std::size_t n = inst.U.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::set<std::size_t> meet;
      for (std::size_t x = 0; x < inst.X.size(); ++x) {
        if (inst.in_U(a, x) && inst.in_U(b, x)) meet.insert(x);
      }
      std::set<std::size_t> joined;
      for (const auto& t : h) {
        if (t.size() != 3 || t[0] != idx(a) || t[1] != idx(b)) continue;
        for (auto x : inst.U[t[2].get_ui()]) joined.insert(x);
      }
      if (meet != joined) return false;
    }
  }
  return true;
}

bool is_continuous(const FiniteInstance& inst) {
  return check_uv_condition(inst, maximal_uv_system(inst)).empty();
}

FiniteInstance random_finite_instance(std::mt19937_64& rng, std::size_t max_points, std::size_t max_bases) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto random_subsets = [&](std::size_t carrier, std::size_t count) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<std::size_t> set;
      for (std::size_t x = 0; x < carrier; ++x) {
        if (pick(0, 1)) set.push_back(x);
      }
      out.push_back(std::move(set));
    }
    return out;
  };
  for (;;) {
    FiniteInstance inst;
    std::size_t nx = pick(1, max_points);
    std::size_t ny = pick(1, max_points);
    for (std::size_t x = 0; x < nx; ++x) inst.X.push_back("x" + std::to_string(x));
    for (std::size_t y = 0; y < ny; ++y) inst.Y.push_back("y" + std::to_string(y));
    inst.U = random_subsets(nx, pick(1, max_bases));
    inst.V = random_subsets(ny, pick(1, max_bases));
    for (std::size_t x = 0; x < nx; ++x) {
      if (pick(0, 3) != 0) inst.E.push_back(x);
    }
    for (auto x : inst.E) inst.f[x] = pick(0, ny - 1);
    if (!intersection_condition_holds(inst, exhaustive_H(inst))) continue;
    if (!is_continuous(inst)) continue;
    return inst;
  }
}

}  // namespace apx
