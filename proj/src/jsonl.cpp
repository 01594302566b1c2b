#include "apx/jsonl.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <tuple>
#include <ostream>

#include "apx/errors.hpp"

namespace apx {

void write_system_jsonl(const System& s, std::uint64_t stages, std::ostream& out) {
  nlohmann::json header = {{"flavor", flavor_name(s.flavor())},
                           {"schedule", s.schedule().name()},
                           {"source", s.source()->descriptor()},
                           {"target", s.target()->descriptor()},
                           {"system", s.label()}};
  out << nlohmann::json{{"header", header}}.dump() << "\n";
  for (std::uint64_t t = 0; t < stages; ++t) {
    auto q = s.stage(t);
    if (!q) continue;
    nlohmann::json line = {{"s", t},
                           {"k", s.source()->index_to_json(q->k)},
                           {"m", q->m},
                           {"l", s.target()->index_to_json(q->l)},
                           {"n", q->n}};
    out << line.dump() << "\n";
  }
}

namespace {

// The file is finite and fully known, so sections ignore the budget and
// return every recorded l.
class ReplayImpl : public SystemImpl {
 public:
  explicit ReplayImpl(std::map<std::uint64_t, Quad> stages) : stages_(std::move(stages)) {
    for (const auto& [s, q] : stages_) by_ball_[{q.k, q.m, q.n}].push_back(q.l);
  }

  std::vector<Nat> section(const Nat& k, std::uint64_t m, std::uint64_t n, std::uint64_t) const override {
    auto it = by_ball_.find({k, m, n});
    if (it == by_ball_.end()) return {};
    return it->second;
  }

  std::optional<Quad> stage(std::uint64_t s) const override {
    auto it = stages_.find(s);
    if (it == stages_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::uint64_t, Quad> stages_;
  std::map<std::tuple<Nat, std::uint64_t, std::uint64_t>, std::vector<Nat>> by_ball_;
};

Probe probe_for_label(std::string label, const Schedule& sch) {
  for (;;) {
    bool wrapped = (label.rfind("m2t(", 0) == 0 || label.rfind("t2m(", 0) == 0) && label.back() == ')';
    if (!wrapped) break;
    label = label.substr(4, label.size() - 5);
  }
  try {
    return builder_by_name(label, sch).probe();
  } catch (const Error&) {
    return nullptr;
  }
}

nlohmann::json parse_line(const std::string& text, std::size_t lineno) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("line " + std::to_string(lineno) + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace

System read_system_jsonl(std::istream& in) {
  std::string text;
  std::size_t lineno = 0;
  std::optional<nlohmann::json> header;
  SpacePtr src, tgt;
  std::map<std::uint64_t, Quad> stages;
  while (std::getline(in, text)) {
    ++lineno;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = parse_line(text, lineno);
    try {
      if (!header) {
        if (!j.contains("header")) throw ParseError("missing header object");
        header = j.at("header");
        src = space_from_descriptor(header->at("source"));
        tgt = space_from_descriptor(header->at("target"));
        continue;
      }
      std::uint64_t s = j.at("s").get<std::uint64_t>();
      Quad q{src->index_from_json(j.at("k")), j.at("m").get<std::uint64_t>(), tgt->index_from_json(j.at("l")),
             j.at("n").get<std::uint64_t>()};
      if (!stages.emplace(s, std::move(q)).second) throw ParseError("duplicate stage " + std::to_string(s));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header) throw ParseError("empty system file (no header line)");
  Schedule sch = Schedule::by_name(header->value("schedule", "dyadic"));
  Flavor flavor = flavor_from_name(header->value("flavor", "metric"));
  std::string label = header->value("system", "replayed");
  Probe probe = probe_for_label(label, sch);
  return System(flavor, src, tgt, sch, std::make_shared<ReplayImpl>(std::move(stages)), label, probe);
}

System read_system_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_system_jsonl(in);
}

void write_pairs_jsonl(const std::vector<IndexPair>& r, std::ostream& out) {
  for (const auto& [i, j] : r) out << nlohmann::json{{"i", to_string(i)}, {"j", to_string(j)}}.dump() << "\n";
}

std::vector<IndexPair> read_pairs_jsonl(std::istream& in) {
  auto nat = [](const nlohmann::json& v) {
    if (v.is_number_unsigned()) return Nat(std::to_string(v.get<std::uint64_t>()));
    if (v.is_string()) return parse_nat(v.get<std::string>());
    throw ParseError("expected a natural number");
  };
  std::vector<IndexPair> out;
  std::string text;
  std::size_t lineno = 0;
  while (std::getline(in, text)) {
    ++lineno;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = parse_line(text, lineno);
    try {
      out.emplace_back(nat(j.at("i")), nat(j.at("j")));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace apx
