#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "apx/checks.hpp"
#include "apx/engines.hpp"
#include "apx/errors.hpp"
#include "apx/finite.hpp"
#include "apx/jsonl.hpp"
#include "expr.hpp"

namespace apx::cli {

namespace {

struct Options {
  std::string schedule = "dyadic";
  std::uint64_t n = 8;
  std::uint64_t stages = 1000;
  std::uint64_t step_cap = kDefaultStepCap;
  std::vector<std::string> inputs;
  std::string format = "jsonl";
  std::uint64_t seed = 1;
  std::uint64_t samples = 50;
  std::uint64_t m_cap = CheckBounds{}.m_max;
  std::uint64_t check_stages = CheckBounds{}.stages;
  std::string expression;
  std::string system;
  std::string direction;
  std::string instance;
  std::string pairs;
};

// A builder name, or a path to a system JSONL file.
System load_system(const std::string& spec, const Schedule& sch) {
  bool is_file = spec.size() > 6 && spec.substr(spec.size() - 6) == ".jsonl";
  if (is_file || std::filesystem::exists(spec)) return read_system_jsonl_file(spec);
  return builder_by_name(spec, sch);
}

int cmd_eval(const Options& o, std::ostream& out) {
  Schedule sch = Schedule::by_name(o.schedule);
  Parsed p = parse_expression(o.expression);
  if (p.variables.size() != o.inputs.size()) {
    throw ParseError("expression has " + std::to_string(p.variables.size()) + " variable(s) but " +
                     std::to_string(o.inputs.size()) + " --input given");
  }
  std::vector<AlphaName> inputs;
  for (const auto& spec : o.inputs) inputs.push_back(input_name(spec, sch));
  AlphaName v = compile(*p.root, inputs, sch, o.step_cap);
  auto value = v.space()->decode(v.at(o.n));
  if (!value) throw Error("evaluation produced an invalid index");
  out << (*value)[0].str() << " ±" << v.schedule().r(o.n).str() << "\n";
  return kOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  System s = load_system(o.system, Schedule::by_name(o.schedule));
  write_system_jsonl(s, o.stages, out);
  return kOk;
}

int cmd_convert(const Options& o, std::ostream& out) {
  System s = load_system(o.system, Schedule::by_name(o.schedule));
  System converted = o.direction == "m2t" ? metric_to_topological(s) : topological_to_metric(s);
  write_system_jsonl(converted, o.stages, out);
  return kOk;
}

int verify_instance(const Options& o, std::ostream& out) {
  std::ifstream in(o.instance);
  if (!in) throw Error("cannot open " + o.instance);
  FiniteInstance inst;
  try {
    inst = FiniteInstance::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(o.instance + ": " + e.what());
  }
  std::vector<IndexPair> r;
  if (o.pairs.empty()) {
    r = maximal_uv_system(inst);
  } else {
    std::ifstream pin(o.pairs);
    if (!pin) throw Error("cannot open " + o.pairs);
    r = read_pairs_jsonl(pin);
  }
  auto violations = check_uv_condition(inst, r);
  for (const auto& v : violations) out << describe(inst, v) << "\n";
  if (violations.empty()) {
    out << "consistent up to bounds (exhaustive over " << r.size() << " pairs)\n";
    return kOk;
  }
  out << violations.size() << " violation(s) found\n";
  return kViolations;
}

int verify_system(const Options& o, std::ostream& out) {
  System s = load_system(o.system, Schedule::by_name(o.schedule));
  if (!s.probe()) throw Error("system '" + s.label() + "' has no known function to verify against");
  std::mt19937_64 rng(o.seed);
  auto samples = sample_points(*s.source(), o.samples, rng, s.source()->dimension() == 1);
  CheckBounds bounds;
  bounds.m_max = o.m_cap;
  bounds.stages = o.check_stages;
  Report report = s.flavor() == Flavor::Metric ? check_metric(s, samples, bounds)
                                                : check_topological(s, samples, bounds);
  out << "system " << s.label() << " (" << flavor_name(s.flavor()) << ", " << s.schedule().name() << ")\n";
  out << report.str();
  return report.empty() ? kOk : kViolations;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (!o.instance.empty()) return verify_instance(o, out);
  if (o.system.empty()) throw ParseError("verify needs --instance or a system");
  return verify_system(o, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximation systems: evaluation, enumeration, conversion and verification", "apxsys"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  Options o;
  auto schedule = [&](CLI::App* c) {
    c->add_option("--schedule", o.schedule, "Radius schedule")->check(CLI::IsMember({"dyadic", "harmonic"}));
  };

  auto* eval = app.add_subcommand("eval", "Evaluate an expression to a rational within r_n");
  eval->add_option("expression", o.expression, "e.g. add(x,y), sq(x), affine(2,1,x), const:5")->required();
  eval->add_option("--input", o.inputs, "Variable bindings in order of appearance: rat:<q> or sqrt:<c>");
  eval->add_option("--n", o.n, "Output precision index");
  eval->add_option("--step-cap", o.step_cap, "Search steps per evaluation before giving up");
  schedule(eval);

  auto* enumerate = app.add_subcommand("enumerate", "Write the first stages of a system as JSONL");
  enumerate->add_option("system", o.system, "Builder name or system JSONL file")->required();
  enumerate->add_option("--stages", o.stages, "Stages written");
  enumerate->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"jsonl"}));
  schedule(enumerate);

  auto* convert = app.add_subcommand("convert", "Convert between metric and topological systems");
  convert->add_option("system", o.system, "Builder name or system JSONL file")->required();
  convert->add_option("--direction", o.direction, "m2t or t2m")
      ->required()
      ->check(CLI::IsMember({"m2t", "t2m"}));
  convert->add_option("--stages", o.stages, "Stages written");
  convert->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"jsonl"}));
  schedule(convert);

  auto* verify = app.add_subcommand("verify", "Check a finite instance or a system against its function");
  verify->add_option("system", o.system, "Builder name or system JSONL file");
  verify->add_option("--instance", o.instance, "Finite instance JSON");
  verify->add_option("--pairs", o.pairs, "JSONL of pairs (i, j); default: the maximal system");
  verify->add_option("--samples", o.samples, "Sample points");
  verify->add_option("--seed", o.seed, "Sampling seed");
  verify->add_option("--m-cap", o.m_cap, "Largest m searched for witnesses");
  verify->add_option("--stages", o.check_stages, "Enumerated stages checked for soundness");
  schedule(verify);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(o, out);
    if (enumerate->parsed()) return cmd_enumerate(o, out);
    if (convert->parsed()) return cmd_convert(o, out);
    return cmd_verify(o, out);
  } catch (const StepCapExceeded& e) {
    err << "error: " << e.what() << "; raise --step-cap\n";
    return kCapExhausted;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace apx::cli
