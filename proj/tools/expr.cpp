#include "expr.hpp"

#include <algorithm>
#include <cctype>

#include "apx/engines.hpp"
#include "apx/errors.hpp"
#include "apx/systems.hpp"

namespace apx::cli {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Parsed parse() {
    Parsed p;
    p.root = expr(p);
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression: " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a name");
    if (std::isdigit(static_cast<unsigned char>(s_[start]))) fail("names cannot start with a digit");
    return s_.substr(start, pos_ - start);
  }

  std::string literal() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                s_[pos_] == '+' || s_[pos_] == '/')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a rational");
    return s_.substr(start, pos_ - start);
  }

  Rat rational() {
    std::size_t at = pos_;
    std::string lit = literal();
    try {
      return Rat::parse(lit);
    } catch (const Error&) {
      pos_ = at;
      fail("bad rational '" + lit + "'");
    }
  }

  std::shared_ptr<Expr> expr(Parsed& p) {
    auto e = std::make_shared<Expr>();
    std::string name = identifier();
    skip();
    if (pos_ < s_.size() && s_[pos_] == ':') {
      ++pos_;
      if (name == "const") {
        e->kind = Expr::Kind::Const;
        e->a = rational();
      } else if (name == "rat" || name == "sqrt") {
        e->kind = Expr::Kind::Leaf;
        e->text = name + ":" + literal();
      } else {
        fail("unknown literal kind '" + name + "'");
      }
      return e;
    }
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      e->kind = Expr::Kind::Call;
      e->text = name;
      std::size_t arity;
      if (name == "id" || name == "sq") {
        arity = 1;
      } else if (name == "add" || name == "mul") {
        arity = 2;
      } else if (name == "affine") {
        arity = 1;
        e->a = rational();
        expect(',');
        e->b = rational();
        expect(',');
      } else {
        fail("unknown function '" + name + "'");
      }
      for (std::size_t i = 0; i < arity; ++i) {
        if (i > 0) expect(',');
        e->args.push_back(expr(p));
      }
      expect(')');
      return e;
    }
    e->kind = Expr::Kind::Var;
    e->text = name;
    auto it = std::find(p.variables.begin(), p.variables.end(), name);
    e->var = static_cast<std::size_t>(it - p.variables.begin());
    if (it == p.variables.end()) p.variables.push_back(name);
    return e;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Parsed parse_expression(const std::string& text) { return Parser(text).parse(); }

AlphaName input_name(const std::string& spec, const Schedule& sch) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("input '" + spec + "': expected rat:<q> or sqrt:<c>");
  std::string kind = spec.substr(0, colon);
  Rat value = Rat::parse(spec.substr(colon + 1));
  if (kind == "rat") return constant_name(RationalSpace::scalar(), sch, Point{value});
  if (kind == "sqrt") {
    if (value.sign() < 0) throw ParseError("input '" + spec + "': square root of a negative number");
    return sqrt_name(value, sch);
  }
  throw ParseError("input '" + spec + "': unknown kind '" + kind + "'");
}

AlphaName compile(const Expr& e, const std::vector<AlphaName>& inputs, const Schedule& sch,
                  std::uint64_t step_cap) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return constant_name(RationalSpace::scalar(), sch, Point{e.a});
    case Expr::Kind::Leaf:
      return input_name(e.text, sch);
    case Expr::Kind::Var:
      return inputs.at(e.var);
    case Expr::Kind::Call:
      break;
  }
  std::vector<AlphaName> args;
  for (const auto& a : e.args) args.push_back(compile(*a, inputs, sch, step_cap));
  if (e.text == "id") return evaluate_metric(id_system(sch), args[0], step_cap);
  if (e.text == "sq") return evaluate_metric(sq_system(sch), args[0], step_cap);
  if (e.text == "affine") return evaluate_metric(affine_system(e.a, e.b, sch), args[0], step_cap);
  AlphaName pair = product_name(args[0], args[1], RationalSpace::plane());
  if (e.text == "add") return evaluate_metric(add_system(sch), pair, step_cap);
  return evaluate_metric(mul_system(sch), pair, step_cap);
}

}  // namespace apx::cli
