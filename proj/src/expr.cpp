#include "crspectra/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "crspectra/error.hpp"

namespace crs {

namespace {

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_coordinate_name(std::string_view s) {
  if (s.size() < 2 || s[0] != 'z') return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, int n) : s_(text), n_(n) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= s_.size()) fail(Errc::SyntaxError, "empty expression");
    NodePtr e = expr();
    skip_ws();
    if (pos_ < s_.size()) fail(Errc::SyntaxError, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(Errc code, const std::string& msg) const { throw ParseError(code, pos_, msg); }
  [[noreturn]] void fail_at(Errc code, std::size_t at, const std::string& msg) const {
    throw ParseError(code, at, msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) fail(Errc::SyntaxError, std::string("expected '") + c + "' before end of input");
      fail(Errc::SyntaxError, std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
      skip_ws();
    }
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) fail_at(Errc::SyntaxError, start, "exponent must be an integer literal");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      fail_at(Errc::SyntaxError, start, "exponent must be an integer literal; use pow(x, s) for real powers");
    }
    if (pos_ - digits > 6) fail_at(Errc::SyntaxError, start, "exponent too large");
    int k = std::stoi(std::string(s_.substr(digits, pos_ - digits)));
    Node n;
    n.kind = NodeKind::pow;
    n.exponent = negative ? -k : k;
    n.args = {base};
    return make(std::move(n));
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ == start + 1 && s_[start] == '.') fail_at(Errc::SyntaxError, start, "malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      const std::size_t exp_digits = p;
      while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
      if (p == exp_digits) fail_at(Errc::SyntaxError, pos_, "malformed exponent in number");
      pos_ = p;
    }
    const std::string text(s_.substr(start, pos_ - start));
    return make_literal(std::strtod(text.c_str(), nullptr));
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail(Errc::SyntaxError, "unexpected end of input");
    const char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      Node n;
      n.kind = NodeKind::neg;
      n.args = {atom()};
      return make(std::move(n));
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(Errc::SyntaxError, std::string("unexpected '") + c + "'");
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));
    skip_ws();
    const bool call = pos_ < s_.size() && s_[pos_] == '(';

    if (call) return function_call(name, start);
    if (name == "i") return make_literal(Complex(0.0, 1.0));
    if (is_coordinate_name(name)) {
      const int index = name.size() > 3 ? 1000 : std::stoi(name.substr(1));
      if (index < 1 || index > n_ + 1) {
        fail_at(Errc::IndexOutOfRange, start,
                "coordinate " + name + " outside z1..z" + std::to_string(n_ + 1) + " for n = " + std::to_string(n_));
      }
      Node n;
      n.kind = NodeKind::variable;
      n.index = index;
      return make(std::move(n));
    }
    static const std::set<std::string> functions = {"conj", "re", "im", "abs2", "log", "exp", "pow"};
    if (functions.count(name)) fail_at(Errc::SyntaxError, start, "function '" + name + "' requires arguments");
    Node n;
    n.kind = NodeKind::parameter;
    n.name = name;
    return make(std::move(n));
  }

  NodePtr function_call(const std::string& name, std::size_t start) {
    static const std::map<std::string, std::pair<Func, int>> table = {
        {"conj", {Func::conj, 1}}, {"re", {Func::re, 1}},   {"im", {Func::im, 1}},  {"abs2", {Func::conj, 1}},
        {"log", {Func::log, 1}},   {"exp", {Func::exp, 1}}, {"pow", {Func::pow, 2}},
    };
    auto it = table.find(name);
    if (it == table.end()) fail_at(Errc::UnknownIdentifier, start, "unknown function '" + name + "'");
    expect('(');
    std::vector<NodePtr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    if (static_cast<int>(args.size()) != it->second.second) {
      fail_at(Errc::SyntaxError, start,
              name + " expects " + std::to_string(it->second.second) + " argument(s), got " +
                  std::to_string(args.size()));
    }
    if (name == "abs2") return make_binary(NodeKind::mul, args[0], make_conj(args[0]));
    if (name == "conj") return make_conj(args[0]);
    Node n;
    n.kind = NodeKind::call;
    n.func = it->second.first;
    n.args = std::move(args);
    return make(std::move(n));
  }

  std::string_view s_;
  int n_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::conj: return "conj";
    case Func::re: return "re";
    case Func::im: return "im";
    case Func::log: return "log";
    case Func::exp: return "exp";
    case Func::pow: return "pow";
  }
  return "?";
}

std::string print_atom(const NodePtr& n);

std::string print_inner(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::add: return print_atom(n->args[0]) + " + " + print_atom(n->args[1]);
    case NodeKind::sub: return print_atom(n->args[0]) + " - " + print_atom(n->args[1]);
    case NodeKind::mul: return print_atom(n->args[0]) + "*" + print_atom(n->args[1]);
    case NodeKind::div: return print_atom(n->args[0]) + "/" + print_atom(n->args[1]);
    case NodeKind::pow: return print_atom(n->args[0]) + "^" + std::to_string(n->exponent);
    default: return print_atom(n);
  }
}

std::string print_atom(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::variable: return "z" + std::to_string(n->index);
    case NodeKind::conj_variable: return "conj(z" + std::to_string(n->index) + ")";
    case NodeKind::literal:
      if (n->value == Complex(0.0, 1.0)) return "i";
      if (n->value.imag() == 0.0) return format_number(n->value.real());
      return "(" + format_number(n->value.real()) + " + " + format_number(n->value.imag()) + "*i)";
    case NodeKind::parameter: return n->name;
    case NodeKind::neg: return "-" + print_atom(n->args[0]);
    case NodeKind::call: {
      std::string s = std::string(func_name(n->func)) + "(";
      for (std::size_t k = 0; k < n->args.size(); ++k) {
        if (k) s += ", ";
        s += print_inner(n->args[k]);
      }
      return s + ")";
    }
    default: return "(" + print_inner(n) + ")";
  }
}

bool conjugate_pair(const NodePtr& a, const NodePtr& b) {
  if (a->kind == NodeKind::variable && b->kind == NodeKind::conj_variable) return a->index == b->index;
  if (b->kind == NodeKind::call && b->func == Func::conj) return structurally_equal(a, b->args[0]);
  return false;
}

// Text form of the node (or of its conjugate) with sums and products in sorted order.
std::string canonical(const NodePtr& n, bool conjugate) {
  auto flatten = [&](auto&& self, const NodePtr& m, NodeKind kind, bool negate, std::vector<std::string>& out) -> void {
    if (m->kind == kind || (kind == NodeKind::add && m->kind == NodeKind::sub)) {
      self(self, m->args[0], kind, negate, out);
      self(self, m->args[1], kind, m->kind == NodeKind::sub ? !negate : negate, out);
      return;
    }
    out.push_back((negate ? "-" : "+") + canonical(m, conjugate));
  };
  auto joined = [](const char* tag, std::vector<std::string> parts) {
    std::sort(parts.begin(), parts.end());
    std::string s = tag;
    s += "(";
    for (const auto& p : parts) s += p + ";";
    return s + ")";
  };
  switch (n->kind) {
    case NodeKind::variable: return (conjugate ? "c" : "z") + std::to_string(n->index);
    case NodeKind::conj_variable: return (conjugate ? "z" : "c") + std::to_string(n->index);
    case NodeKind::literal: {
      const double im = n->value.imag() == 0.0 ? 0.0 : (conjugate ? -n->value.imag() : n->value.imag());
      char buf[80];
      std::snprintf(buf, sizeof buf, "L%.17g,%.17g", n->value.real(), im);
      return buf;
    }
    case NodeKind::parameter: return "p:" + n->name;
    case NodeKind::add:
    case NodeKind::sub: {
      std::vector<std::string> parts;
      flatten(flatten, n, NodeKind::add, false, parts);
      return joined("A", std::move(parts));
    }
    case NodeKind::mul: {
      std::vector<std::string> parts;
      flatten(flatten, n, NodeKind::mul, false, parts);
      return joined("M", std::move(parts));
    }
    case NodeKind::div: return "D(" + canonical(n->args[0], conjugate) + ";" + canonical(n->args[1], conjugate) + ")";
    case NodeKind::neg: return "N(" + canonical(n->args[0], conjugate) + ")";
    case NodeKind::pow: return "P" + std::to_string(n->exponent) + "(" + canonical(n->args[0], conjugate) + ")";
    case NodeKind::call:
      switch (n->func) {
        case Func::conj: return canonical(n->args[0], !conjugate);
        case Func::re: return "re(" + std::min(canonical(n->args[0], false), canonical(n->args[0], true)) + ")";
        case Func::im: return "im(" + canonical(n->args[0], false) + ")";
        case Func::log: return "log(" + canonical(n->args[0], conjugate) + ")";
        case Func::exp: return "exp(" + canonical(n->args[0], conjugate) + ")";
        case Func::pow:
          return "pw(" + canonical(n->args[0], conjugate) + ";" + canonical(n->args[1], conjugate) + ")";
      }
  }
  return "?";
}

// A sum such as w + conj(w) that equals its own conjugate up to reordering.
bool self_conjugate(const NodePtr& n) { return canonical(n, false) == canonical(n, true); }

bool has_variable(const NodePtr& n) {
  if (n->kind == NodeKind::variable || n->kind == NodeKind::conj_variable) return true;
  for (const auto& a : n->args) {
    if (has_variable(a)) return true;
  }
  return false;
}

double lookup(const ParameterMap& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) throw Error(Errc::UnboundParameter, "parameter '" + name + "' has no value");
  return it->second;
}

void check_point(const Expr& e, const Point& point) {
  if (static_cast<int>(point.size()) != e.n() + 1) {
    throw Error(Errc::InvalidArgument, "point has " + std::to_string(point.size()) + " coordinates, expected " +
                                           std::to_string(e.n() + 1));
  }
}

Complex checked_log(Complex v, bool real) {
  if (real) {
    if (!(v.real() > 0.0)) throw Error(Errc::LogOfNonpositive, "log of nonpositive value " + format_number(v.real()));
    return std::log(v.real());
  }
  if (std::abs(v) < 1e-300 || (v.imag() == 0.0 && v.real() <= 0.0)) {
    throw Error(Errc::LogOfNonpositive, "log argument on the branch cut");
  }
  return std::log(v);
}

struct Evaluated {
  Jet jet;
  bool real;
};

class JetEvaluator {
 public:
  JetEvaluator(const Expr& e, const ParameterMap& params, const Point& point, int order)
      : e_(e), params_(params), point_(point), order_(order) {}

  Evaluated eval(const NodePtr& n) {
    Evaluated out = eval_raw(n);
    if (out.real && !out.jet.is_real()) out.jet.make_real();
    return out;
  }

 private:
  Evaluated eval_raw(const NodePtr& n) {
    switch (n->kind) {
      case NodeKind::variable:
        return {Jet::variable(point_, n->index, VarKind::holomorphic, order_), false};
      case NodeKind::conj_variable:
        return {Jet::variable(point_, n->index, VarKind::antiholomorphic, order_), false};
      case NodeKind::literal:
        return {Jet::constant(point_, n->value, order_), n->value.imag() == 0.0};
      case NodeKind::parameter:
        return {Jet::constant(point_, lookup(params_, n->name), order_), true};
      case NodeKind::neg: {
        Evaluated a = eval(n->args[0]);
        return {-a.jet, a.real};
      }
      case NodeKind::add:
      case NodeKind::sub:
      case NodeKind::mul:
      case NodeKind::div: {
        Evaluated a = eval(n->args[0]);
        Evaluated b = eval(n->args[1]);
        const bool real = (a.real && b.real) || (n->kind == NodeKind::mul && conjugate_pair(n->args[0], n->args[1])) ||
                          self_conjugate(n);
        switch (n->kind) {
          case NodeKind::add: return {a.jet + b.jet, real};
          case NodeKind::sub: return {a.jet - b.jet, real};
          case NodeKind::mul: return {a.jet * b.jet, real};
          default: return {a.jet / b.jet, real};
        }
      }
      case NodeKind::pow: {
        Evaluated a = eval(n->args[0]);
        return {pow(a.jet, n->exponent), a.real};
      }
      case NodeKind::call: return eval_call(n);
    }
    throw Error(Errc::InvalidArgument, "malformed expression node");
  }

  Evaluated eval_call(const NodePtr& n) {
    if (n->func == Func::pow) {
      Evaluated base = eval(n->args[0]);
      if (has_variable(n->args[1])) {
        throw Error(Errc::InvalidArgument, "pow exponent must not depend on coordinates");
      }
      const Complex s = evaluate(Expr(n->args[1], e_.n()), params_, point_);
      if (s.imag() != 0.0) throw Error(Errc::InvalidArgument, "pow exponent must be real");
      if (s.real() == std::round(s.real()) && std::abs(s.real()) <= 64) {
        return {pow(base.jet, static_cast<int>(s.real())), base.real};
      }
      if (!base.real) throw Error(Errc::NotRealValued, "pow with a non-integer exponent needs a real base");
      return {pow_real(base.jet, s.real()), true};
    }
    Evaluated a = eval(n->args[0]);
    switch (n->func) {
      case Func::conj: return {conj(a.jet), a.real};
      case Func::re: return {re(a.jet), true};
      case Func::im: return {im(a.jet), true};
      case Func::log: return {log(a.jet), a.real};
      case Func::exp: return {exp(a.jet), a.real};
      default: break;
    }
    throw Error(Errc::InvalidArgument, "malformed function node");
  }

  const Expr& e_;
  const ParameterMap& params_;
  const Point& point_;
  int order_;
};

Complex eval_complex(const NodePtr& n, const ParameterMap& params, const Point& point) {
  switch (n->kind) {
    case NodeKind::variable: return point[n->index - 1];
    case NodeKind::conj_variable: return std::conj(point[n->index - 1]);
    case NodeKind::literal: return n->value;
    case NodeKind::parameter: return lookup(params, n->name);
    case NodeKind::neg: return -eval_complex(n->args[0], params, point);
    case NodeKind::add: return eval_complex(n->args[0], params, point) + eval_complex(n->args[1], params, point);
    case NodeKind::sub: return eval_complex(n->args[0], params, point) - eval_complex(n->args[1], params, point);
    case NodeKind::mul: {
      const Complex a = eval_complex(n->args[0], params, point);
      const Complex b = eval_complex(n->args[1], params, point);
      if (conjugate_pair(n->args[0], n->args[1])) return std::norm(a);
      return a * b;
    }
    case NodeKind::div: {
      const Complex b = eval_complex(n->args[1], params, point);
      if (std::abs(b) < 1e-300) throw Error(Errc::DivisionByZeroJet, "division by zero");
      return eval_complex(n->args[0], params, point) / b;
    }
    case NodeKind::pow: {
      const Complex a = eval_complex(n->args[0], params, point);
      if (n->exponent < 0 && std::abs(a) < 1e-300) throw Error(Errc::DivisionByZeroJet, "division by zero");
      Complex r = 1.0;
      const int k = std::abs(n->exponent);
      for (int t = 0; t < k; ++t) r *= a;
      return n->exponent < 0 ? 1.0 / r : r;
    }
    case NodeKind::call: {
      const Complex a = eval_complex(n->args[0], params, point);
      const bool real = is_syntactically_real(n->args[0]);
      switch (n->func) {
        case Func::conj: return std::conj(a);
        case Func::re: return a.real();
        case Func::im: return a.imag();
        case Func::log: return checked_log(a, real);
        case Func::exp: return real ? Complex(std::exp(a.real())) : std::exp(a);
        case Func::pow: {
          const Complex s = eval_complex(n->args[1], params, point);
          if (s.imag() != 0.0) throw Error(Errc::InvalidArgument, "pow exponent must be real");
          if (s.real() == std::round(s.real()) && std::abs(s.real()) <= 64) {
            const int k = static_cast<int>(s.real());
            if (k < 0 && std::abs(a) < 1e-300) throw Error(Errc::DivisionByZeroJet, "division by zero");
            Complex r = 1.0;
            for (int t = 0; t < std::abs(k); ++t) r *= a;
            return k < 0 ? 1.0 / r : r;
          }
          if (!real) throw Error(Errc::NotRealValued, "pow with a non-integer exponent needs a real base");
          if (!(a.real() > 0.0)) throw Error(Errc::LogOfNonpositive, "pow of nonpositive value");
          return std::pow(a.real(), s.real());
        }
      }
    }
  }
  throw Error(Errc::InvalidArgument, "malformed expression node");
}

}  // namespace

std::set<std::string> Expr::parameters() const {
  std::set<std::string> out;
  std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
    if (n->kind == NodeKind::parameter) out.insert(n->name);
    for (const auto& a : n->args) walk(a);
  };
  if (root_) walk(root_);
  return out;
}

Expr parse(std::string_view text, int n) {
  if (n < 1 || n + 1 > 9) throw Error(Errc::InvalidArgument, "dimension n must lie in [1, 8]");
  return Expr(Parser(text, n).run(), n);
}

std::string print(const NodePtr& node) { return print_inner(node); }

std::string print(const Expr& e) { return print(e.root()); }

bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->args.size() != b->args.size()) return false;
  switch (a->kind) {
    case NodeKind::variable:
    case NodeKind::conj_variable:
      if (a->index != b->index) return false;
      break;
    case NodeKind::literal:
      if (a->value != b->value) return false;
      break;
    case NodeKind::parameter:
      if (a->name != b->name) return false;
      break;
    case NodeKind::pow:
      if (a->exponent != b->exponent) return false;
      break;
    case NodeKind::call:
      if (a->func != b->func) return false;
      break;
    default: break;
  }
  for (std::size_t k = 0; k < a->args.size(); ++k) {
    if (!structurally_equal(a->args[k], b->args[k])) return false;
  }
  return true;
}

bool check_holomorphic(const Expr& e) {
  std::function<bool(const NodePtr&)> ok = [&](const NodePtr& n) {
    if (n->kind == NodeKind::conj_variable) return false;
    if (n->kind == NodeKind::call && (n->func == Func::conj || n->func == Func::re || n->func == Func::im)) {
      return false;
    }
    for (const auto& a : n->args) {
      if (!ok(a)) return false;
    }
    return true;
  };
  return !e.empty() && ok(e.root());
}

bool is_syntactically_real(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::variable:
    case NodeKind::conj_variable: return false;
    case NodeKind::literal: return n->value.imag() == 0.0;
    case NodeKind::parameter: return true;
    case NodeKind::mul:
      if (conjugate_pair(n->args[0], n->args[1])) return true;
      [[fallthrough]];
    case NodeKind::add:
    case NodeKind::sub:
    case NodeKind::div:
      return (is_syntactically_real(n->args[0]) && is_syntactically_real(n->args[1])) || self_conjugate(n);
    case NodeKind::neg:
    case NodeKind::pow: return is_syntactically_real(n->args[0]);
    case NodeKind::call:
      if (n->func == Func::re || n->func == Func::im) return true;
      return is_syntactically_real(n->args[0]);
  }
  return false;
}

Jet eval_jet(const Expr& e, const ParameterMap& params, const Point& point, int order) {
  check_point(e, point);
  JetEvaluator ev(e, params, point, order);
  return ev.eval(e.root()).jet;
}

Complex evaluate(const Expr& e, const ParameterMap& params, const Point& point) {
  check_point(e, point);
  const Complex v = eval_complex(e.root(), params, point);
  return is_syntactically_real(e.root()) ? Complex(v.real(), 0.0) : v;
}

NodePtr make_literal(Complex v) {
  Node n;
  n.kind = NodeKind::literal;
  n.value = v;
  return make(std::move(n));
}

NodePtr make_binary(NodeKind kind, NodePtr a, NodePtr b) {
  Node n;
  n.kind = kind;
  n.args = {std::move(a), std::move(b)};
  return make(std::move(n));
}

NodePtr make_conj(NodePtr a) {
  if (a->kind == NodeKind::variable) {
    Node n;
    n.kind = NodeKind::conj_variable;
    n.index = a->index;
    return make(std::move(n));
  }
  Node n;
  n.kind = NodeKind::call;
  n.func = Func::conj;
  n.args = {std::move(a)};
  return make(std::move(n));
}

}  // namespace crs
