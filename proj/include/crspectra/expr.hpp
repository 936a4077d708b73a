#pragma once

// Expression language for defining functions and holomorphic maps.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ('^' ['-'] int)?
//   atom   := number | 'i' | ident | ident '(' expr (',' expr)* ')' | '(' expr ')' | '-' atom
//
// z1..z9 are coordinates, `i` is the imaginary unit, conj/re/im/abs2/log/exp/pow
// are functions, and every other identifier is a real parameter.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crspectra/jet.hpp"

namespace crs {

using ParameterMap = std::map<std::string, double>;

enum class NodeKind { variable, conj_variable, literal, parameter, add, sub, mul, div, neg, pow, call };
enum class Func { conj, re, im, log, exp, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::literal;
  int index = 0;       // 1-based coordinate for variable / conj_variable
  Complex value{};     // literal
  std::string name;    // parameter
  Func func = Func::conj;
  int exponent = 0;    // pow
  std::vector<NodePtr> args;
};

class Expr {
 public:
  Expr() = default;
  Expr(NodePtr root, int n) : root_(std::move(root)), n_(n) {}

  const NodePtr& root() const { return root_; }
  int n() const { return n_; }
  bool empty() const { return root_ == nullptr; }

  std::set<std::string> parameters() const;

 private:
  NodePtr root_;
  int n_ = 1;
};

/// Parses `text` for hypersurfaces in C^(n+1); coordinates beyond z(n+1) are rejected.
Expr parse(std::string_view text, int n);

/// Canonical text form; parse(print(e)) reproduces the tree.
std::string print(const Expr& e);
std::string print(const NodePtr& node);

bool structurally_equal(const NodePtr& a, const NodePtr& b);

/// True when the tree contains no conj/re/im/abs2 and no conjugated coordinate.
bool check_holomorphic(const Expr& e);

/// True when the tree is built only from real-closed pieces (parameters, real literals,
/// re/im, e*conj(e), and operations on real subtrees).
bool is_syntactically_real(const NodePtr& node);

Jet eval_jet(const Expr& e, const ParameterMap& params, const Point& point, int order);
Complex evaluate(const Expr& e, const ParameterMap& params, const Point& point);

/// Node builders for programmatic construction.
NodePtr make_literal(Complex v);
NodePtr make_binary(NodeKind kind, NodePtr a, NodePtr b);
NodePtr make_conj(NodePtr a);

}  // namespace crs
