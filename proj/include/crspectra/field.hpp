#pragma once

#include <memory>

#include "crspectra/expr.hpp"
#include "crspectra/jet.hpp"

namespace crs {

/// A real scalar field on an open set of C^(n+1), evaluated through its jets.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual int n() const = 0;
  /// Highest jet order the field can deliver.
  virtual int max_order() const = 0;
  virtual Jet jet(const Point& point, int order) const = 0;
  virtual double value(const Point& point) const { return jet(point, 0).value().real(); }
};

using FieldPtr = std::shared_ptr<const ScalarField>;

class ExprField : public ScalarField {
 public:
  ExprField(Expr expr, ParameterMap params);

  int n() const override { return expr_.n(); }
  int max_order() const override { return kMaxOrder; }
  Jet jet(const Point& point, int order) const override;
  double value(const Point& point) const override;

  const Expr& expr() const { return expr_; }
  const ParameterMap& params() const { return params_; }

 private:
  Expr expr_;
  ParameterMap params_;
};

/// J[rho]^(-1/(n+2)) * rho, the defining function whose Fefferman determinant is 1 on M.
class NormalizedField : public ScalarField {
 public:
  explicit NormalizedField(FieldPtr base) : base_(std::move(base)) {}

  int n() const override { return base_->n(); }
  int max_order() const override { return base_->max_order() - 2; }
  Jet jet(const Point& point, int order) const override;

 private:
  FieldPtr base_;
};

/// Convenience: parse `text` and bind `params`.
FieldPtr make_field(const std::string& text, int n, const ParameterMap& params = {});

}  // namespace crs
