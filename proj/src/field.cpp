#include "crspectra/field.hpp"

#include "crspectra/cr_frame.hpp"
#include "crspectra/error.hpp"

namespace crs {

ExprField::ExprField(Expr expr, ParameterMap params) : expr_(std::move(expr)), params_(std::move(params)) {
  for (const auto& name : expr_.parameters()) {
    if (!params_.count(name)) throw Error(Errc::UnboundParameter, "parameter '" + name + "' has no value");
  }
}

Jet ExprField::jet(const Point& point, int order) const {
  Jet j = eval_jet(expr_, params_, point, order);
  if (!j.is_real()) {
    throw Error(Errc::NotRealValued, "defining function must be syntactically real: " + print(expr_));
  }
  return j;
}

double ExprField::value(const Point& point) const { return evaluate(expr_, params_, point).real(); }

Jet NormalizedField::jet(const Point& point, int order) const {
  if (order > max_order()) {
    throw Error(Errc::OrderExceeded, "normalized field supports jets up to order " + std::to_string(max_order()));
  }
  const Jet rho = base_->jet(point, order + 2);
  const Jet J = fefferman_det_jet(rho, order);
  if (J.value().real() <= kDegenerateJ) {
    throw Error(Errc::DegenerateJ, "Fefferman determinant " + std::to_string(J.value().real()) + " is not positive");
  }
  const double s = -1.0 / (n() + 2);
  return pow_real(J, s) * rho.truncated(order);
}

FieldPtr make_field(const std::string& text, int n, const ParameterMap& params) {
  return std::make_shared<ExprField>(parse(text, n), params);
}

}  // namespace crs
