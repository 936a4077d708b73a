#include "crspectra/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "crspectra/error.hpp"

namespace crs {

namespace {

constexpr double kZeroJetTol = 1e-300;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void check_space(int dim, int order) {
  if (dim < 1 || dim > kMaxDim) {
    throw Error(Errc::InvalidArgument,
                "jet dimension " + std::to_string(dim) + " outside [1, " + std::to_string(kMaxDim) + "]");
  }
  if (order < 0 || order > kMaxOrder) {
    throw Error(Errc::OrderExceeded,
                "jet order " + std::to_string(order) + " outside [0, " + std::to_string(kMaxOrder) + "]");
  }
}

void check_compatible(const Jet& a, const Jet& b) {
  if (!a.valid() || !b.valid()) throw Error(Errc::InvalidArgument, "operation on an empty jet");
  if (&a.layout() != &b.layout()) {
    throw Error(Errc::OrderMismatch, "jets differ in order or dimension (" + std::to_string(a.order()) +
                                         " vs " + std::to_string(b.order()) + ")");
  }
  if (&a.point() != &b.point() && a.point() != b.point()) {
    throw Error(Errc::InvalidArgument, "jets expanded at different base points");
  }
}

// Evaluates sum_k coeffs[k] * g^k for a jet g with zero constant term (Horner).
Jet nilpotent_series(const Jet& g, std::span<const Complex> coeffs) {
  Jet result = Jet::constant_like(g, coeffs.back());
  for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k) {
    result *= g;
    result += coeffs[k];
  }
  return result;
}

Jet nilpotent_part(const Jet& f) {
  std::vector<Complex> c(f.coefficients().begin(), f.coefficients().end());
  c[0] = 0.0;
  return f.with_coefficients(std::move(c), f.is_real());
}

// log and pow_real share the domain rule: real jets need a positive constant term,
// complex jets a constant term off the closed negative real axis.
void check_log_domain(const Jet& f, const char* what) {
  const Complex c0 = f.value();
  if (f.is_real()) {
    if (!(c0.real() > 0.0)) {
      throw Error(Errc::LogOfNonpositive,
                  std::string(what) + " of a real jet with constant term " + std::to_string(c0.real()));
    }
    return;
  }
  if (std::abs(c0) < kZeroJetTol || (c0.imag() == 0.0 && c0.real() <= 0.0)) {
    throw Error(Errc::LogOfNonpositive, std::string(what) + " of a jet with constant term on the branch cut");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::initializer_list<int> a, std::initializer_list<int> b) {
  if (a.size() > kMaxDim || b.size() > kMaxDim) throw Error(Errc::InvalidArgument, "multi-index too long");
  std::copy(a.begin(), a.end(), alpha.begin());
  std::copy(b.begin(), b.end(), beta.begin());
}

int MultiIndex::total() const {
  return std::accumulate(alpha.begin(), alpha.end(), 0) + std::accumulate(beta.begin(), beta.end(), 0);
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int v : alpha) f *= crs::factorial(v);
  for (int v : beta) f *= crs::factorial(v);
  return f;
}

MultiIndex MultiIndex::swapped() const {
  MultiIndex s;
  s.alpha = beta;
  s.beta = alpha;
  return s;
}

MultiIndex MultiIndex::unit(VarKind kind, int index0) {
  MultiIndex mi;
  (kind == VarKind::holomorphic ? mi.alpha : mi.beta).at(index0) = 1;
  return mi;
}

// ---------------------------------------------------------------------------
// JetLayout

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  const int nvars = 2 * dim;
  // Graded enumeration; inside one degree, lexicographically descending exponent vectors.
  std::vector<int> exps(nvars, 0);
  for (int deg = 0; deg <= order; ++deg) {
    auto emit = [&](auto&& self, int var, int remaining) -> void {
      if (var == nvars - 1) {
        exps[var] = remaining;
        MultiIndex mi;
        for (int v = 0; v < dim; ++v) {
          mi.alpha[v] = exps[v];
          mi.beta[v] = exps[dim + v];
        }
        indices_.push_back(mi);
        degrees_.push_back(deg);
        return;
      }
      for (int e = remaining; e >= 0; --e) {
        exps[var] = e;
        self(self, var + 1, remaining - e);
      }
    };
    emit(emit, 0, deg);
  }

  int table = 1;
  for (int v = 0; v < nvars; ++v) table *= (order + 1);
  lookup_.assign(table, -1);
  for (int i = 0; i < size(); ++i) lookup_[encode(indices_[i])] = i;

  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      MultiIndex sum;
      for (int v = 0; v < dim; ++v) {
        sum.alpha[v] = indices_[i].alpha[v] + indices_[j].alpha[v];
        sum.beta[v] = indices_[i].beta[v] + indices_[j].beta[v];
      }
      mul_terms_.push_back({i, j, lookup_[encode(sum)]});
    }
  }

  conj_perm_.resize(size());
  for (int i = 0; i < size(); ++i) conj_perm_[i] = lookup_[encode(indices_[i].swapped())];
}

int JetLayout::encode(const MultiIndex& mi) const {
  int code = 0;
  int base = 1;
  for (int v = 0; v < dim_; ++v) {
    code += mi.alpha[v] * base;
    base *= (order_ + 1);
  }
  for (int v = 0; v < dim_; ++v) {
    code += mi.beta[v] * base;
    base *= (order_ + 1);
  }
  return code;
}

int JetLayout::index_of(const MultiIndex& mi) const {
  if (mi.total() > order_) return -1;
  for (int v = dim_; v < kMaxDim; ++v) {
    if (mi.alpha[v] != 0 || mi.beta[v] != 0) return -1;
  }
  for (int v = 0; v < dim_; ++v) {
    if (mi.alpha[v] < 0 || mi.beta[v] < 0) return -1;
  }
  return lookup_[encode(mi)];
}

std::shared_ptr<const JetLayout> JetLayout::get(int dim, int order) {
  check_space(dim, order);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(dim, order);
  return slot;
}

// ---------------------------------------------------------------------------
// Jet construction and access

Jet Jet::constant(const Point& point, Complex value, int order) {
  Jet j;
  j.layout_ = JetLayout::get(static_cast<int>(point.size()), order);
  j.point_ = std::make_shared<const Point>(point);
  j.c_.assign(j.layout_->size(), Complex{});
  j.c_[0] = value;
  j.real_ = value.imag() == 0.0;
  return j;
}

Jet Jet::constant_like(const Jet& like, Complex value) {
  Jet j;
  j.layout_ = like.layout_;
  j.point_ = like.point_;
  j.c_.assign(j.layout_->size(), Complex{});
  j.c_[0] = value;
  j.real_ = value.imag() == 0.0;
  return j;
}

Jet Jet::variable(const Point& point, int index, VarKind kind, int order) {
  const int dim = static_cast<int>(point.size());
  if (index < 1 || index > dim) {
    throw Error(Errc::IndexOutOfRange,
                "coordinate index " + std::to_string(index) + " outside [1, " + std::to_string(dim) + "]");
  }
  const Complex base = kind == VarKind::holomorphic ? point[index - 1] : std::conj(point[index - 1]);
  Jet j = constant(point, base, order);
  j.real_ = false;
  if (order >= 1) j.c_[j.layout_->index_of(MultiIndex::unit(kind, index - 1))] = 1.0;
  return j;
}

Jet Jet::from_coefficients(const Point& point, int order, std::vector<Complex> coeffs, bool real_valued) {
  Jet j = constant(point, 0.0, order);
  if (static_cast<int>(coeffs.size()) != j.layout_->size()) {
    throw Error(Errc::InvalidArgument, "coefficient vector has wrong length");
  }
  j.c_ = std::move(coeffs);
  j.real_ = false;
  if (real_valued) j.make_real();
  return j;
}

Jet Jet::with_coefficients(std::vector<Complex> coeffs, bool real_valued) const {
  Jet j;
  j.layout_ = layout_;
  j.point_ = point_;
  j.c_ = std::move(coeffs);
  j.real_ = false;
  if (real_valued) j.make_real();
  return j;
}

Jet& Jet::make_real() {
  const auto perm = layout_->conj_permutation();
  std::vector<Complex> sym(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) sym[i] = 0.5 * (c_[i] + std::conj(c_[perm[i]]));
  c_ = std::move(sym);
  real_ = true;
  return *this;
}

Complex Jet::coeff(const MultiIndex& mi) const {
  const int idx = layout_->index_of(mi);
  if (idx < 0) {
    if (mi.total() > order()) {
      throw Error(Errc::OrderExceeded,
                  "coefficient of order " + std::to_string(mi.total()) + " requested from a jet of order " +
                      std::to_string(order()));
    }
    throw Error(Errc::IndexOutOfRange, "multi-index does not fit the jet dimension");
  }
  return c_[idx];
}

Complex Jet::partial(const MultiIndex& mi) const { return mi.factorial() * coeff(mi); }

Complex Jet::d(int j) const { return coeff(MultiIndex::unit(VarKind::holomorphic, j)); }

Complex Jet::dbar(int k) const { return coeff(MultiIndex::unit(VarKind::antiholomorphic, k)); }

Complex Jet::d_dbar(int j, int k) const {
  MultiIndex mi;
  mi.alpha[j] = 1;
  mi.beta[k] = 1;
  return coeff(mi);
}

Jet Jet::derivative(VarKind kind, int index0) const {
  if (order() < 1) throw Error(Errc::OrderExceeded, "cannot differentiate a jet of order 0");
  if (index0 < 0 || index0 >= dim()) throw Error(Errc::IndexOutOfRange, "derivative index out of range");
  Jet out;
  out.layout_ = JetLayout::get(dim(), order() - 1);
  out.point_ = point_;
  out.c_.resize(out.layout_->size());
  for (int i = 0; i < out.layout_->size(); ++i) {
    MultiIndex up = out.layout_->multi_index(i);
    int& slot = (kind == VarKind::holomorphic ? up.alpha : up.beta)[index0];
    ++slot;
    out.c_[i] = static_cast<double>(slot) * c_[layout_->index_of(up)];
  }
  out.real_ = false;
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) {
    throw Error(Errc::OrderExceeded, "cannot raise jet order by truncation");
  }
  Jet out;
  out.layout_ = JetLayout::get(dim(), new_order);
  out.point_ = point_;
  // Graded layout: the lower-order coefficients form a prefix.
  out.c_.assign(c_.begin(), c_.begin() + out.layout_->size());
  out.real_ = real_;
  return out;
}

// ---------------------------------------------------------------------------
// Arithmetic

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& v : out.c_) v = -v;
  return out;
}

Jet& Jet::operator+=(const Jet& other) {
  check_compatible(*this, other);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  real_ = real_ && other.real_;
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  check_compatible(*this, other);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  real_ = real_ && other.real_;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  Jet out;
  out.layout_ = a.layout_;
  out.point_ = a.point_;
  out.c_.assign(a.c_.size(), Complex{});
  const Complex* pa = a.c_.data();
  const Complex* pb = b.c_.data();
  Complex* po = out.c_.data();
  for (const auto& t : a.layout_->mul_terms()) po[t.out] += pa[t.lhs] * pb[t.rhs];
  out.real_ = a.real_ && b.real_;
  if (out.real_) out.make_real();
  return out;
}

Jet& Jet::operator*=(const Jet& other) {
  *this = *this * other;
  return *this;
}

Jet& Jet::operator*=(Complex s) {
  for (auto& v : c_) v *= s;
  real_ = real_ && s.imag() == 0.0;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Jet& Jet::operator+=(Complex s) {
  c_[0] += s;
  real_ = real_ && s.imag() == 0.0;
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet reciprocal(const Jet& f) {
  const Complex c0 = f.value();
  if (std::abs(c0) < kZeroJetTol) throw Error(Errc::DivisionByZeroJet, "reciprocal of a jet with zero constant term");
  std::vector<Complex> coeffs(f.order() + 1);
  Complex p = 1.0 / c0;
  for (int k = 0; k <= f.order(); ++k) {
    coeffs[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
    p /= c0;
  }
  Jet out = nilpotent_series(nilpotent_part(f), coeffs);
  if (f.is_real()) out.make_real();
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  return a * reciprocal(b);
}

Jet exp(const Jet& f) {
  std::vector<Complex> coeffs(f.order() + 1);
  const Complex e0 = std::exp(f.value());
  for (int k = 0; k <= f.order(); ++k) coeffs[k] = e0 / factorial(k);
  Jet out = nilpotent_series(nilpotent_part(f), coeffs);
  if (f.is_real()) out.make_real();
  return out;
}

Jet log(const Jet& f) {
  check_log_domain(f, "log");
  const Complex c0 = f.is_real() ? Complex(f.value().real(), 0.0) : f.value();
  std::vector<Complex> coeffs(f.order() + 1);
  coeffs[0] = std::log(c0);
  Complex p = 1.0 / c0;
  for (int k = 1; k <= f.order(); ++k) {
    coeffs[k] = (k % 2 == 1 ? 1.0 : -1.0) * p / static_cast<double>(k);
    p /= c0;
  }
  Jet out = nilpotent_series(nilpotent_part(f), coeffs);
  if (f.is_real()) out.make_real();
  return out;
}

Jet pow(const Jet& f, int k) {
  if (k < 0) return pow(reciprocal(f), -k);
  Jet result = Jet::constant_like(f, 1.0);
  Jet base = f;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  if (f.is_real()) result.make_real();
  return result;
}

Jet pow_real(const Jet& f, double s) {
  if (!f.is_real()) {
    throw Error(Errc::NotRealValued, "pow_real requires a real-valued jet");
  }
  check_log_domain(f, "pow_real");
  const double c0 = f.value().real();
  // Binomial series (c0 + g)^s = sum_k binom(s, k) c0^(s-k) g^k.
  std::vector<Complex> coeffs(f.order() + 1);
  double binom = 1.0;
  for (int k = 0; k <= f.order(); ++k) {
    coeffs[k] = binom * std::pow(c0, s - k);
    binom *= (s - k) / (k + 1);
  }
  Jet out = nilpotent_series(nilpotent_part(f), coeffs);
  out.make_real();
  return out;
}

Jet conj(const Jet& f) {
  const auto perm = f.layout().conj_permutation();
  const auto c = f.coefficients();
  std::vector<Complex> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = std::conj(c[perm[i]]);
  return f.with_coefficients(std::move(out), f.is_real());
}

Jet re(const Jet& f) {
  Jet out = (f + conj(f)) * 0.5;
  return out.make_real();
}

Jet im(const Jet& f) {
  Jet out = (f - conj(f)) * Complex(0.0, -0.5);
  return out.make_real();
}

Jet jet_compose(JetOp op, std::span<const Jet> args, double exponent) {
  auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw Error(Errc::InvalidArgument,
                  "jet_compose expects " + std::to_string(n) + " argument(s), got " + std::to_string(args.size()));
    }
  };
  switch (op) {
    case JetOp::add: need(2); return args[0] + args[1];
    case JetOp::sub: need(2); return args[0] - args[1];
    case JetOp::mul: need(2); return args[0] * args[1];
    case JetOp::div: need(2); return args[0] / args[1];
    case JetOp::pow_int: {
      need(1);
      if (exponent != std::round(exponent)) throw Error(Errc::InvalidArgument, "pow_int needs an integer exponent");
      return pow(args[0], static_cast<int>(exponent));
    }
    case JetOp::pow_real: need(1); return pow_real(args[0], exponent);
    case JetOp::log: need(1); return log(args[0]);
    case JetOp::exp: need(1); return exp(args[0]);
    case JetOp::conj: need(1); return conj(args[0]);
    case JetOp::re: need(1); return re(args[0]);
    case JetOp::im: need(1); return im(args[0]);
  }
  throw Error(Errc::InvalidArgument, "unknown jet operation");
}

Complex partial(const Jet& f, const MultiIndex& mi) { return f.partial(mi); }

Jet monomial_jet(const Point& point, std::span<const int> a, std::span<const int> b, int order) {
  const int dim = static_cast<int>(point.size());
  if (static_cast<int>(a.size()) != dim || static_cast<int>(b.size()) != dim) {
    throw Error(Errc::InvalidArgument, "monomial exponent length does not match the dimension");
  }
  Jet out = Jet::constant(point, 0.0, order);
  const auto& layout = out.layout();
  std::vector<Complex> c(layout.size());
  for (int i = 0; i < layout.size(); ++i) {
    const MultiIndex& mi = layout.multi_index(i);
    // coeff = prod_j binom(a_j, alpha_j) z_j^(a_j - alpha_j) * binom(b_j, beta_j) zbar_j^(b_j - beta_j)
    Complex v = 1.0;
    for (int j = 0; j < dim && v != Complex{}; ++j) {
      for (int pass = 0; pass < 2; ++pass) {
        const int e = pass == 0 ? a[j] : b[j];
        const int k = pass == 0 ? mi.alpha[j] : mi.beta[j];
        if (k > e) {
          v = 0.0;
          break;
        }
        const Complex base = pass == 0 ? point[j] : std::conj(point[j]);
        double binom = 1.0;
        for (int t = 0; t < k; ++t) binom = binom * (e - t) / (t + 1);
        Complex pw = 1.0;
        for (int t = 0; t < e - k; ++t) pw *= base;
        v *= binom * pw;
      }
    }
    c[i] = v;
  }
  return out.with_coefficients(std::move(c), false);
}

}  // namespace crs
