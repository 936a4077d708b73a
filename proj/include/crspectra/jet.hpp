#pragma once

// Truncated multivariate Taylor expansions in the Wirtinger variables
// z_1..z_m, conj(z_1)..conj(z_m), m = n + 1 <= 3.
//
// Coefficients are Taylor coefficients (derivative / (alpha! beta!)) stored
// densely in graded-lexicographic order, so multiplication is a truncated
// convolution driven by a precomputed table.

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace crs {

using Complex = std::complex<double>;
using Point = std::vector<Complex>;

inline constexpr int kMaxDim = 3;
inline constexpr int kMaxOrder = 6;
inline constexpr int kDefaultOrder = 4;

enum class VarKind { holomorphic, antiholomorphic };

struct MultiIndex {
  std::array<int, kMaxDim> alpha{};  // holomorphic orders
  std::array<int, kMaxDim> beta{};   // antiholomorphic orders

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> a, std::initializer_list<int> b);

  int total() const;
  /// alpha! * beta!
  double factorial() const;
  /// (beta | alpha): the index of the conjugate coefficient.
  MultiIndex swapped() const;

  static MultiIndex unit(VarKind kind, int index0);
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

class JetLayout {
 public:
  struct MulTerm {
    std::int32_t lhs;
    std::int32_t rhs;
    std::int32_t out;
  };

  /// Shared, cached layout for `dim` complex coordinates truncated at `order`.
  static std::shared_ptr<const JetLayout> get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }

  /// Position of `mi` in the coefficient vector, or -1 when |mi| > order.
  int index_of(const MultiIndex& mi) const;
  const MultiIndex& multi_index(int i) const { return indices_[i]; }
  int degree(int i) const { return degrees_[i]; }

  std::span<const MulTerm> mul_terms() const { return mul_terms_; }
  std::span<const int> conj_permutation() const { return conj_perm_; }

  JetLayout(int dim, int order);

 private:
  int encode(const MultiIndex& mi) const;

  int dim_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<int> lookup_;
  std::vector<MulTerm> mul_terms_;
  std::vector<int> conj_perm_;
};

class Jet {
 public:
  Jet() = default;

  static Jet constant(const Point& point, Complex value, int order);
  static Jet constant_like(const Jet& like, Complex value);
  /// Jet of the coordinate z_index (or its conjugate); `index` is 1-based.
  static Jet variable(const Point& point, int index, VarKind kind, int order);
  static Jet from_coefficients(const Point& point, int order, std::vector<Complex> coeffs,
                               bool real_valued = false);

  bool valid() const { return layout_ != nullptr; }
  int order() const { return layout_->order(); }
  int dim() const { return layout_->dim(); }
  const Point& point() const { return *point_; }
  const JetLayout& layout() const { return *layout_; }
  std::span<const Complex> coefficients() const { return c_; }

  /// Flag set when the represented field is real-valued; coefficients then
  /// satisfy coeff(alpha, beta) == conj(coeff(beta, alpha)) exactly.
  bool is_real() const { return real_; }
  /// Marks the jet real-valued and enforces the conjugate symmetry of its coefficients.
  Jet& make_real();

  Complex value() const { return c_[0]; }
  Complex coeff(const MultiIndex& mi) const;
  /// The mixed Wirtinger partial  d^alpha dbar^beta f (base point).
  Complex partial(const MultiIndex& mi) const;
  /// df/dz_j, df/dzbar_k and d^2 f / dz_j dzbar_k at the base point (0-based indices).
  Complex d(int j) const;
  Complex dbar(int k) const;
  Complex d_dbar(int j, int k) const;

  /// Jet of d f / d z_index0 (or d/dzbar), one order lower.
  Jet derivative(VarKind kind, int index0) const;
  Jet truncated(int order) const;
  /// Same layout and base point, new coefficients.
  Jet with_coefficients(std::vector<Complex> coeffs, bool real_valued) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator*=(Complex s);
  Jet& operator*=(double s);
  Jet& operator+=(Complex s);
  Jet& operator+=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, Complex s) { return a *= s; }
  friend Jet operator*(Complex s, Jet a) { return a *= s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, Complex s) { return a += s; }
  friend Jet operator+(Complex s, Jet a) { return a += s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::shared_ptr<const Point> point_;
  std::vector<Complex> c_;
  bool real_ = false;
};

Jet reciprocal(const Jet& f);
Jet exp(const Jet& f);
Jet log(const Jet& f);
Jet pow(const Jet& f, int k);
/// f^s for real s; f must be real-valued with positive constant term.
Jet pow_real(const Jet& f, double s);
Jet conj(const Jet& f);
Jet re(const Jet& f);
Jet im(const Jet& f);

enum class JetOp { add, sub, mul, div, pow_int, pow_real, log, exp, conj, re, im };

/// Generic n-ary dispatch; `exponent` is read by pow_int / pow_real.
Jet jet_compose(JetOp op, std::span<const Jet> args, double exponent = 0.0);

Complex partial(const Jet& f, const MultiIndex& mi);

/// Jet of the monomial z^a conj(z)^b at `point`, computed in closed form.
Jet monomial_jet(const Point& point, std::span<const int> a, std::span<const int> b, int order);

}  // namespace crs
