#pragma once

#include <cmath>
#include <vector>

#include "cta/common.hpp"

namespace cta {

/// Algebraic polynomial in shifted monomial form
///   p(x) = sum_i coeffs[i] (x - center)^i.
/// The shift keeps short pieces on narrow intervals well conditioned.
struct AlgebraicPolynomial {
  double center = 0.0;
  std::vector<double> coeffs{0.0};

  AlgebraicPolynomial() = default;
  AlgebraicPolynomial(double center_, std::vector<double> coeffs_)
      : center(center_), coeffs(std::move(coeffs_)) {
    if (coeffs.empty()) coeffs.push_back(0.0);
  }

  static AlgebraicPolynomial constant(double v) {
    return AlgebraicPolynomial(0.0, {v});
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double operator()(double x) const {
    const double u = x - center;
    double r = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) r = r * u + coeffs[i];
    return r;
  }

  AlgebraicPolynomial derivative() const {
    if (coeffs.size() <= 1) return AlgebraicPolynomial(center, {0.0});
    std::vector<double> d(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * i;
    return AlgebraicPolynomial(center, std::move(d));
  }

  /// Antiderivative vanishing at `anchor`.
  AlgebraicPolynomial antiderivative(double anchor) const {
    std::vector<double> a(coeffs.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) a[i + 1] = coeffs[i] / (i + 1);
    AlgebraicPolynomial p(center, std::move(a));
    p.coeffs[0] = -p(anchor);
    return p;
  }

  AlgebraicPolynomial& operator*=(double s) {
    for (double& c : coeffs) c *= s;
    return *this;
  }
  AlgebraicPolynomial& operator+=(double s) {
    coeffs[0] += s;
    return *this;
  }

  /// Sum of two polynomials sharing a center.
  friend AlgebraicPolynomial operator+(const AlgebraicPolynomial& a,
                                       const AlgebraicPolynomial& b) {
    require(a.center == b.center, "polynomial sum: centers differ");
    std::vector<double> c(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
    return AlgebraicPolynomial(a.center, std::move(c));
  }
};

/// p(x) = prod_i (x - roots[i]), expanded about `center`.
inline AlgebraicPolynomial polynomial_from_roots(const std::vector<double>& roots,
                                                 double center) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    const double ru = r - center;
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * ru;
    }
    c = std::move(next);
  }
  return AlgebraicPolynomial(center, std::move(c));
}

/// Lagrange interpolant through (nodes[i], values[i]) via the Newton form.
inline AlgebraicPolynomial interpolate(const std::vector<double>& nodes,
                                       const std::vector<double>& values,
                                       double center) {
  require(nodes.size() == values.size() && !nodes.empty(),
          "interpolate: size mismatch");
  const std::size_t n = nodes.size();
  std::vector<double> dd = values;  // Newton coefficients, built in place
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
  // Horner assembly of the Newton form into shifted monomials.
  AlgebraicPolynomial p(center, {dd[n - 1]});
  for (std::size_t i = n - 1; i-- > 0;) {
    std::vector<double> c(p.coeffs.size() + 1, 0.0);
    const double ru = nodes[i] - center;
    for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
      c[j + 1] += p.coeffs[j];
      c[j] -= p.coeffs[j] * ru;
    }
    c[0] += dd[i];
    p.coeffs = std::move(c);
  }
  return p;
}

}  // namespace cta
