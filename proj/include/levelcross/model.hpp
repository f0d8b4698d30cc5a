#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace levelcross {

using Complex = std::complex<double>;

// Mean and variance of the real and imaginary parts of one coefficient
// eta_j = a_j + i b_j, with a_j ~ N(mu_a, var_a) and b_j ~ N(mu_b, var_b).
struct CoefficientLaw {
  double mu_a = 0.0;
  double var_a = 1.0;
  double mu_b = 0.0;
  double var_b = 1.0;

  friend bool operator==(const CoefficientLaw&, const CoefficientLaw&) = default;
};

// Per-index coefficient laws for j = 0..N. At least two entries, all
// variances strictly positive.
class CoefficientProfile {
 public:
  explicit CoefficientProfile(std::vector<CoefficientLaw> entries);

  // Same law at every index.
  static CoefficientProfile broadcast(std::size_t count, CoefficientLaw law);
  // Zero means, var_a = var_b = sigma2 at every index.
  static CoefficientProfile equal_variance(std::size_t count, double sigma2);

  std::size_t size() const { return entries_.size(); }
  std::size_t degree() const { return entries_.size() - 1; }
  const CoefficientLaw& operator[](std::size_t j) const { return entries_[j]; }
  std::span<const CoefficientLaw> entries() const { return entries_; }

  bool has_zero_means() const;
  // The common sigma^2 when var_a_j = var_b_j = sigma^2 for every j.
  std::optional<double> common_variance() const;

  friend bool operator==(const CoefficientProfile&, const CoefficientProfile&) = default;

 private:
  std::vector<CoefficientLaw> entries_;
};

struct ComplexLevel {
  double k1 = 0.0;
  double k2 = 0.0;

  ComplexLevel() = default;
  ComplexLevel(double re, double im);
  explicit ComplexLevel(Complex k) : ComplexLevel(k.real(), k.imag()) {}

  Complex value() const { return {k1, k2}; }
  friend bool operator==(const ComplexLevel&, const ComplexLevel&) = default;
};

struct Rectangle {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  Rectangle() = default;
  Rectangle(double x0, double x1, double y0, double y1);

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool contains(Complex z) const {
    return z.real() > x_min && z.real() < x_max && z.imag() > y_min && z.imag() < y_max;
  }
  // Distance from z to the boundary of the rectangle (0 on the boundary).
  double boundary_distance(Complex z) const;

  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

// Observation times t_0 < t_1 < ... < t_N, t_0 >= 0.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  std::size_t size() const { return times_.size(); }
  std::span<const double> times() const { return times_; }
  // t_k - t_{k-1} with t_{-1} = 0.
  std::vector<double> increments() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::vector<double> times_;
};

// A family f_0..f_N of entire functions that are real on the real axis.
// Implementations must be immutable after construction; evaluation is
// called concurrently.
class BasisFamily {
 public:
  virtual ~BasisFamily() = default;

  virtual std::size_t count() const = 0;

  // Writes f_j(z) and f_j'(z) for every j. Both spans have count() entries.
  virtual void evaluate(Complex z, std::span<Complex> values,
                        std::span<Complex> derivs) const = 0;

  // Single-index convenience: {f_j(z), f_j'(z)}.
  virtual std::pair<Complex, Complex> eval(std::size_t j, Complex z) const;
};

using BasisPtr = std::shared_ptr<const BasisFamily>;

// f_j(z) = z^j, j = 0..degree.
class MonomialBasis final : public BasisFamily {
 public:
  explicit MonomialBasis(std::size_t degree);

  std::size_t count() const override { return degree_ + 1; }
  std::size_t degree() const { return degree_; }
  void evaluate(Complex z, std::span<Complex> values, std::span<Complex> derivs) const override;

 private:
  std::size_t degree_;
};

// f_j(z) = w_j z^j with real weights.
class WeightedMonomialBasis final : public BasisFamily {
 public:
  explicit WeightedMonomialBasis(std::vector<double> weights);

  std::size_t count() const override { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  void evaluate(Complex z, std::span<Complex> values, std::span<Complex> derivs) const override;

 private:
  std::vector<double> weights_;
};

// F_k(z) = sum_{j=k}^{N} f_j(z) over an inner family.
class PrefixSumBasis final : public BasisFamily {
 public:
  explicit PrefixSumBasis(BasisPtr inner);

  std::size_t count() const override { return inner_->count(); }
  const BasisFamily& inner() const { return *inner_; }
  void evaluate(Complex z, std::span<Complex> values, std::span<Complex> derivs) const override;

 private:
  BasisPtr inner_;
};

// User-supplied value/derivative callbacks. Derivatives are trusted; use
// holomorphy_defect() to validate them explicitly.
class TabulatedBasis final : public BasisFamily {
 public:
  struct Entry {
    std::function<Complex(Complex)> value;
    std::function<Complex(Complex)> deriv;
  };

  explicit TabulatedBasis(std::vector<Entry> entries);

  std::size_t count() const override { return entries_.size(); }
  void evaluate(Complex z, std::span<Complex> values, std::span<Complex> derivs) const override;

 private:
  std::vector<Entry> entries_;
};

// Largest relative mismatch between f_j' and the central differences of f_j
// along both axes, over all j and the given sample points. A holomorphic
// family with correct derivatives gives values far below 1e-6 at the
// default step.
double holomorphy_defect(const BasisFamily& basis, std::span<const Complex> points,
                         double step = 1e-5);

// Largest |Im f_j(x)| / (1 + |f_j(x)|) (values and derivatives) over the
// given real sample points.
double real_axis_defect(const BasisFamily& basis, std::span<const double> xs);

struct BrownianModel {
  std::shared_ptr<const PrefixSumBasis> basis;
  CoefficientProfile profile;
};

// Prefix-sum basis F_k = sum_{j>=k} f_j together with the increment law:
// zero means and var_a = var_b = t_k - t_{k-1} (t_{-1} = 0).
BrownianModel build_brownian_basis(BasisPtr inner, const TimeGrid& grid);

}  // namespace levelcross
