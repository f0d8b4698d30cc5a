#pragma once

#include <functional>

#include "levelcross/model.hpp"

namespace levelcross {

// Intermediate quantities of one zero-mean density evaluation.
//   Y1 = Var X1, Y2 = Cov(X1, X2), Y3 = Var X2 for S = X1 + i X2,
//   D0 = sqrt(Y1 Y3 - Y2^2),
//   D1 = sum (var_a u - i var_b v) f',  D2 = sum (var_b u - i var_a v) f',
//   D3 = sum (var_a + var_b) |f'|^2.
struct DensityParts {
  double y1 = 0.0;
  double y2 = 0.0;
  double y3 = 0.0;
  double d0 = 0.0;
  Complex d1;
  Complex d2;
  double d3 = 0.0;
  double h = 0.0;
};

// Starred quantities for coefficients with nonzero means. m = sum E(eta_j) f_j',
// ex1/ex2 are the means of Re S and Im S.
struct DensityPartsGeneral {
  double y1s = 0.0;
  double y2s = 0.0;
  double y3s = 0.0;
  double d0s = 0.0;
  Complex d1s;
  Complex d2s;
  double d3s = 0.0;
  Complex m;
  double ex1 = 0.0;
  double ex2 = 0.0;
  double h = 0.0;
};

// B0 = sum |f|^2, B1 = sum conj(f) f', B2 = sum |f'|^2.
struct EqualVarianceParts {
  double b0 = 0.0;
  Complex b1;
  double b2 = 0.0;
  double sigma2 = 0.0;
  double h = 0.0;
};

// Zero-mean coefficients, arbitrary per-index variances.
DensityParts theorem2_density(const CoefficientProfile& profile, const BasisFamily& basis,
                              ComplexLevel level, Complex z);

// var_a_j = var_b_j = sigma2 for every j, zero means.
EqualVarianceParts theorem3_density(double sigma2, const BasisFamily& basis, ComplexLevel level,
                                    Complex z);

enum class Theorem4Form {
  // Conditional-moment result for shifted means: the covariance blocks are
  // the zero-mean ones and the mean of S' enters through |E(S'|X=K)|^2.
  corrected,
  // Literal closed form: starred Y's with squared-mean corrections and A/B
  // accumulators. Reduces to theorem2 for zero means but does not match
  // simulation otherwise.
  as_published,
};

// Nonzero means allowed.
DensityPartsGeneral theorem4_density(const CoefficientProfile& profile, const BasisFamily& basis,
                                     ComplexLevel level, Complex z,
                                     Theorem4Form form = Theorem4Form::corrected);

// The level used by corollary1_density: the point K1 = K2 = radius / sqrt(2)
// on the circle |K| = radius.
ComplexLevel corollary1_level(double radius);

// Zero-mean density for K on the circle of the given radius, at K1 = K2.
double corollary1_density(const CoefficientProfile& profile, const BasisFamily& basis,
                          double radius, Complex z);

// Zero-mean density at K = 0 (rational form, no exponential).
double corollary2_density(const CoefficientProfile& profile, const BasisFamily& basis, Complex z);

// Coefficients that are successive Brownian observations at the grid times.
// Evaluated as theorem2 on the prefix-sum basis.
DensityParts theorem5_density(const BrownianModel& model, ComplexLevel level, Complex z);
DensityParts theorem5_density(BasisPtr inner, const TimeGrid& grid, ComplexLevel level,
                              Complex z);

// Same quantity with every Y/D written out as explicit double sums over the
// inner basis (no prefix-sum basis object). Used to cross-check the above.
DensityParts theorem5_direct(const BasisFamily& inner, const TimeGrid& grid, ComplexLevel level,
                             Complex z);

// Independent route for zero means: conditional means and covariances of
// every coefficient given X = K, E(det grad X | X = K) by double summation
// over (j, k), times the bivariate normal density of X at K.
double moments_path_density(const CoefficientProfile& profile, const BasisFamily& basis,
                            ComplexLevel level, Complex z);

using DensityFunction = std::function<double(Complex)>;

enum class Theorem { t2, t3, t4, t5 };

// Bind an evaluator to fixed inputs. t3 requires a common variance, t2 zero
// means. t5 is not available here (use the BrownianModel overload).
DensityFunction make_density(Theorem theorem, CoefficientProfile profile, BasisPtr basis,
                             ComplexLevel level);
DensityFunction make_density(BrownianModel model, ComplexLevel level);

}  // namespace levelcross
