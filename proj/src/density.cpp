#include "levelcross/density.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "levelcross/detail/accumulate.hpp"
#include "levelcross/errors.hpp"

namespace levelcross {
namespace {

using detail::CompensatedComplexSum;
using detail::CompensatedSum;

constexpr double kPi = std::numbers::pi;
constexpr Complex kI(0.0, 1.0);

// Relative floor below which Y1 Y3 - Y2^2 is treated as zero.
constexpr double kDegenerateRatio = 1e-14;

struct BasisSample {
  std::vector<Complex> f;
  std::vector<Complex> df;
};

BasisSample sample_basis(const BasisFamily& basis, std::size_t expected, Complex z) {
  if (basis.count() != expected) {
    throw ConfigError("basis has " + std::to_string(basis.count()) +
                      " functions but the profile has " + std::to_string(expected) + " entries");
  }
  BasisSample s{std::vector<Complex>(expected), std::vector<Complex>(expected)};
  basis.evaluate(z, s.f, s.df);
  return s;
}

bool all_vanish(const BasisSample& s) {
  for (const Complex& f : s.f) {
    if (f != 0.0) return false;
  }
  return true;
}

void require_zero_means(const CoefficientProfile& profile, const char* who) {
  if (!profile.has_zero_means()) {
    throw ContractViolation(std::string(who) + " requires zero coefficient means");
  }
}

// Y1 Y3 - Y2^2 with the degeneracy checks shared by every evaluator.
double covariance_determinant(double y1, double y2, double y3, const BasisSample& s) {
  if (all_vanish(s)) throw DegeneratePoint("all basis functions vanish at this point");
  const double det = detail::difference_of_products(y1, y3, y2, y2);
  if (!(y1 > 0.0) || !(y3 > 0.0) || !(det > kDegenerateRatio * y1 * y3)) {
    throw DegenerateCovariance("Y1*Y3 - Y2^2 is not positive (Y1=" + std::to_string(y1) +
                               ", Y2=" + std::to_string(y2) + ", Y3=" + std::to_string(y3) + ")");
  }
  return det;
}

// Y's and D's for zero means; h left unset.
DensityParts accumulate_parts(const CoefficientProfile& profile, const BasisSample& s) {
  CompensatedSum y1, y2, y3, d3;
  CompensatedComplexSum d1, d2;
  for (std::size_t j = 0; j < s.f.size(); ++j) {
    const double sa = profile[j].var_a;
    const double sb = profile[j].var_b;
    const double u = s.f[j].real();
    const double v = s.f[j].imag();
    y1 += sa * u * u + sb * v * v;
    y2 += (sa - sb) * u * v;
    y3 += sb * u * u + sa * v * v;
    d1 += Complex(sa * u, -sb * v) * s.df[j];
    d2 += Complex(sb * u, -sa * v) * s.df[j];
    d3 += (sa + sb) * std::norm(s.df[j]);
  }
  DensityParts parts;
  parts.y1 = y1.value();
  parts.y2 = y2.value();
  parts.y3 = y3.value();
  parts.d1 = d1.value();
  parts.d2 = d2.value();
  parts.d3 = d3.value();
  parts.d0 = std::sqrt(covariance_determinant(parts.y1, parts.y2, parts.y3, s));
  return parts;
}

// The zero-mean closed form, written in the same grouping as the theorem.
double assemble_zero_mean(const DensityParts& p, ComplexLevel level) {
  const double k1 = level.k1;
  const double k2 = level.k2;
  const double d0 = p.d0;
  const double d0sq = d0 * d0;
  const double d0cu = d0sq * d0;

  const double quad = k1 * k1 * p.y3 + k2 * k2 * p.y1 - 2.0 * k1 * k2 * p.y2;
  const double alpha = k1 * p.y3 - k2 * p.y2;
  const double gamma = k1 * p.y2 - k2 * p.y1;
  const double delta = k1 * (p.y2 + p.y3) - k2 * (p.y1 + p.y2);

  const double brace =
      p.d3 - std::norm(p.d1) / d0 * ((p.y2 + p.y3) / d0 - alpha * delta / d0cu) -
      std::norm(p.d2) / d0 * ((p.y1 + p.y2) / d0 - gamma * delta / d0cu) +
      std::norm(p.d1 + kI * p.d2) / d0 * (p.y2 / d0 - alpha * gamma / d0cu);

  return std::exp(-quad / (2.0 * d0sq)) / (2.0 * kPi * d0) * brace;
}

}  // namespace

DensityParts theorem2_density(const CoefficientProfile& profile, const BasisFamily& basis,
                              ComplexLevel level, Complex z) {
  require_zero_means(profile, "theorem2_density");
  const BasisSample s = sample_basis(basis, profile.size(), z);
  DensityParts parts = accumulate_parts(profile, s);
  parts.h = assemble_zero_mean(parts, level);
  return parts;
}

EqualVarianceParts theorem3_density(double sigma2, const BasisFamily& basis, ComplexLevel level,
                                    Complex z) {
  if (!(sigma2 > 0.0)) throw ContractViolation("theorem3_density requires sigma2 > 0");
  std::vector<Complex> f(basis.count()), df(basis.count());
  basis.evaluate(z, f, df);

  CompensatedSum b0, b2;
  CompensatedComplexSum b1;
  for (std::size_t j = 0; j < f.size(); ++j) {
    b0 += std::norm(f[j]);
    b1 += std::conj(f[j]) * df[j];
    b2 += std::norm(df[j]);
  }
  EqualVarianceParts out;
  out.b0 = b0.value();
  out.b1 = b1.value();
  out.b2 = b2.value();
  out.sigma2 = sigma2;
  if (!(out.b0 > 0.0)) throw DegeneratePoint("B0 = 0: all basis functions vanish at this point");

  const double kk = std::norm(level.value());
  const double ratio = std::abs(out.b1) / out.b0;
  out.h = std::exp(-kk / (2.0 * sigma2 * out.b0)) / (kPi * out.b0) *
          (out.b2 - ratio * ratio * (out.b0 - kk / (2.0 * sigma2)));
  return out;
}

DensityPartsGeneral theorem4_density(const CoefficientProfile& profile, const BasisFamily& basis,
                                     ComplexLevel level, Complex z, Theorem4Form form) {
  const BasisSample s = sample_basis(basis, profile.size(), z);
  const std::size_t n = s.f.size();

  CompensatedSum ex1, ex2, y1, y2, y3, d3;
  CompensatedComplexSum m;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& law = profile[j];
    const double u = s.f[j].real();
    const double v = s.f[j].imag();
    ex1 += law.mu_a * u - law.mu_b * v;
    ex2 += law.mu_a * v + law.mu_b * u;
    y1 += law.var_a * u * u + law.var_b * v * v;
    y2 += (law.var_a - law.var_b) * u * v;
    y3 += law.var_b * u * u + law.var_a * v * v;
    d3 += (law.var_a + law.var_b) * std::norm(s.df[j]);
    m += Complex(law.mu_a, law.mu_b) * s.df[j];
  }

  DensityPartsGeneral g;
  g.ex1 = ex1.value();
  g.ex2 = ex2.value();
  g.m = m.value();
  g.d3s = d3.value();

  if (form == Theorem4Form::as_published) {
    g.y1s = y1.value() - g.ex1 * g.ex1;
    g.y2s = y2.value() - g.ex1 * g.ex2;
    g.y3s = y3.value() - g.ex2 * g.ex2;
  } else {
    g.y1s = y1.value();
    g.y2s = y2.value();
    g.y3s = y3.value();
  }

  // D1* = sum (A_{j,1} - i B_{j,1}) f_j',  D2* = sum (B_{j,2} - i A_{j,2}) f_j'.
  // In the corrected form the mean shifts drop out of the covariances.
  const double shift1 = form == Theorem4Form::as_published ? g.ex1 : 0.0;
  const double shift2 = form == Theorem4Form::as_published ? g.ex2 : 0.0;
  CompensatedComplexSum d1, d2;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& law = profile[j];
    const double u = s.f[j].real();
    const double v = s.f[j].imag();
    const double a1 = law.var_a * u - law.mu_a * shift1;
    const double b1 = law.var_b * v + law.mu_b * shift1;
    const double a2 = law.var_a * v - law.mu_a * shift2;
    const double b2 = law.var_b * u - law.mu_b * shift2;
    d1 += Complex(a1, -b1) * s.df[j];
    d2 += Complex(b2, -a2) * s.df[j];
  }
  g.d1s = d1.value();
  g.d2s = d2.value();

  const double det = covariance_determinant(g.y1s, g.y2s, g.y3s, s);
  g.d0s = std::sqrt(det);

  const double c1 = level.k1 - g.ex1;
  const double c2 = level.k2 - g.ex2;
  const double quad = c1 * c1 * g.y3s + c2 * c2 * g.y1s - 2.0 * c1 * c2 * g.y2s;
  // alpha = (K1 - EX1) Y3* - (K2 - EX2) Y2*,  gamma = (K1 - EX1) Y2* - (K2 - EX2) Y1*.
  const double alpha = c1 * g.y3s - c2 * g.y2s;
  const double gamma = c1 * g.y2s - c2 * g.y1s;

  const double n1 = std::norm(g.d1s);
  const double n2 = std::norm(g.d2s);
  const double nm = std::norm(g.m);
  const double cross = std::norm(g.d1s + kI * g.d2s) - n1 - n2;
  const double s4 = std::norm(g.m + g.d1s) - nm - n1;
  const double s5 = std::norm(g.m + kI * g.d2s) - nm - n2;

  double brace = g.d3s - n1 / det * (g.y3s - alpha * alpha / det) -
                 n2 / det * (g.y1s - gamma * gamma / det) +
                 cross / det * (g.y2s - alpha * gamma / det);
  if (form == Theorem4Form::as_published) {
    brace += -s4 / det * alpha + s5 / det * gamma;
  } else {
    // |E(S' | X = K)|^2 = |M + w|^2 with w the zero-mean conditional shift.
    brace += nm + s4 / det * alpha - s5 / det * gamma;
  }

  g.h = std::exp(-quad / (2.0 * det)) / (2.0 * kPi * g.d0s) * brace;
  return g;
}

ComplexLevel corollary1_level(double radius) {
  const double k = radius / std::numbers::sqrt2;
  return {k, k};
}

double corollary1_density(const CoefficientProfile& profile, const BasisFamily& basis,
                          double radius, Complex z) {
  if (!(radius > 0.0)) throw ContractViolation("corollary1_density requires radius > 0");
  require_zero_means(profile, "corollary1_density");
  const BasisSample s = sample_basis(basis, profile.size(), z);
  const DensityParts p = accumulate_parts(profile, s);

  // K1 = K2 = k with k^2 = radius^2 / 2.
  const double kk = radius * radius / 2.0;
  const double d0 = p.d0;
  const double d0sq = d0 * d0;
  const double d0cu = d0sq * d0;
  const double brace =
      p.d3 -
      std::norm(p.d1) / d0 * ((p.y2 + p.y3) / d0 - kk * (p.y3 - p.y2) * (p.y3 - p.y1) / d0cu) -
      std::norm(p.d2) / d0 * ((p.y1 + p.y2) / d0 - kk * (p.y2 - p.y1) * (p.y3 - p.y1) / d0cu) +
      std::norm(p.d1 + kI * p.d2) / d0 * (p.y2 / d0 - kk * (p.y3 - p.y2) * (p.y2 - p.y1) / d0cu);
  return std::exp(-kk * (p.y1 - 2.0 * p.y2 + p.y3) / (2.0 * d0sq)) / (2.0 * kPi * d0) * brace;
}

double corollary2_density(const CoefficientProfile& profile, const BasisFamily& basis, Complex z) {
  require_zero_means(profile, "corollary2_density");
  const BasisSample s = sample_basis(basis, profile.size(), z);
  const DensityParts p = accumulate_parts(profile, s);
  const double d0 = p.d0;
  const double num = d0 * d0 * p.d3 - std::norm(p.d1) * (p.y2 + p.y3) -
                     std::norm(p.d2) * (p.y1 + p.y2) + std::norm(p.d1 + kI * p.d2) * p.y2;
  return num / (2.0 * kPi * d0 * d0 * d0);
}

DensityParts theorem5_density(const BrownianModel& model, ComplexLevel level, Complex z) {
  return theorem2_density(model.profile, *model.basis, level, z);
}

DensityParts theorem5_density(BasisPtr inner, const TimeGrid& grid, ComplexLevel level,
                              Complex z) {
  return theorem5_density(build_brownian_basis(std::move(inner), grid), level, z);
}

DensityParts theorem5_direct(const BasisFamily& inner, const TimeGrid& grid, ComplexLevel level,
                             Complex z) {
  if (inner.count() != grid.size()) {
    throw ConfigError("inner basis and time grid differ in length");
  }
  const std::size_t n = inner.count();
  std::vector<Complex> f(n), df(n);
  inner.evaluate(z, f, df);
  const std::vector<double> gaps = grid.increments();

  CompensatedSum y1, y2, y3, d3;
  CompensatedComplexSum d1, d2;
  for (std::size_t k = 0; k < n; ++k) {
    double su = 0.0, sv = 0.0, sdu = 0.0, sdv = 0.0;
    for (std::size_t j = k; j < n; ++j) {
      su += f[j].real();
      sv += f[j].imag();
      sdu += df[j].real();
      sdv += df[j].imag();
    }
    const double va = gaps[k];
    const double vb = gaps[k];
    if (!(va > 0.0)) throw ConfigError("time grid increments must be positive");
    y1 += va * su * su + vb * sv * sv;
    y2 += (va - vb) * su * sv;
    y3 += vb * su * su + va * sv * sv;
    d1 += Complex(va * su, -vb * sv) * Complex(sdu, sdv);
    d2 += Complex(vb * su, -va * sv) * Complex(sdu, sdv);
    d3 += (va + vb) * (sdu * sdu + sdv * sdv);
  }

  const BasisSample inner_sample{std::move(f), std::move(df)};
  DensityParts p;
  p.y1 = y1.value();
  p.y2 = y2.value();
  p.y3 = y3.value();
  p.d1 = d1.value();
  p.d2 = d2.value();
  p.d3 = d3.value();
  p.d0 = std::sqrt(covariance_determinant(p.y1, p.y2, p.y3, inner_sample));
  p.h = assemble_zero_mean(p, level);
  return p;
}

double moments_path_density(const CoefficientProfile& profile, const BasisFamily& basis,
                            ComplexLevel level, Complex z) {
  require_zero_means(profile, "moments_path_density");
  const BasisSample s = sample_basis(basis, profile.size(), z);
  const std::size_t n = s.f.size();

  std::vector<double> u(n), v(n), du(n), dv(n), sa(n), sb(n);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = s.f[j].real();
    v[j] = s.f[j].imag();
    du[j] = s.df[j].real();
    dv[j] = s.df[j].imag();
    sa[j] = profile[j].var_a;
    sb[j] = profile[j].var_b;
  }

  // Sigma_XX = [[E X1X1, E X1X2], [E X2X1, E X2X2]].
  double sxx11 = 0.0, sxx12 = 0.0, sxx22 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sxx11 += sa[j] * u[j] * u[j] + sb[j] * v[j] * v[j];
    sxx12 += sa[j] * u[j] * v[j] - sb[j] * v[j] * u[j];
    sxx22 += sa[j] * v[j] * v[j] + sb[j] * u[j] * u[j];
  }
  const double det = covariance_determinant(sxx11, sxx12, sxx22, s);
  const double inv11 = sxx22 / det;
  const double inv12 = -sxx12 / det;
  const double inv22 = sxx11 / det;

  // Sigma_aX row j = (var_a u, var_a v); Sigma_bX row j = (-var_b v, var_b u).
  std::vector<double> ax1(n), ax2(n), bx1(n), bx2(n);
  for (std::size_t j = 0; j < n; ++j) {
    ax1[j] = sa[j] * u[j];
    ax2[j] = sa[j] * v[j];
    bx1[j] = -sb[j] * v[j];
    bx2[j] = sb[j] * u[j];
  }
  auto quad_form = [&](double r1, double r2, double c1, double c2) {
    return r1 * (inv11 * c1 + inv12 * c2) + r2 * (inv12 * c1 + inv22 * c2);
  };

  // E(a | X = K) = Sigma_aX Sigma_XX^{-1} K, likewise for b.
  const double w1 = inv11 * level.k1 + inv12 * level.k2;
  const double w2 = inv12 * level.k1 + inv22 * level.k2;
  std::vector<double> ma(n), mb(n);
  for (std::size_t j = 0; j < n; ++j) {
    ma[j] = ax1[j] * w1 + ax2[j] * w2;
    mb[j] = bx1[j] * w1 + bx2[j] * w2;
  }

  // det(grad X) = sum_{j,k} (a_j a_k + b_j b_k)(u'_j u'_k + v'_j v'_k)
  //                       + (a_j b_k - b_j a_k)(v'_j u'_k - u'_j v'_k).
  double expected_det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double delta = j == k ? 1.0 : 0.0;
      const double caa = delta * sa[j] - quad_form(ax1[j], ax2[j], ax1[k], ax2[k]);
      const double cbb = delta * sb[j] - quad_form(bx1[j], bx2[j], bx1[k], bx2[k]);
      const double cab = -quad_form(ax1[j], ax2[j], bx1[k], bx2[k]);
      const double cba = -quad_form(bx1[j], bx2[j], ax1[k], ax2[k]);
      const double eaa = caa + ma[j] * ma[k];
      const double ebb = cbb + mb[j] * mb[k];
      const double eab = cab + ma[j] * mb[k];
      const double eba = cba + mb[j] * ma[k];
      expected_det += (eaa + ebb) * (du[j] * du[k] + dv[j] * dv[k]) +
                      (eab - eba) * (dv[j] * du[k] - du[j] * dv[k]);
    }
  }

  const double k1 = level.k1;
  const double k2 = level.k2;
  const double mahal = k1 * (inv11 * k1 + inv12 * k2) + k2 * (inv12 * k1 + inv22 * k2);
  const double pdf = std::exp(-0.5 * mahal) / (2.0 * kPi * std::sqrt(det));
  return expected_det * pdf;
}

DensityFunction make_density(Theorem theorem, CoefficientProfile profile, BasisPtr basis,
                             ComplexLevel level) {
  if (!basis) throw ConfigError("make_density needs a basis");
  switch (theorem) {
    case Theorem::t2:
      require_zero_means(profile, "theorem 2");
      return [profile = std::move(profile), basis, level](Complex z) {
        return theorem2_density(profile, *basis, level, z).h;
      };
    case Theorem::t3: {
      const auto sigma2 = profile.common_variance();
      if (!sigma2 || !profile.has_zero_means()) {
        throw ContractViolation("theorem 3 requires zero means and var_a = var_b = const");
      }
      return [sigma2 = *sigma2, basis, level](Complex z) {
        return theorem3_density(sigma2, *basis, level, z).h;
      };
    }
    case Theorem::t4:
      return [profile = std::move(profile), basis, level](Complex z) {
        return theorem4_density(profile, *basis, level, z).h;
      };
    case Theorem::t5:
      break;
  }
  throw ContractViolation("theorem 5 needs a time grid; use make_density(BrownianModel, level)");
}

DensityFunction make_density(BrownianModel model, ComplexLevel level) {
  return [model = std::move(model), level](Complex z) {
    return theorem5_density(model, level, z).h;
  };
}

}  // namespace levelcross
