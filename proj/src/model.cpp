#include "levelcross/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levelcross/errors.hpp"

namespace levelcross {

CoefficientProfile::CoefficientProfile(std::vector<CoefficientLaw> entries)
    : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw ConfigError("coefficient profile needs at least 2 entries (N >= 1), got " +
                      std::to_string(entries_.size()));
  }
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    const auto& e = entries_[j];
    if (!std::isfinite(e.mu_a) || !std::isfinite(e.mu_b)) {
      throw ConfigError("non-finite mean at index " + std::to_string(j));
    }
    if (!(e.var_a > 0.0) || !(e.var_b > 0.0) || !std::isfinite(e.var_a) ||
        !std::isfinite(e.var_b)) {
      throw ConfigError("variances must be finite and > 0 at index " + std::to_string(j));
    }
  }
}

CoefficientProfile CoefficientProfile::broadcast(std::size_t count, CoefficientLaw law) {
  return CoefficientProfile(std::vector<CoefficientLaw>(count, law));
}

CoefficientProfile CoefficientProfile::equal_variance(std::size_t count, double sigma2) {
  return broadcast(count, CoefficientLaw{0.0, sigma2, 0.0, sigma2});
}

bool CoefficientProfile::has_zero_means() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const CoefficientLaw& e) { return e.mu_a == 0.0 && e.mu_b == 0.0; });
}

std::optional<double> CoefficientProfile::common_variance() const {
  const double s = entries_.front().var_a;
  for (const auto& e : entries_) {
    if (e.var_a != s || e.var_b != s) return std::nullopt;
  }
  return s;
}

ComplexLevel::ComplexLevel(double re, double im) : k1(re), k2(im) {
  if (!std::isfinite(k1) || !std::isfinite(k2)) throw ConfigError("level must be finite");
}

Rectangle::Rectangle(double x0, double x1, double y0, double y1)
    : x_min(x0), x_max(x1), y_min(y0), y_max(y1) {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    throw ConfigError("rectangle needs x_min < x_max and y_min < y_max");
  }
}

double Rectangle::boundary_distance(Complex z) const {
  const double x = z.real();
  const double y = z.imag();
  const double dx_out = std::max({x_min - x, 0.0, x - x_max});
  const double dy_out = std::max({y_min - y, 0.0, y - y_max});
  if (dx_out > 0.0 || dy_out > 0.0) return std::hypot(dx_out, dy_out);
  return std::min({x - x_min, x_max - x, y - y_min, y_max - y});
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.empty()) throw ConfigError("time grid is empty");
  if (!(times_.front() >= 0.0)) throw ConfigError("time grid must start at t_0 >= 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) {
      throw ConfigError("time grid must be strictly increasing");
    }
  }
  if (!std::isfinite(times_.back())) throw ConfigError("time grid must be finite");
}

std::vector<double> TimeGrid::increments() const {
  std::vector<double> out(times_.size());
  double prev = 0.0;
  for (std::size_t k = 0; k < times_.size(); ++k) {
    out[k] = times_[k] - prev;
    prev = times_[k];
  }
  return out;
}

std::pair<Complex, Complex> BasisFamily::eval(std::size_t j, Complex z) const {
  std::vector<Complex> v(count());
  std::vector<Complex> d(count());
  evaluate(z, v, d);
  return {v.at(j), d.at(j)};
}

MonomialBasis::MonomialBasis(std::size_t degree) : degree_(degree) {}

void MonomialBasis::evaluate(Complex z, std::span<Complex> values,
                             std::span<Complex> derivs) const {
  Complex p = 1.0;  // z^j
  Complex q = 0.0;  // z^(j-1)
  for (std::size_t j = 0; j <= degree_; ++j) {
    values[j] = p;
    derivs[j] = static_cast<double>(j) * q;
    q = p;
    p *= z;
  }
}

WeightedMonomialBasis::WeightedMonomialBasis(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw ConfigError("weighted monomial basis needs weights");
  for (double w : weights_) {
    if (!std::isfinite(w)) throw ConfigError("basis weights must be finite");
  }
}

void WeightedMonomialBasis::evaluate(Complex z, std::span<Complex> values,
                                     std::span<Complex> derivs) const {
  Complex p = 1.0;
  Complex q = 0.0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    values[j] = weights_[j] * p;
    derivs[j] = weights_[j] * static_cast<double>(j) * q;
    q = p;
    p *= z;
  }
}

PrefixSumBasis::PrefixSumBasis(BasisPtr inner) : inner_(std::move(inner)) {
  if (!inner_) throw ConfigError("prefix-sum basis needs an inner basis");
}

void PrefixSumBasis::evaluate(Complex z, std::span<Complex> values,
                              std::span<Complex> derivs) const {
  inner_->evaluate(z, values, derivs);
  // Suffix sums in place, from the top index down.
  for (std::size_t k = values.size() - 1; k-- > 0;) {
    values[k] += values[k + 1];
    derivs[k] += derivs[k + 1];
  }
}

TabulatedBasis::TabulatedBasis(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ConfigError("tabulated basis is empty");
  for (const auto& e : entries_) {
    if (!e.value || !e.deriv) throw ConfigError("tabulated basis entry missing a callback");
  }
}

void TabulatedBasis::evaluate(Complex z, std::span<Complex> values,
                              std::span<Complex> derivs) const {
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    values[j] = entries_[j].value(z);
    derivs[j] = entries_[j].deriv(z);
  }
}

double holomorphy_defect(const BasisFamily& basis, std::span<const Complex> points, double step) {
  const std::size_t n = basis.count();
  std::vector<Complex> v(n), d(n), vp(n), vm(n), scratch(n);
  const Complex ih(0.0, step);
  double worst = 0.0;
  for (Complex z : points) {
    basis.evaluate(z, v, d);
    basis.evaluate(z + step, vp, scratch);
    basis.evaluate(z - step, vm, scratch);
    std::vector<Complex> dx(n);
    for (std::size_t j = 0; j < n; ++j) dx[j] = (vp[j] - vm[j]) / (2.0 * step);
    basis.evaluate(z + ih, vp, scratch);
    basis.evaluate(z - ih, vm, scratch);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex dy = (vp[j] - vm[j]) / (2.0 * ih);
      const double scale = 1.0 + std::abs(d[j]) + std::abs(v[j]);
      worst = std::max({worst, std::abs(dx[j] - d[j]) / scale, std::abs(dy - d[j]) / scale});
    }
  }
  return worst;
}

double real_axis_defect(const BasisFamily& basis, std::span<const double> xs) {
  const std::size_t n = basis.count();
  std::vector<Complex> v(n), d(n);
  double worst = 0.0;
  for (double x : xs) {
    basis.evaluate(Complex(x, 0.0), v, d);
    for (std::size_t j = 0; j < n; ++j) {
      worst = std::max({worst, std::abs(v[j].imag()) / (1.0 + std::abs(v[j])),
                        std::abs(d[j].imag()) / (1.0 + std::abs(d[j]))});
    }
  }
  return worst;
}

BrownianModel build_brownian_basis(BasisPtr inner, const TimeGrid& grid) {
  if (!inner) throw ConfigError("brownian basis needs an inner basis");
  if (inner->count() != grid.size()) {
    throw ConfigError("inner basis has " + std::to_string(inner->count()) +
                      " functions but the time grid has " + std::to_string(grid.size()) +
                      " points");
  }
  std::vector<CoefficientLaw> laws;
  laws.reserve(grid.size());
  for (double gap : grid.increments()) laws.push_back({0.0, gap, 0.0, gap});
  return {std::make_shared<const PrefixSumBasis>(std::move(inner)),
          CoefficientProfile(std::move(laws))};
}

}  // namespace levelcross
