#include "levelcross/quadrature.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "levelcross/detail/accumulate.hpp"
#include "levelcross/detail/parallel.hpp"
#include "levelcross/errors.hpp"

namespace levelcross {
namespace {

// 15-point Kronrod abscissae and weights on [-1, 1] (QUADPACK dqk15); the
// odd-indexed abscissae, plus 0, are the 7-point Gauss-Legendre nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule {
  std::array<double, 15> node{};
  std::array<double, 15> kronrod{};
  std::array<double, 15> gauss{};
};

constexpr Rule make_rule() {
  Rule r;
  for (int i = 0; i < 7; ++i) {
    const double g = (i % 2 == 1) ? kWg[static_cast<std::size_t>(i / 2)] : 0.0;
    r.node[i] = -kXgk[i];
    r.node[14 - i] = kXgk[i];
    r.kronrod[i] = r.kronrod[14 - i] = kWgk[i];
    r.gauss[i] = r.gauss[14 - i] = g;
  }
  r.node[7] = 0.0;
  r.kronrod[7] = kWgk[7];
  r.gauss[7] = kWg[3];
  return r;
}

constexpr Rule kRule = make_rule();

struct Leaf {
  Rectangle cell;
  CellEstimate estimate;
};

std::array<Rectangle, 2> split(const Rectangle& r) {
  if (r.width() >= r.height()) {
    const double mid = 0.5 * (r.x_min + r.x_max);
    return {Rectangle(r.x_min, mid, r.y_min, r.y_max), Rectangle(mid, r.x_max, r.y_min, r.y_max)};
  }
  const double mid = 0.5 * (r.y_min + r.y_max);
  return {Rectangle(r.x_min, r.x_max, r.y_min, mid), Rectangle(r.x_min, r.x_max, mid, r.y_max)};
}

}  // namespace

CellEstimate integrate_cell(const std::function<double(Complex)>& f, const Rectangle& cell) {
  const double cx = 0.5 * (cell.x_min + cell.x_max);
  const double cy = 0.5 * (cell.y_min + cell.y_max);
  const double hx = 0.5 * cell.width();
  const double hy = 0.5 * cell.height();

  double kronrod = 0.0;
  double gauss = 0.0;
  for (std::size_t i = 0; i < 15; ++i) {
    const double x = cx + hx * kRule.node[i];
    double row_k = 0.0;
    double row_g = 0.0;
    for (std::size_t j = 0; j < 15; ++j) {
      const double fx = f(Complex(x, cy + hy * kRule.node[j]));
      row_k += kRule.kronrod[j] * fx;
      row_g += kRule.gauss[j] * fx;
    }
    kronrod += kRule.kronrod[i] * row_k;
    gauss += kRule.gauss[i] * row_g;
  }
  const double jac = hx * hy;
  return {kronrod * jac, std::abs(kronrod - gauss) * jac};
}

QuadratureResult integrate_density(const std::function<double(Complex)>& f,
                                   const Rectangle& region, const QuadratureOptions& options) {
  if (!(options.abs_tol > 0.0) || !(options.rel_tol > 0.0)) {
    throw ConfigError("quadrature tolerances must be > 0");
  }
  if (options.max_cells == 0) throw ConfigError("max_cells must be > 0");

  const double region_area = region.area();
  std::vector<Leaf> leaves;
  std::vector<Rectangle> pending{region};
  QuadratureResult result;

  for (;;) {
    std::vector<CellEstimate> fresh(pending.size());
    detail::parallel_for(pending.size(), options.threads,
                         [&](std::size_t i) { fresh[i] = integrate_cell(f, pending[i]); });
    for (std::size_t i = 0; i < pending.size(); ++i) leaves.push_back({pending[i], fresh[i]});
    pending.clear();

    detail::CompensatedSum total;
    detail::CompensatedSum total_err;
    for (const Leaf& leaf : leaves) {
      total += leaf.estimate.value;
      total_err += leaf.estimate.error;
    }
    result.value = total.value();
    result.error_estimate = total_err.value();
    result.cells_used = leaves.size();

    const double tol = std::max(options.abs_tol, options.rel_tol * std::abs(result.value));
    std::vector<std::size_t> failing;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const double share = tol * (leaves[i].cell.area() / region_area);
      if (leaves[i].estimate.error > share) failing.push_back(i);
    }
    if (failing.empty()) {
      result.converged = true;
      return result;
    }
    if (leaves.size() + failing.size() > options.max_cells) {
      result.converged = false;
      return result;
    }

    // Keep surviving leaves in order; children are evaluated next round and
    // appended in the order of their parents.
    std::vector<Leaf> kept;
    kept.reserve(leaves.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      if (next < failing.size() && failing[next] == i) {
        const auto halves = split(leaves[i].cell);
        pending.push_back(halves[0]);
        pending.push_back(halves[1]);
        ++next;
      } else {
        kept.push_back(leaves[i]);
      }
    }
    leaves = std::move(kept);
  }
}

}  // namespace levelcross
