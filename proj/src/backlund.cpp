#include <algorithm>
#include <cmath>
#include <limits>

#include "vweb/errors.hpp"
#include "vweb/numeric.hpp"

namespace vweb {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Index of the axis node closest to 0.
std::size_t base_index(const Axis& a) {
  double t = std::round(-a.origin / a.spacing);
  if (t < 0) return 0;
  return std::min(static_cast<std::size_t>(t), a.count - 1);
}

// Lagrange weights on nodes start..start+m-1 at fractional position t (in cells from start).
void lagrange_weights(double t, int m, double* w) {
  for (int i = 0; i < m; ++i) {
    double num = 1, den = 1;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      num *= t - j;
      den *= i - j;
    }
    w[i] = num / den;
  }
}

// Start and fractional offset of an m-point stencil for an m-point stencil around x.
std::size_t stencil(const Axis& a, double x, int m, double& t) {
  double u = (x - a.origin) / a.spacing;
  auto cell = static_cast<long>(std::floor(u));
  long start = cell - (m / 2 - 1);
  start = std::clamp(start, 0L, static_cast<long>(a.count) - m);
  t = u - static_cast<double>(start);
  return static_cast<std::size_t>(start);
}

// Six-point Lagrange interpolation along one grid row, using a window of
// finite samples around y; NaN when no such window exists.
double interpolate_row(const std::vector<double>& v, std::size_t row, std::size_t stride, const Axis& ax, double y) {
  double u = (y - ax.origin) / ax.spacing;
  auto n = static_cast<long>(ax.count);
  long cell = std::clamp(static_cast<long>(std::floor(u)), 0L, n - 2);
  auto ok = [&](long i) { return std::isfinite(v[row + static_cast<std::size_t>(i) * stride]); };
  if (!ok(cell) || !ok(cell + 1)) return kMissing;
  long lo = cell, hi = cell + 1;
  while (lo > 0 && cell - lo < 2 && ok(lo - 1)) --lo;
  while (hi + 1 < n && hi - lo < 5 && ok(hi + 1)) ++hi;
  while (lo > 0 && hi - lo < 5 && ok(lo - 1)) --lo;
  if (hi - lo < 5) return kMissing;
  double w[6];
  lagrange_weights(u - static_cast<double>(lo), 6, w);
  double acc = 0;
  for (int q = 0; q < 6; ++q) acc += w[q] * v[row + static_cast<std::size_t>(lo + q) * stride];
  return acc;
}

// Central first derivative along one axis; boundary nodes get no value, so a
// lower-order boundary stencil never feeds second differences downstream.
Grid derivative_grid(const Grid& g, std::size_t axis) {
  std::vector<double> out(g.size());
  const auto& v = g.values();
  std::size_t s = g.stride(axis);
  std::size_t n = g.axes()[axis].count;
  double h = g.axes()[axis].spacing;
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::size_t i = (k / s) % n;
    out[k] = i == 0 || i + 1 == n ? kMissing : (v[k + s] - v[k - s]) / (2 * h);
  }
  return Grid(g.axes(), g.unknown(), std::move(out));
}

void verify(BacklundResult& r, bool constructs_f) {
  PdeSystem target = backlund_target(r.output.dimension(), constructs_f);
  r.max_residual = 0;
  for (const auto& m : target.members) {
    r.residuals.push_back(residual_grid(m, r.output));
    r.max_residual = std::max(r.max_residual, r.residuals.back().max_abs);
  }
}

}  // namespace

ClosedFormField::ClosedFormField(const ClosedFormSolution& s, const Chart& chart) : form_(s.expression, chart, s.parameters) {}

double ClosedFormField::derivative(const std::vector<double>& x, std::size_t i) const { return form_.derivative(x, i); }

GridField::GridField(const Grid& h) {
  for (std::size_t i = 0; i < h.dimension(); ++i) d_.push_back(derivative_grid(h, i));
}

double GridField::derivative(const std::vector<double>& x, std::size_t i) const {
  const Grid& g = d_.at(i);
  std::size_t dim = g.dimension();
  if (x.size() != dim) fail(ErrorKind::ShapeMismatch, "point dimension differs from the grid");
  std::size_t start[4];
  double w[4][4];
  for (std::size_t a = 0; a < dim; ++a) {
    double t;
    start[a] = stencil(g.axes()[a], x[a], 4, t);
    lagrange_weights(t, 4, w[a]);
  }
  const auto& v = g.values();
  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) total *= 4;
  double acc = 0;
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t k = 0, rest = c;
    double wt = 1;
    for (std::size_t a = dim; a-- > 0;) {
      std::size_t o = rest % 4;
      rest /= 4;
      k += (start[a] + o) * g.stride(a);
      wt *= w[a][o];
    }
    acc += wt * v[k];
  }
  return acc;
}

BacklundResult backlund_h_to_f(const HField& h, const std::vector<Axis>& axes, const std::function<double(double)>& initial) {
  std::size_t dim = axes.size();
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.count;
  Grid f(axes, "f", std::vector<double>(total, kMissing));
  std::size_t last = dim - 1;
  const Axis& la = axes[last];
  std::vector<std::size_t> base(dim, 0);
  for (std::size_t a = 0; a < last; ++a) base[a] = base_index(axes[a]);

  auto& v = f.mutable_values();
  std::vector<std::size_t> idx = base;
  for (std::size_t i = 0; i < la.count; ++i) {
    idx[last] = i;
    double y = initial(la.at(i));
    if (!std::isfinite(y)) fail(ErrorKind::EvaluationDomain, "initial data is not finite");
    v[f.flat(idx)] = y;
  }

  std::vector<double> x(dim);
  for (std::size_t a = last; a-- > 0;) {
    const Axis& ax = axes[a];
    double hs = ax.spacing / 4;
    // Free axes a+1 .. last-1 and the last axis.
    std::size_t free_total = 1;
    for (std::size_t b = a + 1; b < dim; ++b) free_total *= axes[b].count;
    std::size_t reach = std::max(base[a], ax.count - 1 - base[a]);
    for (std::size_t s = 1; s <= reach; ++s) {
      for (int dir : {1, -1}) {
        long j = static_cast<long>(base[a]) + dir * static_cast<long>(s);
        if (j < 0 || j >= static_cast<long>(ax.count)) continue;
        for (std::size_t c = 0; c < free_total; ++c) {
          idx = base;
          idx[a] = static_cast<std::size_t>(j);
          std::size_t rest = c;
          for (std::size_t b = dim; b-- > a + 1;) {
            idx[b] = rest % axes[b].count;
            rest /= axes[b].count;
          }
          x = f.point(idx);
          // Trace the characteristic dp_last/dp_a = H_{a+1} back one layer at a
          // time until it lands inside a window of known values.
          double t = x[a], y = x[last];
          double dt = -dir * hs;
          auto rhs = [&](double tt, double yy) {
            x[a] = tt;
            x[last] = yy;
            return h.derivative(x, a + 1);
          };
          std::size_t node = f.flat(idx);
          double lo = la.at(0), hi = la.at(la.count - 1), eps = 1e-12 * la.spacing;
          std::vector<std::size_t> prev = idx;
          prev[last] = 0;
          for (long layer = j - dir;; layer -= dir) {
            for (int k = 0; k < 4; ++k) {
              double k1 = rhs(t, y);
              double k2 = rhs(t + dt / 2, y + dt / 2 * k1);
              double k3 = rhs(t + dt / 2, y + dt / 2 * k2);
              double k4 = rhs(t + dt, y + dt * k3);
              y += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
              t += dt;
            }
            if (!std::isfinite(y) || y < lo - eps || y > hi + eps) break;  // left the box
            prev[a] = static_cast<std::size_t>(layer);
            v[node] = interpolate_row(v, f.flat(prev), f.stride(last), la, y);
            if (std::isfinite(v[node]) || layer == static_cast<long>(base[a])) break;
          }
        }
      }
    }
  }

  BacklundResult r{f, 0, {}, 0, 0, std::nullopt};
  for (double y : r.output.values())
    if (!std::isfinite(y)) ++r.missing;
  verify(r, true);
  return r;
}

BacklundResult backlund_f_to_h(const Grid& f) {
  std::size_t dim = f.dimension();
  std::size_t last = dim - 1;
  std::vector<Grid> d;
  for (std::size_t a = 0; a < dim; ++a) d.push_back(derivative_grid(f, a));
  for (double y : d[last].values())
    if (std::isfinite(y) && std::abs(y) < 0.1) fail(ErrorKind::SmallDenominator, "|f_last| drops below 0.1 on the box");

  // g[b] = H_b for b = 1..last
  std::vector<std::vector<double>> g(dim);
  for (std::size_t b = 1; b < dim; ++b) {
    g[b].resize(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) g[b][k] = -d[b - 1].values()[k] / d[last].values()[k];
  }

  const auto& axes = f.axes();
  std::vector<std::size_t> base(dim, 0);
  for (std::size_t a = 1; a < dim; ++a) base[a] = base_index(axes[a]);
  std::vector<double> hv(f.size(), 0.0);
  for (std::size_t i0 = 0; i0 < axes[0].count; ++i0) {
    std::vector<std::size_t> idx = base;
    idx[0] = i0;
    hv[f.flat(idx)] = 0;  // gauge
    for (std::size_t b = 1; b < dim; ++b) {
      const Axis& ax = axes[b];
      std::size_t s = f.stride(b);
      std::size_t free_total = 1;
      for (std::size_t c = 1; c < b; ++c) free_total *= axes[c].count;
      for (std::size_t c = 0; c < free_total; ++c) {
        idx = base;
        idx[0] = i0;
        std::size_t rest = c;
        for (std::size_t e = b; e-- > 1;) {
          idx[e] = rest % axes[e].count;
          rest /= axes[e].count;
        }
        std::size_t k0 = f.flat(idx);
        for (std::size_t j = base[b] + 1; j < ax.count; ++j) {
          std::size_t k = k0 + (j - base[b]) * s;
          hv[k] = hv[k - s] + ax.spacing * (g[b][k] + g[b][k - s]) / 2;
        }
        for (std::size_t j = base[b]; j-- > 0;) {
          std::size_t k = k0 - (base[b] - j) * s;
          hv[k] = hv[k + s] - ax.spacing * (g[b][k] + g[b][k + s]) / 2;
        }
      }
    }
  }

  BacklundResult r{Grid(axes, "H", std::move(hv)), 0, {}, 0, 0, std::nullopt};
  for (double y : r.output.values())
    if (!std::isfinite(y)) ++r.missing;
  for (std::size_t k = 0; k < f.size(); ++k) {
    auto idx = f.unflat(k);
    bool inner = true;
    for (std::size_t a = 0; a < dim; ++a) inner = inner && idx[a] >= 1 && idx[a] + 1 < axes[a].count;
    if (!inner) continue;
    for (std::size_t b = 1; b < dim; ++b)
      for (std::size_t c = b + 1; c < dim; ++c) {
        double dcb = (g[b][k + f.stride(c)] - g[b][k - f.stride(c)]) / (2 * axes[c].spacing);
        double dbc = (g[c][k + f.stride(b)] - g[c][k - f.stride(b)]) / (2 * axes[b].spacing);
        double gap = std::abs(dcb - dbc);
        if (std::isfinite(gap)) r.closedness_defect = std::max(r.closedness_defect, gap);
      }
  }
  verify(r, false);
  return r;
}

PdeSystem backlund_target(std::size_t dim, bool constructs_f) {
  if (dim == 3) return pde_catalog(constructs_f ? "eq3" : "hyper_cr");
  if (dim == 4) return pde_catalog(constructs_f ? "sys2" : "sys3");
  fail(ErrorKind::ShapeMismatch, "Bäcklund correspondences exist in dimension 3 and 4");
}

}  // namespace vweb
