#include "pathkernel/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "pathkernel/errors.hpp"

namespace pathkernel::quad {

namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson_rule(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

void refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth,
            Result& acc) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson_rule(p.m, p.fm, frm, p.b, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    if (depth <= 0 && std::abs(delta) > 15.0 * tol) acc.converged = false;
    acc.value += left + right + delta / 15.0;
    acc.error += std::abs(delta) / 15.0;
    return;
  }
  refine(f, Panel{p.a, p.fa, lm, flm, p.m, p.fm, left}, tol / 2.0, depth - 1, acc);
  refine(f, Panel{p.m, p.fm, rm, frm, p.b, p.fb, right}, tol / 2.0, depth - 1, acc);
}

}  // namespace

Result simpson(const std::function<double(double)>& f, double a, double b, double tol, int panels,
               int max_depth) {
  Result acc;
  if (a == b) return acc;
  const double h = (b - a) / panels;
  double fa = f(a);
  for (int i = 0; i < panels; ++i) {
    const double pa = a + i * h;
    const double pb = (i + 1 == panels) ? b : a + (i + 1) * h;
    const double pm = 0.5 * (pa + pb);
    const double fm = f(pm);
    const double fb = f(pb);
    refine(f, Panel{pa, fa, pm, fm, pb, fb, simpson_rule(pa, fa, fm, pb, fb)}, tol / panels,
           max_depth, acc);
    fa = fb;
  }
  if (!std::isfinite(acc.value)) acc.converged = false;
  return acc;
}

Result real_line(const std::function<double(double)>& f, double center, double scale, double tol,
                 int panels) {
  const double half_pi = std::numbers::pi / 2.0;
  auto g = [&](double theta) {
    if (std::abs(theta) >= half_pi) return 0.0;
    const double c = std::cos(theta);
    const double v = f(center + scale * std::tan(theta)) * scale / (c * c);
    return std::isfinite(v) ? v : 0.0;
  };
  // endpoints map to +-infinity; shrink by one ulp so tan stays finite
  const double edge = std::nextafter(half_pi, 0.0);
  return simpson(g, -edge, edge, tol, panels);
}

double simpson_or_throw(const std::function<double(double)>& f, double a, double b, double tol,
                        int panels) {
  const Result r = simpson(f, a, b, tol, panels);
  if (!r.converged) throw NumericError("adaptive quadrature did not converge");
  return r.value;
}

Maximum maximize(const std::function<double(double)>& f, double a, double b, int grid,
                 double xtol) {
  const double h = (b - a) / grid;
  int best = 0;
  double best_v = f(a);
  for (int i = 1; i <= grid; ++i) {
    const double v = f(a + i * h);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double lo = a + std::max(0, best - 1) * h;
  double hi = a + std::min(grid, best + 1) * h;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > xtol * std::max(1.0, std::abs(lo))) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  Maximum m{0.5 * (lo + hi), f(0.5 * (lo + hi))};
  if (best_v > m.value) m = Maximum{a + best * h, best_v};
  return m;
}

}  // namespace pathkernel::quad
