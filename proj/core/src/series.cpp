// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0

#include "percell/series.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace percell {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGlWeights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

// Fixed composite Gauss-Legendre quadrature (panels x 16 nodes).
double gauss_panels(const std::function<double(double)>& f, double a, double b,
                    int panels) {
  double total = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double acc = 0.0;
    for (int k = 0; k < 16; ++k) acc += kGlWeights[k] * f(mid + 0.5 * h * kGlNodes[k]);
    total += 0.5 * h * acc;
  }
  return total;
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 36);
}

// Squared gradient of V(s,t) = s t / ((s-1)^2 + (t-1)^2)^(5/4) at the point
// with polar coordinates (rho, theta) about (1,1). Computed directly from
// the cartesian definition, with D = rho^2 on the sampling circle.
double grad_v_squared(double rho, double theta) {
  const double s = 1.0 + rho * std::cos(theta);
  const double t = 1.0 + rho * std::sin(theta);
  const double d = rho * rho;
  const double d54 = std::pow(d, -1.25);
  const double d94 = std::pow(d, -2.25);
  const double vs = t * d54 - 2.5 * s * t * (s - 1.0) * d94;
  const double vt = s * d54 - 2.5 * s * t * (t - 1.0) * d94;
  return vs * vs + vt * vt;
}

// Angular integral of |grad V|^2 * rho over [lo, hi] at fixed rho.
double competitor_ring(double rho, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return rho * gauss_panels([rho](double th) { return grad_v_squared(rho, th); },
                            lo, hi, 4);
}

// Ring integral over the reduced angular region used by the moment
// evaluation: [-arcsin(1/rho), pi/2 + arcsin(1/rho)].
double competitor_ring_reduced(double rho) {
  const double phi = std::asin(1.0 / rho);
  return competitor_ring(rho, -phi, 0.5 * kPi + phi);
}

// Ring integral over the near-origin sliver (-arccos(-1/rho), -pi + arcsin(1/rho)),
// nonempty only for rho in (1, sqrt 2).
double competitor_ring_pocket(double rho) {
  if (rho * rho >= 2.0) return 0.0;
  const double lo = -std::acos(-1.0 / rho);
  const double hi = -kPi + std::asin(1.0 / rho);
  return competitor_ring(rho, lo, hi);
}

}  // namespace

double jinf_closed_form() { return kPi * (kPi * kPi / 3.0 - 1.0); }

double jinf_partial_series(std::int64_t terms) {
  if (terms < 2) throw std::invalid_argument("jinf_partial_series: need terms >= 2");
  double acc = 0.0;  // descending order for rounding accuracy
  for (std::int64_t m = terms; m >= 2; --m) acc += 1.0 / (static_cast<double>(m) * static_cast<double>(m));
  return kPi * (1.0 + 2.0 * acc);
}

double jinf_series_accurate() {
  const std::int64_t M = 20000;
  double acc = 0.0;
  for (std::int64_t m = M; m >= 2; --m) acc += 1.0 / (static_cast<double>(m) * static_cast<double>(m));
  const double Md = static_cast<double>(M);
  // Euler-Maclaurin completion of sum_{m>M} m^-2.
  const double tail = 1.0 / Md - 1.0 / (2.0 * Md * Md) + 1.0 / (6.0 * Md * Md * Md);
  return kPi * (1.0 + 2.0 * (acc + tail));
}

double jhp_series(double b) {
  if (!(b > 1.0)) {
    throw std::invalid_argument(
        "jhp_series: requires b > 1 (the tangent case b = 1 is jinf_closed_form)");
  }
  const double alpha2 = b * b - 1.0;
  const double tau0 = std::acosh(b);
  double sum = 0.0;
  const long n_min = std::max(8L, static_cast<long>(std::ceil(3.0 / tau0)));
  for (long n = 1; n <= 50'000'000L; ++n) {
    const double x = static_cast<double>(n) * tau0;
    const double coth = x > 19.0 ? 1.0 : 1.0 / std::tanh(x);
    const double term = static_cast<double>(n) * std::exp(-2.0 * x) * coth;
    sum += term;
    if (n >= n_min && term < 1e-15 * sum) break;
  }
  return 2.0 * kPi * alpha2 / tau0 + 4.0 * kPi * alpha2 * sum;
}

double jhp_lower_bound(double b) {
  if (!(b > 1.0)) throw std::invalid_argument("jhp_lower_bound: requires b > 1");
  const double tau0 = std::acosh(b);
  return kPi * std::sinh(2.0 * tau0) / tau0;
}

CompetitorEnergy competitor_energy(double quad_tol) {
  CompetitorEnergy out;
  out.reference = 55.0 / 18.0 + 275.0 * kPi / 64.0;

  // Moment integrals of the angular reduction:
  //   A_k = int_1^inf rho^-k arcsin(1/rho) drho, C_k with sqrt(rho^2-1),
  //   B_k = int_1^inf rho^-k drho.
  const double a2 = kPi / 2.0 - 1.0;
  const double a4 = kPi / 6.0 - 2.0 / 9.0;
  const double a6 = kPi / 10.0 - 8.0 / 75.0;
  const double c4 = 1.0 / 3.0;
  const double c6 = 2.0 / 15.0;
  const double b2 = 1.0;
  const double b4 = 1.0 / 3.0;
  const double b6 = 1.0 / 5.0;
  out.closed_form = (204.0 * a2 + 51.0 * kPi * b2 + 628.0 * c4 + 1248.0 * a4 +
                     312.0 * kPi * b4 + 1248.0 * b4 + 2840.0 * c6 + 2400.0 * a6 +
                     1600.0 * b6 + 600.0 * kPi * b6) /
                    192.0;

  // Independent quadrature. Near rho = 1 substitute rho = 1 + x^2 to absorb
  // the sqrt(rho^2-1) derivative blowup; beyond rho = 2 substitute rho = 2/v
  // so the decaying tail becomes a bounded integrand on (0, 1].
  const double near = adaptive_simpson(
      [](double x) { return competitor_ring_reduced(1.0 + x * x) * 2.0 * x; }, 0.0,
      1.0, quad_tol / 3.0);
  const double tail = adaptive_simpson(
      [](double v) {
        const double vv = std::max(v, 1e-10);  // integrand has a finite v->0 limit
        const double rho = 2.0 / vv;
        return competitor_ring_reduced(rho) * 2.0 / (vv * vv);
      },
      0.0, 1.0, quad_tol / 3.0);
  out.quadrature = near + tail;

  const double x_max = std::sqrt(std::sqrt(2.0) - 1.0);
  out.pocket = adaptive_simpson(
      [](double x) { return competitor_ring_pocket(1.0 + x * x) * 2.0 * x; }, 0.0,
      x_max, 1e-12);
  return out;
}

double coercive_A0() { return 2.0 * std::sqrt(2.0) / 3.0; }

double coercive_B0() { return std::sqrt(2.0) - 0.5 - kPi / 4.0; }

}  // namespace percell
