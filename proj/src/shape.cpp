#include "mdp/shape.hpp"

#include <cmath>
#include <limits>

#include "mdp/errors.hpp"

namespace mdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 - e^{-t}) without cancellation at either end.
double log_one_minus_exp(double t) {
  return t < 0.693 ? std::log(-std::expm1(-t)) : std::log1p(-std::exp(-t));
}

double dilog_series(double x) {
  // sum x^k / k^2 for x <= 1/2; terms fall below 1e-18 within ~55 terms
  double sum = 0.0, pw = x;
  for (int k = 1; k < 200; ++k) {
    double term = pw / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * (1.0 + sum)) break;
    pw *= x;
  }
  return sum;
}

template <typename F>
double simpson_recurse(const F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  // Floor the per-half tolerance at rounding noise so the recursion cannot
  // chase digits that double precision does not have.
  double half_tol = std::max(0.5 * tol, 1e-17);
  return simpson_recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 24);
}

}  // namespace

double dilog(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("dilog argument must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return kPiSquaredOver6;
  if (x <= 0.5) return dilog_series(x);
  // route through the reflection identity so the series argument stays <= 1/2
  return kPiSquaredOver6 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
}

double solve_Tq(double q) {
  if (!(q > 0.0)) throw DomainError("solve_Tq needs q > 0 (q = 0 has an infinite horizon)");
  // g(t) = e^{-qt} - 1 + e^{-t} is strictly decreasing with g(0+) = 1 > 0.
  auto g = [q](double t) { return std::exp(-q * t) - 1.0 + std::exp(-t); };
  double lo = 1e-8, hi = 1e8;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {  // Newton polish
    double gt = g(t);
    double dg = -q * std::exp(-q * t) - std::exp(-t);
    double step = gt / dg;
    t -= step;
    if (!(t > 0.0)) t = 0.5 * (lo + hi);
  }
  return t;
}

double theta_of_T(double q, double T) {
  if (q < 0.0) throw DomainError("theta_of_T needs q >= 0");
  if (!(T > 0.0)) throw DomainError("theta_of_T needs T > 0");
  if (std::isinf(T)) {
    if (q > 0.0) return kInf;
    return std::sqrt(kPiSquaredOver6);
  }
  return std::sqrt(0.5 * q * T * T + dilog(-std::expm1(-T)));
}

double theta(double q) {
  if (q < 0.0) throw DomainError("theta needs q >= 0");
  if (q == 0.0) return std::sqrt(kPiSquaredOver6);
  return theta_of_T(q, solve_Tq(q));
}

double phi(double q, double T, double t) {
  if (!(t > 0.0)) throw DomainError("phi needs t > 0");
  if (q < 0.0) throw DomainError("phi needs q >= 0");
  if (std::isinf(T)) {
    if (q > 0.0) throw DomainError("phi: infinite horizon is only valid for q = 0");
    return -log_one_minus_exp(t);
  }
  if (!(T > 0.0)) throw DomainError("phi needs T > 0");
  if (t >= T) return 0.0;
  double value = q * (T - t) + log_one_minus_exp(T) - log_one_minus_exp(t);
  return value > 0.0 ? value : 0.0;
}

double curve_area(double q, double T) {
  if (q < 0.0) throw DomainError("curve_area needs q >= 0");
  double t_hi = std::isinf(T) ? 40.0 : T;  // phi(40;0) ~ 4e-18
  if (!(t_hi > 0.0)) throw DomainError("curve_area needs T > 0");
  double split = std::min(0.1, 0.5 * t_hi);
  // Near zero phi grows like -log t; substitute t = e^u to tame it.
  auto fu = [&](double u) {
    double t = std::exp(u);
    return phi(q, T, t) * t;
  };
  double head = adaptive_simpson(fu, std::log(1e-18), std::log(split), 5e-11);
  auto ft = [&](double t) { return phi(q, T, t); };
  double body = adaptive_simpson(ft, split, t_hi, 5e-11);
  return head + body;
}

double solve_T_star(double q, double tau) {
  if (q < 0.0) throw DomainError("solve_T_star needs q >= 0");
  if (!(tau > 0.0)) throw DomainError("solve_T_star needs tau > 0");
  if (q > 0.0 && !(tau < std::sqrt(2.0 / q)))
    throw DomainError("solve_T_star: tau >= sqrt(2/q) lies outside the admissible range");
  // Equivalent form: Li2(1 - e^{-T}) / T^2 = 1/tau^2 - q/2 =: R > 0, with a
  // strictly decreasing left-hand side; f(T) = Li2(1-e^{-T}) - R T^2 changes
  // sign exactly once.
  double R = 1.0 / (tau * tau) - 0.5 * q;
  auto f = [R](double T) { return dilog(-std::expm1(-T)) - R * T * T; };
  double hi = 1.0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e9) throw DomainError("solve_T_star bracket expansion failed");
  }
  double lo = hi > 1.0 ? 0.5 * hi : 1e-14;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

DualityCheck verify_duality(double q) {
  if (!(q > 0.0)) throw DomainError("verify_duality needs q > 0");
  double lhs = solve_Tq(1.0 / q);
  double rhs = q * solve_Tq(q);
  return {lhs, rhs, std::fabs(lhs - rhs)};
}

double verify_conservation(double q) {
  if (!(q > 0.0)) throw DomainError("verify_conservation needs q > 0");
  double a = theta(q), b = theta(1.0 / q);
  return std::fabs(a * a + b * b - kPiSquaredOver6);
}

std::vector<std::pair<double, double>> sample_curve(double q, double T, CurveScaling scaling,
                                                    int n_points) {
  if (n_points < 2) throw DomainError("sample_curve needs n_points >= 2");
  const double t_cap = 25.0;
  double horizon = std::isinf(T) ? t_cap : std::min(T, t_cap);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(n_points));
  if (scaling == CurveScaling::Intrinsic) {
    for (int i = 1; i <= n_points; ++i) {
      double t = horizon * static_cast<double>(i) / static_cast<double>(n_points);
      pts.emplace_back(t, phi(q, T, t));
    }
  } else {
    double th = theta_of_T(q, T);
    double x_hi = horizon / th;
    for (int i = 1; i <= n_points; ++i) {
      double x = x_hi * static_cast<double>(i) / static_cast<double>(n_points);
      pts.emplace_back(x, phi(q, T, x * th) / th);
    }
  }
  return pts;
}

ShapeConstants ShapeConstants::for_gap(double q) {
  if (q < 0.0) throw DomainError("shape constants need q >= 0");
  if (q == 0.0) return {0.0, kInf, std::sqrt(kPiSquaredOver6)};
  double T = solve_Tq(q);
  return {q, T, theta_of_T(q, T)};
}

}  // namespace mdp
