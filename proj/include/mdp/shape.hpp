// Limit-shape numerics: the dilogarithm, the horizon constant T_q solving
// e^{-qT} = 1 - e^{-T}, the area constant theta_q with
// theta_q^2 = q T_q^2/2 + Li2(1 - e^{-T_q}), the curve family phi_T(t;q),
// the fixed-length horizon T_*(tau;q), and the duality/conservation
// identities T_{1/q} = q T_q and theta_q^2 + theta_{1/q}^2 = pi^2/6.
//
// Everything here is a pure function of its arguments; q = 0 is represented
// by an infinite horizon.
#ifndef MDP_SHAPE_HPP
#define MDP_SHAPE_HPP

#include <utility>
#include <vector>

namespace mdp {

inline constexpr double kPi = 3.141592653589793;
inline constexpr double kPiSquaredOver6 = 1.6449340668482264;

// Li2(x) on [0,1], absolute error <= 1e-12. Series for x <= 1/2, the
// reflection identity Li2(x) + Li2(1-x) = pi^2/6 - log x log(1-x) above.
double dilog(double x);

// Unique positive root of e^{-qT} = 1 - e^{-T}; q > 0.
double solve_Tq(double q);

// theta_q; q = 0 gives pi/sqrt(6).
double theta(double q);

// theta_q(T) = sqrt(q T^2/2 + Li2(1 - e^{-T})); T may be +infinity (q = 0).
double theta_of_T(double q, double T);

// phi_T(t;q) = q(T-t) + log((1-e^{-T})/(1-e^{-t})) for 0 < t <= T, else 0.
// T = +infinity (q = 0) gives -log(1 - e^{-t}).
double phi(double q, double T, double t);

// Integral of phi_T(.;q) over (0,T) by adaptive Simpson; at T = T_q this is
// theta_q^2. The log singularity at t -> 0 is handled by substituting t = e^u.
double curve_area(double q, double T);

// Unique positive root of tau * theta_q(T) = T, for 0 < tau < sqrt(2/q)
// (tau unrestricted when q = 0). Throws DomainError at or past the boundary.
double solve_T_star(double q, double tau);

struct DualityCheck {
  double lhs;     // T_{1/q}
  double rhs;     // q * T_q
  double defect;  // |lhs - rhs|
};
DualityCheck verify_duality(double q);

// |theta_q^2 + theta_{1/q}^2 - pi^2/6|.
double verify_conservation(double q);

enum class CurveScaling { Intrinsic, UnitArea };

// Points on the limit curve. Intrinsic: (t, phi_T(t;q)) on a grid over
// (0, min(T, t_cap)]. UnitArea: (t, phi_T(t*theta;q)/theta) with
// theta = theta_q(T), so the enclosed area is 1.
std::vector<std::pair<double, double>> sample_curve(double q, double T, CurveScaling scaling,
                                                    int n_points);

// Bundle (q, T_q, theta_q) used by reports and the CLI.
struct ShapeConstants {
  double q;
  double T;      // +infinity for q = 0
  double theta;
  static ShapeConstants for_gap(double q);
};

}  // namespace mdp

#endif  // MDP_SHAPE_HPP
