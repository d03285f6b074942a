#pragma once

#include <functional>

#include "confgeo/dynamics.hpp"
#include "confgeo/geometry.hpp"
#include "confgeo/types.hpp"

namespace confgeo {

// ---------------------------------------------------------------------------
// Ostrogradsky form of the flat fourth-order flow.  p is the momentum
// conjugate to x, r the momentum conjugate to U; the multiplier pair has been
// eliminated on the constraint surface.
struct OstroState {
  Vec x, u, p, r;
  int dim() const { return static_cast<int>(x.size()); }
};

// H = (1/2)|U|^2 |R|^2 - <U,R>^2 + <P,U>.
double ostro_hamiltonian(const OstroState& s);

// xdot = U, Udot = |U|^2 R - 2<U,R> U, Rdot = -|R|^2 U + 2<U,R> R - P,
// Pdot = 0.  Returned in the same slot layout as the state.
OstroState ostro_flow_rhs(const OstroState& s);

// Cross-formulation maps (flat chart).  R inverts Udot(R) on the 2-jet;
// P = -C where C is the first integral of the fourth-order flow.
OstroState ostro_from_jet(const CurveState& state);  // needs the 3-jet
CurveState jet_from_ostro(const OstroState& s);      // emits the 3-jet

// ---------------------------------------------------------------------------
// Flat Kahler structure: constant symplectic form, complex structure
// J = g^{-1} Omega with J^2 = -Id, and potential phi with dphi = Omega.
struct KahlerStructure {
  int n = 0;
  Mat omega_low;  // Omega_ab, antisymmetric, invertible
  Mat omega_up;   // Omega^{ab} with Omega_ab Omega^{ac} = delta_b^c
  Mat jmat;       // J^a_b (flat metric)
};
KahlerStructure make_kahler(const Mat& omega_low);
KahlerStructure standard_kahler(int n);
// phi_b = (1/2) x^a Omega_ab, so that d phi = Omega exactly.
Vec kahler_potential(const KahlerStructure& ks, const Vec& x);

// Magnetic geodesic flow Udot = e J(U); |U| and |A| = |e||U| are conserved.
struct MagneticDeriv {
  Vec dx, du;
};
MagneticDeriv magnetic_rhs(const KahlerStructure& ks, double e, const Vec& x,
                           const Vec& u);

// ---------------------------------------------------------------------------
// Poisson structure on (x, U, A) induced by the magnetic Lagrangian:
//   {x,A} = -Omega^{ab},  {U,U} = Omega^{ab},  {A,A} = w^2 Omega^{ab},
// all other blocks zero.
struct Observable {
  std::function<double(const Vec& x, const Vec& u, const Vec& a)> value;
  std::function<Vec(const Vec& x, const Vec& u, const Vec& a)> grad_x, grad_u, grad_a;
};
// Coordinate function z^i of block 0 (x), 1 (U), 2 (A).
Observable coordinate_observable(int block, int index, int n);

double poisson_bracket(const KahlerStructure& ks, double w, const Observable& f,
                       const Observable& h, const Vec& x, const Vec& u, const Vec& a);

// H = Omega(A, U); Hamilton's equations give xdot = U, Udot = A, Adot = -w^2 U.
double hamiltonian_au(const KahlerStructure& ks, const Vec& u, const Vec& a);
Cg3Deriv poisson_flow_rhs(double w, const CurveState& state);

// ---------------------------------------------------------------------------
// Dirac reduction of the first-order constrained system on the 6n phase
// space (x, P, U, R, lambda, S) with constraints
//   P - lambda = 0,  psi_a = R_a - (1/2) Omega_ab U^b = 0,  S = 0.
// The report carries the computed constraint matrix block {psi, psi} and the
// Dirac brackets that must reproduce {x,P} = Id, {U,U} = Omega^{ab}, {x,x}=0.
struct DiracReport {
  Mat c_psi_psi;   // {psi_c, psi_d}
  Mat uu_star;     // {U^a, U^b}*
  Mat xp_star;     // {x^a, P_b}*
  Mat xx_star;     // {x^a, x^b}*
  double max_residual = 0.0;
};
DiracReport dirac_bracket_check(const KahlerStructure& ks);

// ---------------------------------------------------------------------------
// Conformal-Killing-Yano pairs: Y a 2-form field, W a 1-form field, with
// optional analytic first derivatives (finite-differenced otherwise).
struct CkyPair {
  std::function<Mat(const Vec&)> y;       // Y_bc, antisymmetric
  std::function<Vec(const Vec&)> w;       // W_c
  std::function<Tensor3(const Vec&)> dy;  // optional: dy(a,b,c) = d_a Y_bc
  std::function<Mat(const Vec&)> dw;      // optional: dw(a,b) = d_a W_b
};
CkyPair constant_cky(const Mat& y0);                  // W = 0
CkyPair wedge_cky(const Vec& k);                      // Y_bc = x_b k_c - x_c k_b, W = k
CkyPair radial_noncky(const Mat& eps);                // Y = |x|^2 eps, W = 0 (control)

// R_abc = nabla_a Y_bc - nabla_[a Y_bc] - (g_ab W_c - g_ac W_b); zero iff the
// CKY equation holds at x.
Tensor3 cky_residual(const GeometryJet& jet, const CkyPair& pair, const Vec& x,
                     const FdOptions& fd = {});
// Symmetrized derivative nabla_(b W_c); zero iff W is Killing at x.
Mat killing_residual(const GeometryJet& jet, const CkyPair& pair, const Vec& x,
                     const FdOptions& fd = {});

// Q = Y(A, U) + W(U).
double first_integral_q(const CkyPair& pair, const CurveState& state);

// Displayed expansion of {Q, H} for the w^2 = |A|^2 flow on flat space:
//   (d_a Y_bc + g_ac W_b - g_ab W_c) U^a U^c A^b + U^a U^b d_a W_b
//   + Y_bc (A^b A^c - |A|^2 U^b U^c).
// Vanishes at every state iff the pair is CKY with Killing W.
double q_commutator(const GeometryJet& jet, const CkyPair& pair, const CurveState& state,
                    const FdOptions& fd = {});

}  // namespace confgeo
