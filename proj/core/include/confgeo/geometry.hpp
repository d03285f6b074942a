#pragma once

#include <functional>
#include <optional>
#include <string>

#include "confgeo/errors.hpp"
#include "confgeo/types.hpp"

namespace confgeo {

struct FdOptions {
  // Step for nested central differences of metric components (2nd order).
  double h = 1e-4;
  // Step for the 4-point stencil applied on top of analytic partials.
  double h_analytic = 1e-3;
};

// Strictly positive conformal factor Omega(x) with optional analytic
// derivatives; finite differences fill in whatever is missing.
class ConformalFactor {
 public:
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // optional
  std::function<Mat(const Vec&)> hessian;   // optional

  double operator()(const Vec& x) const;
  Vec grad(const Vec& x, const FdOptions& fd = {}) const;
  Mat hess(const Vec& x, const FdOptions& fd = {}) const;
  // Upsilon_a = d_a log Omega (1-form components).
  Vec upsilon(const Vec& x, const FdOptions& fd = {}) const;
  // d_a Upsilon_b.
  Mat upsilon_jacobian(const Vec& x, const FdOptions& fd = {}) const;
  bool has_analytic() const { return static_cast<bool>(gradient) && static_cast<bool>(hessian); }

  static ConformalFactor constant(double c);
  static ConformalFactor sphere();              // 2 / (1 + |x|^2)
  static ConformalFactor exponential(Vec k);    // exp(<k, x>)
  static ConformalFactor from_expression(const std::string& expr);
};

enum class MetricKind { Flat, ConformallyFlat, General };

// How much of the curvature hierarchy geometry_jet computes.
//   Connection: g, Gamma, dGamma
//   Curvature:  + Riemann, Ricci, scalar, Schouten, Weyl
//   Full:       + nabla P (one more derivative, finite-differenced)
enum class JetLevel { Connection, Curvature, Full };

class MetricSpec {
 public:
  int dim = 0;
  MetricKind kind = MetricKind::Flat;
  std::string id;       // used in trajectory metadata
  Vec signature;        // diagonal of the flat representative, entries +-1

  // General metrics: components and optional analytic partials.
  std::function<Mat(const Vec&)> components;
  std::function<Tensor3(const Vec&)> d_components;    // [c](a,b) = d_c g_ab
  std::function<Tensor4(const Vec&)> d2_components;   // [c][d](a,b) = d_c d_d g_ab

  // Conformally flat metrics: g = Omega^2 * diag(signature).
  std::optional<ConformalFactor> factor;

  Mat g(const Vec& x) const;
  Tensor3 dg(const Vec& x, const FdOptions& fd = {}) const;
  Tensor4 d2g(const Vec& x, const FdOptions& fd = {}) const;
  bool has_analytic_partials() const;
  bool is_flat() const { return kind == MetricKind::Flat; }

  static MetricSpec flat_euclidean(int n);
  static MetricSpec flat_minkowski(int n);
  static MetricSpec round_sphere_stereographic(int n);
  static MetricSpec conformally_flat(int n, ConformalFactor omega,
                                     std::string id = "conformally-flat");
  static MetricSpec general(int n, std::function<Mat(const Vec&)> components,
                            std::string id = "general");
  // Accepts the built-in names plus "conformally-flat(expr)".
  static MetricSpec from_name(const std::string& name, int dim);
};

// Pointwise curvature data of a metric.  Index conventions:
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   riemann(a,b,c,d)     = R^a_bcd   with R(e_c, e_d) e_b = R^a_bcd e_a
//   riemann_low(a,b,c,d) = g_ae R^e_bcd
//   ricci(a,b)           = R^c_acb
//   schouten             = (ricci - scalar*g/(2(n-1))) / (n-2)
//   weyl_low             = riemann_low minus the Schouten Kulkarni-Nomizu part
//   grad_schouten(c,a,b) = nabla_c P_ab
struct GeometryJet {
  Vec x;
  int n = 0;
  JetLevel level = JetLevel::Full;
  Mat g, g_inv;
  Tensor3 gamma;    // Gamma^a_bc
  Tensor4 dgamma;   // (e,a,b,c) = d_e Gamma^a_bc
  Tensor4 riemann;
  Tensor4 riemann_low;
  Mat ricci;
  double scalar = 0.0;
  Mat schouten;
  Mat schouten_endo;  // (P#)^a_b = g^ac P_cb
  Tensor4 weyl_low;
  Tensor3 grad_schouten;

  double inner(const Vec& v, const Vec& w) const { return v.dot(g * w); }
  double norm2(const Vec& v) const { return inner(v, v); }
  Vec raise(const Vec& oneform) const { return g_inv * oneform; }
  Vec lower(const Vec& v) const { return g * v; }
  // P(v, w)
  double schouten_q(const Vec& v, const Vec& w) const { return v.dot(schouten * w); }
  // P#(v)
  Vec schouten_sharp(const Vec& v) const { return schouten_endo * v; }
  // Gamma(v, w)^a = Gamma^a_bc v^b w^c
  Vec gamma_quad(const Vec& v, const Vec& w) const;
};

GeometryJet geometry_jet(const MetricSpec& spec, const Vec& x,
                         JetLevel level = JetLevel::Full,
                         const FdOptions& fd = {});

// g -> Omega^2 g, composing analytic partials when both sides have them.
MetricSpec rescale(const MetricSpec& spec, const ConformalFactor& omega);

// Schouten tensor of Omega^2 g from the transformation law
//   P^ = P - nabla Upsilon + Upsilon (x) Upsilon - 1/2 |Upsilon|^2 g.
// The sign and weight of the |Upsilon|^2 term were fixed by requiring
// agreement with geometry_jet on the rescaled metric.
Mat rescaled_schouten(const GeometryJet& jet, const ConformalFactor& omega,
                      const FdOptions& fd = {});

// A^ = A - |U|^2 Upsilon# + 2 Upsilon(U) U  (same coordinate curve, new scale).
Vec rescaled_acceleration(const GeometryJet& jet, const CurveState& state,
                          const ConformalFactor& omega, const FdOptions& fd = {});

// Guard helpers shared by the dynamics/tractor modules.
double checked_norm2(const GeometryJet& jet, const Vec& u);  // throws NullVelocity

}  // namespace confgeo
