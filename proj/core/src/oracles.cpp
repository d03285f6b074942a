#include "confgeo/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "confgeo/errors.hpp"

namespace confgeo::oracles {

namespace {

constexpr double kInvariantTol = 1e-12;

// Third-order derivatives of Y = N/D from those of N (vector) and D (scalar),
// via Leibniz on N = Y D.
struct Quotient3 {
  Vec y, dy, d2y, d3y;
};

Quotient3 quotient3(const Vec& n, const Vec& dn, const Vec& d2n, const Vec& d3n,
                    double d, double dd, double d2d, double d3d) {
  if (std::abs(d) < kInvariantTol) throw PoleHit("quotient denominator vanished");
  Quotient3 q;
  q.y = n / d;
  q.dy = (dn - q.y * dd) / d;
  q.d2y = (d2n - 2.0 * q.dy * dd - q.y * d2d) / d;
  q.d3y = (d3n - 3.0 * q.d2y * dd - 3.0 * q.dy * d2d - q.y * d3d) / d;
  return q;
}

}  // namespace

CircleParams make_circle(Vec x0, Vec u0, Vec a0) {
  if (x0.size() != u0.size() || x0.size() != a0.size())
    throw BadParams("make_circle: dimension mismatch");
  if (std::abs(u0.norm() - 1.0) > kInvariantTol)
    throw BadParams("make_circle: |u0| must be 1");
  if (std::abs(u0.dot(a0)) > kInvariantTol)
    throw BadParams("make_circle: <u0, a0> must vanish");
  return CircleParams{std::move(x0), std::move(u0), std::move(a0)};
}

Vec circle_point(const CircleParams& p, double t) {
  const double k2 = p.a0.squaredNorm();
  return p.x0 + (t * p.u0 + t * t * p.a0) / (1.0 + t * t * k2);
}

CurveModel circle_model(const CircleParams& p) {
  const double k2 = p.a0.squaredNorm();
  CurveModel m;
  auto jet = [p, k2](double t) {
    const Vec n = t * p.u0 + t * t * p.a0;
    const Vec dn = p.u0 + 2.0 * t * p.a0;
    const Vec d2n = 2.0 * p.a0;
    const Vec d3n = Vec::Zero(p.u0.size());
    const double d = 1.0 + t * t * k2;
    return quotient3(n, dn, d2n, d3n, d, 2.0 * k2 * t, 2.0 * k2, 0.0);
  };
  m.x = [p, jet](double t) { return Vec(p.x0 + jet(t).y); };
  m.dx = [jet](double t) { return jet(t).dy; };
  m.d2x = [jet](double t) { return jet(t).d2y; };
  m.d3x = [jet](double t) { return jet(t).d3y; };
  return m;
}

Vec circle_center(const CircleParams& p) {
  const double k2 = p.a0.squaredNorm();
  if (k2 < kInvariantTol) throw BadParams("circle_center: a0 = 0 is a straight line");
  return p.x0 + p.a0 / (2.0 * k2);
}

SpiralParams make_spiral(Vec p0, Vec q0, Vec r0, double c, double rate) {
  if (p0.size() != q0.size() || p0.size() != r0.size())
    throw BadParams("make_spiral: dimension mismatch");
  if (std::abs(p0.dot(q0)) > kInvariantTol * (1.0 + p0.norm() * q0.norm()))
    throw BadParams("make_spiral: <p0, q0> must vanish");
  if (std::abs(p0.norm() - q0.norm()) > kInvariantTol * (1.0 + p0.norm()))
    throw BadParams("make_spiral: |p0| must equal |q0|");
  if (std::abs(c) < kInvariantTol) throw BadParams("make_spiral: c must be nonzero");
  if (std::abs(rate) < kInvariantTol) throw BadParams("make_spiral: rate must be nonzero");
  return SpiralParams{std::move(p0), std::move(q0), std::move(r0), c, rate};
}

namespace {

// X(t) - r0 = Re[(p0 - i q0) e^{z r t}] with z = 1 + i c; the k-th time
// derivative is Re[(p0 - i q0) (z r)^k e^{z r t}].
Vec spiral_deriv(const SpiralParams& p, double t, int order) {
  const std::complex<double> z(1.0, p.c);
  const std::complex<double> zr = z * p.rate;
  std::complex<double> w = std::exp(zr * t);
  for (int k = 0; k < order; ++k) w *= zr;
  return Vec(w.real() * p.p0 + w.imag() * p.q0);
}

}  // namespace

Vec spiral_point(const SpiralParams& p, double t) { return p.r0 + spiral_deriv(p, t, 0); }

CurveModel spiral_model(const SpiralParams& p) {
  CurveModel m;
  m.x = [p](double t) { return Vec(p.r0 + spiral_deriv(p, t, 0)); };
  m.dx = [p](double t) { return spiral_deriv(p, t, 1); };
  m.d2x = [p](double t) { return spiral_deriv(p, t, 2); };
  m.d3x = [p](double t) { return spiral_deriv(p, t, 3); };
  return m;
}

SpiralParams spiral_through(const Vec& x0, const Vec& u0, const Vec& a0) {
  const double u2 = u0.squaredNorm();
  if (u2 < kInvariantTol) throw NullVelocity("spiral_through: |u0| = 0");
  const double alpha = u0.dot(a0) / u2;
  if (std::abs(alpha) < kInvariantTol)
    throw BadParams("spiral_through: <u0,a0> = 0 gives a circle, not a spiral");
  const double w2 = a0.squaredNorm() / u2 - alpha * alpha;
  if (w2 < kInvariantTol)
    throw BadParams("spiral_through: degenerate jet (|a0|^2 |u0|^2 <= <u0,a0>^2)");
  const double w = std::sqrt(w2);
  const double s2 = alpha * alpha + w2;
  SpiralParams p;
  p.p0 = (2.0 * alpha * u0 - a0) / s2;
  p.q0 = ((w2 - alpha * alpha) * u0 + alpha * a0) / (w * s2);
  p.r0 = x0 - p.p0;
  p.c = w / alpha;
  p.rate = alpha;
  return p;
}

Vec special_conformal(const Vec& x, const Vec& b) {
  const double d = 1.0 - 2.0 * x.dot(b) + b.squaredNorm() * x.squaredNorm();
  if (std::abs(d) < kInvariantTol) throw PoleHit("special_conformal: pole hit");
  return Vec((x - x.squaredNorm() * b) / d);
}

Vec special_conformal_inverse(const Vec& y, const Vec& b) {
  return special_conformal(y, Vec(-b));
}

CurveModel special_conformal_model(const CurveModel& model, const Vec& b) {
  const Vec bc = b;
  auto jet = [model, bc](double t) {
    const Vec x = model.x(t);
    const Vec dx = model.dx(t);
    const Vec d2x = model.d2x(t);
    const Vec d3x = model.d3x(t);
    const double b2 = bc.squaredNorm();
    const double s0 = x.squaredNorm();
    const double s1 = 2.0 * x.dot(dx);
    const double s2 = 2.0 * (dx.squaredNorm() + x.dot(d2x));
    const double s3 = 2.0 * (3.0 * dx.dot(d2x) + x.dot(d3x));
    const Vec n = x - s0 * bc;
    const Vec dn = dx - s1 * bc;
    const Vec d2n = d2x - s2 * bc;
    const Vec d3n = d3x - s3 * bc;
    const double d = 1.0 - 2.0 * x.dot(bc) + b2 * s0;
    const double dd = -2.0 * dx.dot(bc) + b2 * s1;
    const double d2d = -2.0 * d2x.dot(bc) + b2 * s2;
    const double d3d = -2.0 * d3x.dot(bc) + b2 * s3;
    return quotient3(n, dn, d2n, d3n, d, dd, d2d, d3d);
  };
  CurveModel m;
  m.x = [jet](double t) { return jet(t).y; };
  m.dx = [jet](double t) { return jet(t).dy; };
  m.d2x = [jet](double t) { return jet(t).d2y; };
  m.d3x = [jet](double t) { return jet(t).d3y; };
  return m;
}

Vec sphere_lift(const Vec& x) {
  const int n = static_cast<int>(x.size());
  const double s = x.squaredNorm();
  Vec p(n + 1);
  p.head(n) = 2.0 * x / (1.0 + s);
  p(n) = (s - 1.0) / (1.0 + s);
  return p;
}

Vec sphere_lift_tangent(const Vec& x, const Vec& v) {
  const int n = static_cast<int>(x.size());
  const double f = 1.0 / (1.0 + x.squaredNorm());
  const double xv = x.dot(v);
  Vec dp(n + 1);
  dp.head(n) = 2.0 * f * v - 4.0 * f * f * xv * x;
  dp(n) = 4.0 * f * f * xv;
  return dp;
}

Vec stereographic(const Vec& p) {
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 1) throw BadParams("stereographic: ambient dimension too small");
  const double denom = 1.0 - p(n);
  if (std::abs(denom) < kInvariantTol)
    throw PoleHit("stereographic: north pole has no chart image");
  return Vec(p.head(n) / denom);
}

double meridian_angle(const Vec& x, const Vec& v) {
  const Vec p = sphere_lift(x);
  const Vec dp = sphere_lift_tangent(x, v);
  const int n = static_cast<int>(p.size()) - 1;
  // Meridian direction: north pole direction projected to the tangent plane.
  Vec north = Vec::Zero(n + 1);
  north(n) = 1.0;
  Vec m = north - north.dot(p) * p;
  const double mn = m.norm(), dn = dp.norm();
  if (mn < kInvariantTol) throw PoleHit("meridian_angle: at a pole");
  if (dn < kInvariantTol) throw BadParams("meridian_angle: zero curve direction");
  const double c = std::clamp(m.dot(dp) / (mn * dn), -1.0, 1.0);
  return std::acos(c);
}

Vec first_integral_c(const Vec& u, const Vec& a) {
  const double u2 = u.squaredNorm();
  if (u2 < kInvariantTol) throw NullVelocity("first_integral_c: |U|^2 = 0");
  const double a2 = a.squaredNorm();
  const double ua = u.dot(a);
  return Vec((0.5 * a2 / (u2 * u2) - 2.0 * ua * ua / (u2 * u2 * u2)) * u +
             ua / (u2 * u2) * a);
}

ArcReductionReport arc_reduction_residual(const CurveModel& model, const Vec& c_vec,
                                          const std::vector<double>& ts) {
  if (ts.empty()) throw BadParams("arc_reduction_residual: no sample times");
  struct Sample {
    Vec u, uddot;
    double hdot, h_term, cu_resid;  // h_term = H^2 - 3 Hdot
    double m;                       // pointwise m recovered by dotting with u
  };
  std::vector<Sample> samples;
  samples.reserve(ts.size());
  for (double t : ts) {
    const Vec dx = model.dx(t);
    const Vec d2x = model.d2x(t);
    const Vec d3x = model.d3x(t);
    const double hd = dx.norm();
    if (hd < kInvariantTol) throw NullVelocity("arc_reduction_residual: |U| = 0");
    const double hdd = dx.dot(d2x) / hd;
    const double hddd = (d2x.squaredNorm() + dx.dot(d3x)) / hd - hdd * hdd / hd;
    const Vec u = dx / hd;
    const Vec ddu = d3x / hd - 2.0 * d2x * hdd / (hd * hd) - dx * hddd / (hd * hd) +
                    2.0 * dx * hdd * hdd / (hd * hd * hd);
    const double bigH = hdd / hd;
    const double bigHdot = hddd / hd - hdd * hdd / (hd * hd);
    Sample s;
    s.u = u;
    s.uddot = ddu;
    s.hdot = hd;
    s.h_term = bigH * bigH - 3.0 * bigHdot;
    s.cu_resid = c_vec.dot(u) + bigHdot / hd;
    // <uddot, u> + (h_term + m) - hdot <C,u> = 0, |u| = 1.
    s.m = -ddu.dot(u) - s.h_term + hd * c_vec.dot(u);
    samples.push_back(std::move(s));
  }
  ArcReductionReport rep;
  for (const Sample& s : samples) rep.m_mean += s.m;
  rep.m_mean /= static_cast<double>(samples.size());
  for (const Sample& s : samples) {
    const Vec resid = s.uddot + (s.h_term + rep.m_mean) * s.u - s.hdot * c_vec;
    rep.ode_residual = std::max(rep.ode_residual, resid.norm());
    rep.dot_residual = std::max(rep.dot_residual, std::abs(s.cu_resid));
    rep.m_spread = std::max(rep.m_spread, std::abs(s.m - rep.m_mean));
  }
  return rep;
}

}  // namespace confgeo::oracles
