#include "confgeo/geometry.hpp"

#include <cmath>

#include "confgeo/expr.hpp"
#include "confgeo/fd.hpp"

namespace confgeo {

namespace {

constexpr double kZeroFactorTol = 1e-12;
constexpr double kSingularTol = 1e-12;
constexpr double kNullTol = 1e-12;

}  // namespace

// ---------------------------------------------------------------------------
// ConformalFactor

double ConformalFactor::operator()(const Vec& x) const {
  const double v = value(x);
  if (std::abs(v) < kZeroFactorTol) throw ZeroFactor("conformal factor vanishes at evaluation point");
  return v;
}

Vec ConformalFactor::grad(const Vec& x, const FdOptions& fd) const {
  if (gradient) return gradient(x);
  return fd::gradient([this](const Vec& y) { return value(y); }, x, fd.h, 2);
}

Mat ConformalFactor::hess(const Vec& x, const FdOptions& fd) const {
  if (hessian) return hessian(x);
  const int n = static_cast<int>(x.size());
  if (gradient) {
    Mat h(n, n);
    for (int c = 0; c < n; ++c)
      h.col(c) = fd::directional_diff([this](const Vec& y) { return gradient(y); }, x, c,
                                      fd.h_analytic, 4);
    return 0.5 * (h + h.transpose());
  }
  // nested central differences of the value
  Mat h(n, n);
  for (int c = 0; c < n; ++c) {
    Vec col = fd::directional_diff(
        [&](const Vec& y) {
          return fd::gradient([this](const Vec& z) { return value(z); }, y, fd.h, 2);
        },
        x, c, fd.h, 2);
    h.col(c) = col;
  }
  return 0.5 * (h + h.transpose());
}

Vec ConformalFactor::upsilon(const Vec& x, const FdOptions& fd) const {
  return grad(x, fd) / (*this)(x);
}

Mat ConformalFactor::upsilon_jacobian(const Vec& x, const FdOptions& fd) const {
  // d_a (d_b Omega / Omega) = Hess_ab / Omega - Upsilon_a Upsilon_b
  const double om = (*this)(x);
  const Vec up = grad(x, fd) / om;
  return hess(x, fd) / om - up * up.transpose();
}

ConformalFactor ConformalFactor::constant(double c) {
  ConformalFactor f;
  f.value = [c](const Vec&) { return c; };
  f.gradient = [](const Vec& x) { return Vec::Zero(x.size()).eval(); };
  f.hessian = [](const Vec& x) { return Mat::Zero(x.size(), x.size()).eval(); };
  return f;
}

ConformalFactor ConformalFactor::sphere() {
  ConformalFactor f;
  f.value = [](const Vec& x) { return 2.0 / (1.0 + x.squaredNorm()); };
  f.gradient = [](const Vec& x) {
    const double om = 2.0 / (1.0 + x.squaredNorm());
    return (-om * om * x).eval();
  };
  f.hessian = [](const Vec& x) {
    const double om = 2.0 / (1.0 + x.squaredNorm());
    const int n = static_cast<int>(x.size());
    return (-om * om * Mat::Identity(n, n) + 2.0 * om * om * om * x * x.transpose()).eval();
  };
  return f;
}

ConformalFactor ConformalFactor::exponential(Vec k) {
  ConformalFactor f;
  f.value = [k](const Vec& x) { return std::exp(k.dot(x)); };
  f.gradient = [k](const Vec& x) { return (std::exp(k.dot(x)) * k).eval(); };
  f.hessian = [k](const Vec& x) { return (std::exp(k.dot(x)) * k * k.transpose()).eval(); };
  return f;
}

ConformalFactor ConformalFactor::from_expression(const std::string& expr) {
  ConformalFactor f;
  f.value = compile_expression(expr);
  return f;
}

// ---------------------------------------------------------------------------
// MetricSpec

Mat MetricSpec::g(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim) throw BadParams("metric evaluated at point of wrong dimension");
  switch (kind) {
    case MetricKind::Flat:
      return signature.asDiagonal();
    case MetricKind::ConformallyFlat: {
      const double om = (*factor)(x);
      return (om * om) * Mat(signature.asDiagonal());
    }
    case MetricKind::General:
      return components(x);
  }
  throw Error("unreachable");
}

Tensor3 MetricSpec::dg(const Vec& x, const FdOptions& fd) const {
  const int n = dim;
  Tensor3 out(n);
  switch (kind) {
    case MetricKind::Flat:
      return out;
    case MetricKind::ConformallyFlat: {
      const double om = (*factor)(x);
      const Vec gr = factor->grad(x, fd);
      for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a) out(c, a, a) = 2.0 * om * gr(c) * signature(a);
      return out;
    }
    case MetricKind::General: {
      if (d_components) return d_components(x);
      for (int c = 0; c < n; ++c) {
        Mat d = fd::directional_diff([this](const Vec& y) { return components(y); }, x, c, fd.h, 2);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) out(c, a, b) = d(a, b);
      }
      return out;
    }
  }
  throw Error("unreachable");
}

Tensor4 MetricSpec::d2g(const Vec& x, const FdOptions& fd) const {
  const int n = dim;
  Tensor4 out(n);
  switch (kind) {
    case MetricKind::Flat:
      return out;
    case MetricKind::ConformallyFlat: {
      // d_c d_d (Omega^2) = 2 (Omega_c Omega_d + Omega Omega_cd)
      const double om = (*factor)(x);
      const Vec gr = factor->grad(x, fd);
      const Mat he = factor->hess(x, fd);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int a = 0; a < n; ++a)
            out(c, d, a, a) = 2.0 * (gr(c) * gr(d) + om * he(c, d)) * signature(a);
      return out;
    }
    case MetricKind::General: {
      if (d2_components) return d2_components(x);
      // nested central differences of dg
      for (int c = 0; c < n; ++c) {
        Vec xp = x, xm = x;
        xp(c) += fd.h;
        xm(c) -= fd.h;
        Tensor3 dp = dg(xp, fd);
        Tensor3 dm = dg(xm, fd);
        for (int d = 0; d < n; ++d)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              out(c, d, a, b) = (dp(d, a, b) - dm(d, a, b)) / (2.0 * fd.h);
      }
      return out;
    }
  }
  throw Error("unreachable");
}

bool MetricSpec::has_analytic_partials() const {
  switch (kind) {
    case MetricKind::Flat:
      return true;
    case MetricKind::ConformallyFlat:
      return factor->has_analytic();
    case MetricKind::General:
      return static_cast<bool>(d_components) && static_cast<bool>(d2_components);
  }
  return false;
}

MetricSpec MetricSpec::flat_euclidean(int n) {
  if (n < 1) throw DimensionTooSmall("flat metric needs n >= 1");
  MetricSpec m;
  m.dim = n;
  m.kind = MetricKind::Flat;
  m.id = "flat-euclidean";
  m.signature = Vec::Ones(n);
  return m;
}

MetricSpec MetricSpec::flat_minkowski(int n) {
  if (n < 2) throw DimensionTooSmall("minkowski metric needs n >= 2");
  MetricSpec m;
  m.dim = n;
  m.kind = MetricKind::Flat;
  m.id = "flat-minkowski";
  m.signature = Vec::Ones(n);
  m.signature(0) = -1.0;
  return m;
}

MetricSpec MetricSpec::round_sphere_stereographic(int n) {
  MetricSpec m = conformally_flat(n, ConformalFactor::sphere(), "round-sphere-stereographic");
  return m;
}

MetricSpec MetricSpec::conformally_flat(int n, ConformalFactor omega, std::string id) {
  if (n < 3) throw DimensionTooSmall("conformally flat metric needs n >= 3 (Schouten divides by n-2)");
  MetricSpec m;
  m.dim = n;
  m.kind = MetricKind::ConformallyFlat;
  m.id = std::move(id);
  m.signature = Vec::Ones(n);
  m.factor = std::move(omega);
  return m;
}

MetricSpec MetricSpec::general(int n, std::function<Mat(const Vec&)> components, std::string id) {
  if (n < 3) throw DimensionTooSmall("general metric needs n >= 3 (Schouten divides by n-2)");
  MetricSpec m;
  m.dim = n;
  m.kind = MetricKind::General;
  m.id = std::move(id);
  m.signature = Vec::Ones(n);
  m.components = std::move(components);
  return m;
}

MetricSpec MetricSpec::from_name(const std::string& name, int dim) {
  if (name == "flat-euclidean") return flat_euclidean(dim);
  if (name == "flat-minkowski") return flat_minkowski(dim);
  if (name == "round-sphere-stereographic") return round_sphere_stereographic(dim);
  const std::string prefix = "conformally-flat(";
  if (name.rfind(prefix, 0) == 0 && name.back() == ')') {
    const std::string expr = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    MetricSpec m = conformally_flat(dim, ConformalFactor::from_expression(expr), name);
    return m;
  }
  throw ConfigError("unknown metric name: " + name);
}

// ---------------------------------------------------------------------------
// geometry_jet

Vec GeometryJet::gamma_quad(const Vec& v, const Vec& w) const {
  Vec out = Vec::Zero(n);
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) acc += gamma(a, b, c) * v(b) * w(c);
    out(a) = acc;
  }
  return out;
}

namespace {

// Gamma^a_bc = 1/2 g^ad (d_b g_dc + d_c g_bd - d_d g_bc)
Tensor3 christoffel(const Mat& g_inv, const Tensor3& dg, int n) {
  Tensor3 gamma(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double acc = 0.0;
        for (int d = 0; d < n; ++d)
          acc += g_inv(a, d) * (dg(b, d, c) + dg(c, b, d) - dg(d, b, c));
        gamma(a, b, c) = 0.5 * acc;
      }
  return gamma;
}

Mat inverse_checked(const Mat& g) {
  Eigen::FullPivLU<Mat> lu(g);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < kSingularTol)
    throw SingularMetric("metric is singular at evaluation point");
  return lu.inverse();
}

struct ConnectionData {
  Mat g, g_inv;
  Tensor3 dg;
  Tensor3 gamma;
};

ConnectionData connection_at(const MetricSpec& spec, const Vec& x, const FdOptions& fd) {
  ConnectionData c;
  c.g = spec.g(x);
  c.g_inv = inverse_checked(c.g);
  c.dg = spec.dg(x, fd);
  c.gamma = christoffel(c.g_inv, c.dg, spec.dim);
  return c;
}

// d_e Gamma^a_bc from analytic first/second metric partials:
//   d_e Gamma = 1/2 d_e g^ad (...) + 1/2 g^ad d_e(...),  d_e g^ad = -g^af d_e g_fh g^hd
Tensor4 dgamma_analytic(const ConnectionData& c, const Tensor4& d2g, int n) {
  Tensor4 out(n);
  // d_e g^ad
  Tensor3 dginv(n);
  for (int e = 0; e < n; ++e) {
    Mat dge(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dge(a, b) = c.dg(e, a, b);
    Mat d = -c.g_inv * dge * c.g_inv;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dginv(e, a, b) = d(a, b);
  }
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc) {
          double acc = 0.0;
          for (int d = 0; d < n; ++d) {
            acc += dginv(e, a, d) * (c.dg(b, d, cc) + c.dg(cc, b, d) - c.dg(d, b, cc));
            acc += c.g_inv(a, d) *
                   (d2g(e, b, d, cc) + d2g(e, cc, b, d) - d2g(e, d, b, cc));
          }
          out(e, a, b, cc) = 0.5 * acc;
        }
  return out;
}

Tensor4 dgamma_fd(const MetricSpec& spec, const Vec& x, const FdOptions& fd) {
  const int n = spec.dim;
  Tensor4 out(n);
  for (int e = 0; e < n; ++e) {
    Vec xp = x, xm = x;
    xp(e) += fd.h;
    xm(e) -= fd.h;
    ConnectionData cp = connection_at(spec, xp, fd);
    ConnectionData cm = connection_at(spec, xm, fd);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          out(e, a, b, c) = (cp.gamma(a, b, c) - cm.gamma(a, b, c)) / (2.0 * fd.h);
  }
  return out;
}

// Schouten without nabla P; used for the outer finite difference in grad_schouten.
Mat schouten_at(const MetricSpec& spec, const Vec& x, const FdOptions& fd) {
  const int n = spec.dim;
  ConnectionData c = connection_at(spec, x, fd);
  Tensor4 dgam = spec.has_analytic_partials() ? dgamma_analytic(c, spec.d2g(x, fd), n)
                                              : dgamma_fd(spec, x, fd);
  Mat ricci = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (int cc = 0; cc < n; ++cc) {
        acc += dgam(cc, cc, b, a) - dgam(b, cc, cc, a);
        for (int e = 0; e < n; ++e)
          acc += c.gamma(cc, cc, e) * c.gamma(e, b, a) - c.gamma(cc, b, e) * c.gamma(e, cc, a);
      }
      ricci(a, b) = acc;
    }
  const double s = (c.g_inv * ricci).trace();
  return (ricci - s / (2.0 * (n - 1)) * c.g) / static_cast<double>(n - 2);
}

}  // namespace

GeometryJet geometry_jet(const MetricSpec& spec, const Vec& x, JetLevel level,
                         const FdOptions& fd) {
  const int n = spec.dim;
  if (static_cast<int>(x.size()) != n) throw BadParams("geometry_jet: point has wrong dimension");
  GeometryJet jet;
  jet.x = x;
  jet.n = n;
  jet.level = level;
  if (spec.is_flat()) {
    // Curvature of a flat chart vanishes identically in every level.
    jet.g = spec.g(x);
    jet.g_inv = jet.g;  // diag(+-1) is its own inverse
    jet.gamma = Tensor3(n);
    jet.dgamma = Tensor4(n);
    jet.riemann = Tensor4(n);
    jet.riemann_low = Tensor4(n);
    jet.ricci = Mat::Zero(n, n);
    jet.scalar = 0.0;
    jet.schouten = Mat::Zero(n, n);
    jet.schouten_endo = Mat::Zero(n, n);
    jet.weyl_low = Tensor4(n);
    jet.grad_schouten = Tensor3(n);
    return jet;
  }
  if (n < 3) throw DimensionTooSmall("geometry_jet: curved metrics need n >= 3");

  ConnectionData c = connection_at(spec, x, fd);
  jet.g = c.g;
  jet.g_inv = c.g_inv;
  jet.gamma = c.gamma;
  jet.dgamma = spec.has_analytic_partials() ? dgamma_analytic(c, spec.d2g(x, fd), n)
                                            : dgamma_fd(spec, x, fd);
  if (level == JetLevel::Connection) return jet;

  // R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb
  jet.riemann = Tensor4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          double acc = jet.dgamma(cc, a, d, b) - jet.dgamma(d, a, cc, b);
          for (int e = 0; e < n; ++e)
            acc += jet.gamma(a, cc, e) * jet.gamma(e, d, b) -
                   jet.gamma(a, d, e) * jet.gamma(e, cc, b);
          jet.riemann(a, b, cc, d) = acc;
        }

  jet.riemann_low = Tensor4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          double acc = 0.0;
          for (int e = 0; e < n; ++e) acc += jet.g(a, e) * jet.riemann(e, b, cc, d);
          jet.riemann_low(a, b, cc, d) = acc;
        }

  jet.ricci = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (int cc = 0; cc < n; ++cc) acc += jet.riemann(cc, a, cc, b);
      jet.ricci(a, b) = acc;
    }
  jet.scalar = (jet.g_inv * jet.ricci).trace();
  jet.schouten =
      (jet.ricci - jet.scalar / (2.0 * (n - 1)) * jet.g) / static_cast<double>(n - 2);
  jet.schouten_endo = jet.g_inv * jet.schouten;

  // W_abcd = R_abcd - (g_ac P_bd - g_ad P_bc + g_bd P_ac - g_bc P_ad)
  jet.weyl_low = Tensor4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d)
          jet.weyl_low(a, b, cc, d) =
              jet.riemann_low(a, b, cc, d) -
              (jet.g(a, cc) * jet.schouten(b, d) - jet.g(a, d) * jet.schouten(b, cc) +
               jet.g(b, d) * jet.schouten(a, cc) - jet.g(b, cc) * jet.schouten(a, d));
  if (level == JetLevel::Curvature) return jet;

  // nabla_c P_ab = d_c P_ab - Gamma^d_ca P_db - Gamma^d_cb P_ad
  jet.grad_schouten = Tensor3(n);
  const bool analytic = spec.has_analytic_partials();
  const double h = analytic ? fd.h_analytic : fd.h;
  const int order = analytic ? 4 : 2;
  for (int cc = 0; cc < n; ++cc) {
    Mat dP = fd::directional_diff(
        [&](const Vec& y) { return schouten_at(spec, y, fd); }, x, cc, h, order);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double acc = dP(a, b);
        for (int d = 0; d < n; ++d)
          acc -= jet.gamma(d, cc, a) * jet.schouten(d, b) +
                 jet.gamma(d, cc, b) * jet.schouten(a, d);
        jet.grad_schouten(cc, a, b) = acc;
      }
  }
  return jet;
}

// ---------------------------------------------------------------------------
// Conformal rescaling

MetricSpec rescale(const MetricSpec& spec, const ConformalFactor& omega) {
  MetricSpec out;
  out.dim = spec.dim;
  out.signature = spec.signature;
  out.id = spec.id + "*omega^2";
  if (spec.kind == MetricKind::Flat) {
    out.kind = MetricKind::ConformallyFlat;
    out.factor = omega;
    return out;
  }
  if (spec.kind == MetricKind::ConformallyFlat) {
    out.kind = MetricKind::ConformallyFlat;
    ConformalFactor base = *spec.factor;
    ConformalFactor prod;
    prod.value = [base, omega](const Vec& x) { return base.value(x) * omega.value(x); };
    if (base.has_analytic() && omega.has_analytic()) {
      prod.gradient = [base, omega](const Vec& x) {
        return (base.gradient(x) * omega.value(x) + omega.gradient(x) * base.value(x)).eval();
      };
      prod.hessian = [base, omega](const Vec& x) {
        const Vec gb = base.gradient(x);
        const Vec go = omega.gradient(x);
        return (base.hessian(x) * omega.value(x) + omega.hessian(x) * base.value(x) +
                gb * go.transpose() + go * gb.transpose())
            .eval();
      };
    }
    out.factor = std::move(prod);
    return out;
  }
  out.kind = MetricKind::General;
  MetricSpec base = spec;
  out.components = [base, omega](const Vec& x) {
    const double om = omega(x);
    return (om * om * base.g(x)).eval();
  };
  if (spec.has_analytic_partials() && omega.has_analytic()) {
    out.d_components = [base, omega](const Vec& x) {
      const int n = base.dim;
      const double om = omega(x);
      const Vec gr = omega.gradient(x);
      const Mat g = base.g(x);
      const Tensor3 dgb = base.dg(x);
      Tensor3 o(n);
      for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            o(c, a, b) = 2.0 * om * gr(c) * g(a, b) + om * om * dgb(c, a, b);
      return o;
    };
    out.d2_components = [base, omega](const Vec& x) {
      const int n = base.dim;
      const double om = omega(x);
      const Vec gr = omega.gradient(x);
      const Mat he = omega.hessian(x);
      const Mat g = base.g(x);
      const Tensor3 dgb = base.dg(x);
      const Tensor4 d2gb = base.d2g(x);
      Tensor4 o(n);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              o(c, d, a, b) = 2.0 * (gr(c) * gr(d) + om * he(c, d)) * g(a, b) +
                              2.0 * om * gr(c) * dgb(d, a, b) +
                              2.0 * om * gr(d) * dgb(c, a, b) + om * om * d2gb(c, d, a, b);
      return o;
    };
  }
  return out;
}

Mat rescaled_schouten(const GeometryJet& jet, const ConformalFactor& omega,
                      const FdOptions& fd) {
  if (jet.level == JetLevel::Connection)
    throw BadParams("rescaled_schouten needs a jet with curvature");
  const int n = jet.n;
  const Vec up = omega.upsilon(jet.x, fd);
  const Mat dup = omega.upsilon_jacobian(jet.x, fd);
  // nabla_a Upsilon_b = d_a Upsilon_b - Gamma^c_ab Upsilon_c
  Mat nabla_up(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double acc = dup(a, b);
      for (int c = 0; c < n; ++c) acc -= jet.gamma(c, a, b) * up(c);
      nabla_up(a, b) = acc;
    }
  const Vec up_sharp = jet.g_inv * up;
  const double up2 = up.dot(up_sharp);
  return jet.schouten - nabla_up + up * up.transpose() - 0.5 * up2 * jet.g;
}

Vec rescaled_acceleration(const GeometryJet& jet, const CurveState& state,
                          const ConformalFactor& omega, const FdOptions& fd) {
  const Vec up = omega.upsilon(jet.x, fd);
  const Vec up_sharp = jet.g_inv * up;
  const double u2 = jet.norm2(state.u);
  return state.a - u2 * up_sharp + 2.0 * up.dot(state.u) * state.u;
}

double checked_norm2(const GeometryJet& jet, const Vec& u) {
  const double u2 = jet.norm2(u);
  if (std::abs(u2) < kNullTol) throw NullVelocity("velocity has (near-)null norm");
  return u2;
}

}  // namespace confgeo
