#include "confgeo/hamiltonian.hpp"

#include <cmath>

#include "confgeo/fd.hpp"

namespace confgeo {

namespace {

constexpr double kTol = 1e-12;

double dot(const Vec& a, const Vec& b) { return a.dot(b); }

}  // namespace

double ostro_hamiltonian(const OstroState& s) {
  const double ur = dot(s.u, s.r);
  return 0.5 * s.u.squaredNorm() * s.r.squaredNorm() - ur * ur + dot(s.p, s.u);
}

OstroState ostro_flow_rhs(const OstroState& s) {
  const double u2 = s.u.squaredNorm();
  const double r2 = s.r.squaredNorm();
  const double ur = dot(s.u, s.r);
  OstroState d;
  d.x = s.u;
  d.u = u2 * s.r - 2.0 * ur * s.u;
  d.r = -r2 * s.u + 2.0 * ur * s.r - s.p;
  d.p = Vec::Zero(s.dim());
  return d;
}

OstroState ostro_from_jet(const CurveState& state) {
  if (!state.has_jet3())
    throw BadParams("ostro_from_jet: state must carry the 3-jet (J)");
  const double u2 = state.u.squaredNorm();
  if (u2 < kTol) throw NullVelocity("ostro_from_jet: |U|^2 = 0");
  const double ua = dot(state.u, state.a);
  OstroState s;
  s.x = state.x;
  s.u = state.u;
  s.r = state.a / u2 - 2.0 * ua / (u2 * u2) * state.u;
  s.p = -mercator_c(state);
  return s;
}

CurveState jet_from_ostro(const OstroState& s) {
  const double u2 = s.u.squaredNorm();
  if (u2 < kTol) throw NullVelocity("jet_from_ostro: |U|^2 = 0");
  const double ur = dot(s.u, s.r);
  CurveState out;
  out.x = s.x;
  out.u = s.u;
  out.a = u2 * s.r - 2.0 * ur * s.u;
  out.j = flat_jerk_from_c(out, Vec(-s.p));
  return out;
}

KahlerStructure make_kahler(const Mat& omega_low) {
  const int n = static_cast<int>(omega_low.rows());
  if (omega_low.cols() != n) throw BadParams("make_kahler: Omega must be square");
  if (n % 2 != 0) throw OddDimension("make_kahler: Kahler dimension must be even");
  if ((omega_low + omega_low.transpose()).norm() > kTol * (1.0 + omega_low.norm()))
    throw BadParams("make_kahler: Omega must be antisymmetric");
  Eigen::FullPivLU<Mat> lu(omega_low);
  if (!lu.isInvertible()) throw BadParams("make_kahler: Omega must be invertible");
  KahlerStructure ks;
  ks.n = n;
  ks.omega_low = omega_low;
  // Omega_ab Omega^{ac} = delta_b^c  =>  Omega^T_up = Omega_low^{-1} transposed.
  ks.omega_up = lu.inverse().transpose();
  ks.jmat = omega_low;  // flat metric: J^a_b = delta^{ac} Omega_cb
  if ((ks.jmat * ks.jmat + Mat::Identity(n, n)).norm() > 1e-10 * n)
    throw BadParams("make_kahler: J^2 != -Id (Omega is not orthogonal)");
  return ks;
}

KahlerStructure standard_kahler(int n) {
  if (n % 2 != 0) throw OddDimension("standard_kahler: dimension must be even");
  Mat omega = Mat::Zero(n, n);
  for (int k = 0; k + 1 < n; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return make_kahler(omega);
}

Vec kahler_potential(const KahlerStructure& ks, const Vec& x) {
  return Vec(0.5 * ks.omega_low.transpose() * x);  // phi_b = (1/2) x^a Omega_ab
}

MagneticDeriv magnetic_rhs(const KahlerStructure& ks, double e, const Vec& x,
                           const Vec& u) {
  if (x.size() != ks.n || u.size() != ks.n)
    throw BadParams("magnetic_rhs: dimension mismatch");
  MagneticDeriv d;
  d.dx = u;
  d.du = e * (ks.jmat * u);
  return d;
}

Observable coordinate_observable(int block, int index, int n) {
  if (block < 0 || block > 2 || index < 0 || index >= n)
    throw BadParams("coordinate_observable: bad block/index");
  Observable f;
  f.value = [block, index](const Vec& x, const Vec& u, const Vec& a) {
    return block == 0 ? x(index) : block == 1 ? u(index) : a(index);
  };
  auto unit = [index, n](bool on) {
    return [index, n, on](const Vec&, const Vec&, const Vec&) {
      Vec g = Vec::Zero(n);
      if (on) g(index) = 1.0;
      return g;
    };
  };
  f.grad_x = unit(block == 0);
  f.grad_u = unit(block == 1);
  f.grad_a = unit(block == 2);
  return f;
}

double poisson_bracket(const KahlerStructure& ks, double w, const Observable& f,
                       const Observable& h, const Vec& x, const Vec& u, const Vec& a) {
  const Vec fx = f.grad_x(x, u, a), fu = f.grad_u(x, u, a), fa = f.grad_a(x, u, a);
  const Vec hx = h.grad_x(x, u, a), hu = h.grad_u(x, u, a), ha = h.grad_a(x, u, a);
  const Mat& up = ks.omega_up;
  // {f,h} = -f_x Om h_A + f_A Om^T h_x ... assembled blockwise:
  //   Pi(x,A) = -Omega^{ab}, Pi(A,x) = +Omega^{ba}, Pi(U,U) = Omega^{ab},
  //   Pi(A,A) = w^2 Omega^{ab}.
  double out = 0.0;
  out += -fx.dot(up * ha);
  out += fa.dot(up.transpose() * hx);
  out += fu.dot(up * hu);
  out += w * w * fa.dot(up * ha);
  return out;
}

double hamiltonian_au(const KahlerStructure& ks, const Vec& u, const Vec& a) {
  return a.dot(ks.omega_low * u);  // Omega(A, U) = Omega_ab A^a U^b
}

Cg3Deriv poisson_flow_rhs(double w, const CurveState& state) {
  Cg3Deriv d;
  d.dx = state.u;
  d.du = state.a;
  d.da = -w * w * state.u;
  return d;
}

DiracReport dirac_bracket_check(const KahlerStructure& ks) {
  const int n = ks.n;
  const int dim = 6 * n;  // blocks: x, P, U, R, lambda, S
  const int bx = 0, bp = n, bu = 2 * n, br = 3 * n, bl = 4 * n, bs = 5 * n;
  // Canonical structure matrix: {x,P} = {U,R} = {lambda,S} = Id pairs.
  Mat pi = Mat::Zero(dim, dim);
  auto couple = [&pi, n](int i, int j) {
    pi.block(i, j, n, n) = Mat::Identity(n, n);
    pi.block(j, i, n, n) = -Mat::Identity(n, n);
  };
  couple(bx, bp);
  couple(bu, br);
  couple(bl, bs);

  // Constraint gradients, one column per constraint: (P - lambda, psi, S).
  Mat dc = Mat::Zero(dim, 3 * n);
  for (int a = 0; a < n; ++a) {
    dc(bp + a, a) = 1.0;
    dc(bl + a, a) = -1.0;
    dc(br + a, n + a) = 1.0;  // psi_a = R_a - (1/2) Omega_ab U^b
    for (int b = 0; b < n; ++b) dc(bu + b, n + a) -= 0.5 * ks.omega_low(a, b);
    dc(bs + a, 2 * n + a) = 1.0;
  }
  const Mat cmat = dc.transpose() * pi * dc;  // {c_i, c_j}
  Eigen::FullPivLU<Mat> lu(cmat);
  if (!lu.isInvertible())
    throw NumericalError("dirac_bracket_check: constraint matrix is singular");
  const Mat cinv = lu.inverse();

  auto dirac = [&](const Mat& gf, const Mat& gh) {
    // Columns of gf/gh are coordinate gradients; returns the bracket matrix.
    const Mat direct = gf.transpose() * pi * gh;
    const Mat fc = gf.transpose() * pi * dc;
    const Mat ch = dc.transpose() * pi * gh;
    return Mat(direct - fc * cinv * ch);
  };
  auto basis = [&](int offset) {
    Mat g = Mat::Zero(dim, n);
    g.block(offset, 0, n, n) = Mat::Identity(n, n);
    return g;
  };

  DiracReport rep;
  rep.c_psi_psi = cmat.block(n, n, n, n);
  rep.uu_star = dirac(basis(bu), basis(bu));
  rep.xp_star = dirac(basis(bx), basis(bp));
  rep.xx_star = dirac(basis(bx), basis(bx));
  rep.max_residual = std::max({(rep.uu_star - ks.omega_up).norm(),
                               (rep.xp_star - Mat::Identity(n, n)).norm(),
                               rep.xx_star.norm()});
  return rep;
}

namespace {

Tensor3 dy_fallback(const CkyPair& pair, const Vec& x, double h) {
  const int n = static_cast<int>(x.size());
  Tensor3 out(n);
  for (int a = 0; a < n; ++a) {
    Vec xp = x, xm = x, xp2 = x, xm2 = x;
    xp(a) += h;
    xm(a) -= h;
    xp2(a) += 2.0 * h;
    xm2(a) -= 2.0 * h;
    const Mat d =
        (-pair.y(xp2) + 8.0 * pair.y(xp) - 8.0 * pair.y(xm) + pair.y(xm2)) / (12.0 * h);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out(a, b, c) = d(b, c);
  }
  return out;
}

Mat dw_fallback(const CkyPair& pair, const Vec& x, double h) {
  const int n = static_cast<int>(x.size());
  Mat out(n, n);
  for (int a = 0; a < n; ++a) {
    Vec xp = x, xm = x, xp2 = x, xm2 = x;
    xp(a) += h;
    xm(a) -= h;
    xp2(a) += 2.0 * h;
    xm2(a) -= 2.0 * h;
    out.row(a) =
        ((-pair.w(xp2) + 8.0 * pair.w(xp) - 8.0 * pair.w(xm) + pair.w(xm2)) / (12.0 * h))
            .transpose();
  }
  return out;
}

// nabla_a Y_bc = d_a Y_bc - Gamma^e_ab Y_ec - Gamma^e_ac Y_be  at x.
Tensor3 grad_y(const GeometryJet& jet, const CkyPair& pair, const Vec& x, double h) {
  const int n = jet.n;
  const Tensor3 dy = pair.dy ? pair.dy(x) : dy_fallback(pair, x, h);
  const Mat y = pair.y(x);
  Tensor3 out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double v = dy(a, b, c);
        for (int e = 0; e < n; ++e)
          v -= jet.gamma(e, a, b) * y(e, c) + jet.gamma(e, a, c) * y(b, e);
        out(a, b, c) = v;
      }
  return out;
}

}  // namespace

CkyPair constant_cky(const Mat& y0) {
  const int n = static_cast<int>(y0.rows());
  CkyPair p;
  p.y = [y0](const Vec&) { return y0; };
  p.w = [n](const Vec&) { return Vec(Vec::Zero(n)); };
  p.dy = [n](const Vec&) { return Tensor3(n); };
  p.dw = [n](const Vec&) { return Mat(Mat::Zero(n, n)); };
  return p;
}

CkyPair wedge_cky(const Vec& k) {
  const int n = static_cast<int>(k.size());
  CkyPair p;
  p.y = [k](const Vec& x) { return Mat(x * k.transpose() - k * x.transpose()); };
  p.w = [k](const Vec&) { return k; };
  p.dy = [k, n](const Vec&) {
    Tensor3 t(n);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) {
        t(a, a, c) += k(c);
        t(a, c, a) -= k(c);
      }
    return t;
  };
  p.dw = [n](const Vec&) { return Mat(Mat::Zero(n, n)); };
  return p;
}

CkyPair radial_noncky(const Mat& eps) {
  const int n = static_cast<int>(eps.rows());
  CkyPair p;
  p.y = [eps](const Vec& x) { return Mat(x.squaredNorm() * eps); };
  p.w = [n](const Vec&) { return Vec(Vec::Zero(n)); };
  p.dy = [eps, n](const Vec& x) {
    Tensor3 t(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) t(a, b, c) = 2.0 * x(a) * eps(b, c);
    return t;
  };
  p.dw = [n](const Vec&) { return Mat(Mat::Zero(n, n)); };
  return p;
}

Tensor3 cky_residual(const GeometryJet& jet, const CkyPair& pair, const Vec& x,
                     const FdOptions& fd) {
  const int n = jet.n;
  const Tensor3 grad = grad_y(jet, pair, x, fd.h_analytic);
  const Vec w = pair.w(x);
  Tensor3 out(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double antisym =
            (grad(a, b, c) + grad(b, c, a) + grad(c, a, b)) / 3.0;
        out(a, b, c) =
            grad(a, b, c) - antisym - (jet.g(a, b) * w(c) - jet.g(a, c) * w(b));
      }
  return out;
}

Mat killing_residual(const GeometryJet& jet, const CkyPair& pair, const Vec& x,
                     const FdOptions& fd) {
  const int n = jet.n;
  const Mat dw = pair.dw ? pair.dw(x) : dw_fallback(pair, x, fd.h_analytic);
  const Vec w = pair.w(x);
  Mat cov(n, n);  // nabla_b W_c
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      double v = dw(b, c);
      for (int e = 0; e < n; ++e) v -= jet.gamma(e, b, c) * w(e);
      cov(b, c) = v;
    }
  return Mat(0.5 * (cov + cov.transpose()));
}

double first_integral_q(const CkyPair& pair, const CurveState& state) {
  const Mat y = pair.y(state.x);
  const Vec w = pair.w(state.x);
  return state.a.dot(y * state.u) + w.dot(state.u);
}

double q_commutator(const GeometryJet& jet, const CkyPair& pair, const CurveState& state,
                    const FdOptions& fd) {
  const int n = jet.n;
  const Vec& u = state.u;
  const Vec& aa = state.a;
  const Tensor3 dy = pair.dy ? pair.dy(state.x) : dy_fallback(pair, state.x, fd.h_analytic);
  const Mat dw = pair.dw ? pair.dw(state.x) : dw_fallback(pair, state.x, fd.h_analytic);
  const Mat y = pair.y(state.x);
  const Vec w = pair.w(state.x);
  const double a2 = jet.norm2(aa);
  double out = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        out += (dy(a, b, c) + jet.g(a, c) * w(b) - jet.g(a, b) * w(c)) * u(a) * u(c) *
               aa(b);
  out += u.dot(dw * u);
  out += aa.dot(y * aa) - a2 * u.dot(y * u);
  return out;
}

}  // namespace confgeo
