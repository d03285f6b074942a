#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <optional>
#include <vector>

namespace confgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Dense rank-3 array with equal extents, T(i,j,k), zero initialised.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), v_(static_cast<size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return v_[idx(i, j, k)]; }
  double operator()(int i, int j, int k) const { return v_[idx(i, j, k)]; }
  void set_zero() { std::fill(v_.begin(), v_.end(), 0.0); }

 private:
  size_t idx(int i, int j, int k) const {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_ && k >= 0 && k < n_);
    return (static_cast<size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<double> v_;
};

// Dense rank-4 array with equal extents, T(i,j,k,l), zero initialised.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), v_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k, int l) { return v_[idx(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return v_[idx(i, j, k, l)]; }
  void set_zero() { std::fill(v_.begin(), v_.end(), 0.0); }

 private:
  size_t idx(int i, int j, int k, int l) const {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_ && k >= 0 && k < n_ && l >= 0 && l < n_);
    return ((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<double> v_;
};

// Curve jet at a parameter value: position x, velocity U = dX/dt,
// acceleration A = nabla_U U, and (for 3-jets) jerk J = nabla_U A.
// A and J are covariant; in a flat chart they coincide with d2X/dt2, d3X/dt3.
struct CurveState {
  Vec x;
  Vec u;
  Vec a;
  std::optional<Vec> j;

  int dim() const { return static_cast<int>(x.size()); }
  bool has_jet3() const { return j.has_value(); }
};

}  // namespace confgeo
