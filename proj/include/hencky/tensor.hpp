#pragma once

#include <Eigen/Dense>

#include <array>
#include <utility>

namespace hencky::tensor {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// Number of independent components of a symmetric tensor: 3 in 2D, 6 in 3D.
constexpr int voigt_size(int dim) { return dim == 2 ? 3 : 6; }

/// Voigt row for the index pair (i,j). Order is 11,22,33,12,23,13 (2D: 11,22,12).
int voigt_index(int dim, int i, int j);

/// Inverse of voigt_index, returning the pair with i <= j.
std::pair<int, int> voigt_pair(int dim, int row);

/// Checks dim is 2 or 3.
void check_dim(int dim);

/**
 * Symmetric second-order tensor in 2D or 3D.
 *
 * Only the upper triangle is stored, in Voigt order, so symmetry holds by
 * construction. Used for B, C, V, tau and log V.
 */
class SymTensor
{
public:
  explicit SymTensor(int dim = 3);

  static SymTensor zero(int dim) { return SymTensor(dim); }
  static SymTensor identity(int dim);
  static SymTensor diag(int dim, const std::array<double, 3>& d);
  /// Takes the upper triangle of the leading dim x dim block.
  static SymTensor from_matrix(int dim, const Mat3& m);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return v_[voigt_index(dim_, i, j)]; }
  double& operator()(int i, int j) { return v_[voigt_index(dim_, i, j)]; }
  double voigt(int row) const { return v_[row]; }

  /// Full 3x3 matrix; entries beyond dim are zero.
  Mat3 matrix() const;
  double trace() const;
  double norm() const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double s);

  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(SymTensor a, double s) { return a *= s; }
  friend SymTensor operator*(double s, SymTensor a) { return a *= s; }

private:
  int dim_;
  std::array<double, 6> v_{};
};

/// Eigenpairs of a SymTensor. Eigenvalues descending, eigenvectors are the columns of `vectors`.
struct Spectral
{
  int dim = 3;
  std::array<double, 3> values{};
  Mat3 vectors = Mat3::Identity();

  Vec3 vector(int k) const { return vectors.col(k); }

  /// sum_k f_k v_k (x) v_k
  SymTensor recompose(const std::array<double, 3>& f) const;
  SymTensor recompose() const { return recompose(values); }
};

/// Cyclic Jacobi eigen-decomposition. Throws NonConvergence after 50 sweeps.
Spectral jacobi_eigen(const SymTensor& a);

/// log V = sum_k 1/2 log(lambda_k^2) n_k (x) n_k from the spectral decomposition of B.
/// Throws InvalidDeformation on a nonpositive eigenvalue.
SymTensor spectral_log(const Spectral& of_b);

/// dev_n X = X - (tr X / n) 1
SymTensor dev(const SymTensor& a);

/// Full fourth-order tensor without any assumed symmetry, stored as a 9x9 matrix
/// with row index 3i+j and column index 3k+l.
class Full4
{
public:
  explicit Full4(int dim = 3) : dim_(dim) { a_.setZero(); }

  int dim() const { return dim_; }
  double operator()(int i, int j, int k, int l) const { return a_(3 * i + j, 3 * k + l); }
  double& operator()(int i, int j, int k, int l) { return a_(3 * i + j, 3 * k + l); }

  /// A : X, contracting the last index pair.
  Mat3 contract(const Mat3& x) const;
  double norm() const { return a_.norm(); }
  const Eigen::Matrix<double, 9, 9>& raw() const { return a_; }

  Full4& operator-=(const Full4& o)
  {
    a_ -= o.a_;
    return *this;
  }
  friend Full4 operator-(Full4 a, const Full4& b) { return a -= b; }

private:
  int dim_;
  Eigen::Matrix<double, 9, 9> a_;
};

/**
 * Minor-symmetric fourth-order tensor in Voigt storage.
 *
 * Entries equal tensor components (no engineering-shear doubling); the
 * strain-side operator carries the factor 2.
 */
class Tangent4
{
public:
  using Voigt = Eigen::Matrix<double, 6, 6>;

  explicit Tangent4(int dim = 3) : dim_(dim) { v_.setZero(); }

  static Tangent4 zero(int dim) { return Tangent4(dim); }
  /// I_ijkl = 1/2 (d_ik d_jl + d_il d_jk)
  static Tangent4 identity(int dim);

  int dim() const { return dim_; }
  int size() const { return voigt_size(dim_); }
  double operator()(int i, int j, int k, int l) const
  {
    return v_(voigt_index(dim_, i, j), voigt_index(dim_, k, l));
  }
  double& voigt(int r, int c) { return v_(r, c); }
  double voigt(int r, int c) const { return v_(r, c); }
  /// Leading size() x size() block.
  Eigen::MatrixXd matrix() const { return v_.topLeftCorner(size(), size()); }

  double norm() const { return v_.norm(); }
  double asymmetry() const;

  Tangent4& operator+=(const Tangent4& o)
  {
    v_ += o.v_;
    return *this;
  }
  Tangent4& operator-=(const Tangent4& o)
  {
    v_ -= o.v_;
    return *this;
  }
  friend Tangent4 operator+(Tangent4 a, const Tangent4& b) { return a += b; }
  friend Tangent4 operator-(Tangent4 a, const Tangent4& b) { return a -= b; }

private:
  int dim_;
  Voigt v_;
};

/// Component view of a Voigt-stored tangent.
Full4 voigt_unpack(const Tangent4& t);
/// Voigt packing; averages over the minor-symmetric partners of each entry.
Tangent4 voigt_pack(const Full4& a);

} // namespace hencky::tensor
