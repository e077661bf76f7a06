#include "hencky/tensor.hpp"

#include "hencky/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hencky::tensor {

namespace {

constexpr int kVoigt3[3][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}};
constexpr int kVoigt2[2][2] = {{0, 2}, {2, 1}};
constexpr std::pair<int, int> kPairs3[6] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}, {0, 2}};
constexpr std::pair<int, int> kPairs2[3] = {{0, 0}, {1, 1}, {0, 1}};

constexpr int kMaxSweeps = 50;
constexpr double kAbsoluteFloor = 1e-30;
constexpr double kOffDiagonalTolerance = 1e-14;

double off_diagonal_norm(const Mat3& a, int n)
{
  double s = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p != q) s += a(p, q) * a(p, q);
  return std::sqrt(s);
}

// Off-diagonal entry small against its own diagonal pair; gives relative accuracy
// for the small eigenvalues of positive definite input.
bool negligible(const Mat3& a, int p, int q, double scale)
{
  const double apq = std::abs(a(p, q));
  return apq <= std::numeric_limits<double>::epsilon() * std::sqrt(std::abs(a(p, p) * a(q, q))) ||
         apq <= kAbsoluteFloor * scale;
}

} // namespace

void check_dim(int dim)
{
  if (dim != 2 && dim != 3) throw ConfigError("dimension must be 2 or 3, got " + std::to_string(dim));
}

int voigt_index(int dim, int i, int j) { return dim == 2 ? kVoigt2[i][j] : kVoigt3[i][j]; }

std::pair<int, int> voigt_pair(int dim, int row) { return dim == 2 ? kPairs2[row] : kPairs3[row]; }

SymTensor::SymTensor(int dim) : dim_(dim) { check_dim(dim); }

SymTensor SymTensor::identity(int dim)
{
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
  return t;
}

SymTensor SymTensor::diag(int dim, const std::array<double, 3>& d)
{
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i) t(i, i) = d[i];
  return t;
}

SymTensor SymTensor::from_matrix(int dim, const Mat3& m)
{
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) t(i, j) = m(i, j);
  return t;
}

Mat3 SymTensor::matrix() const
{
  Mat3 m = Mat3::Zero();
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double SymTensor::trace() const
{
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double SymTensor::norm() const { return matrix().norm(); }

SymTensor& SymTensor::operator+=(const SymTensor& o)
{
  for (int r = 0; r < voigt_size(dim_); ++r) v_[r] += o.v_[r];
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o)
{
  for (int r = 0; r < voigt_size(dim_); ++r) v_[r] -= o.v_[r];
  return *this;
}

SymTensor& SymTensor::operator*=(double s)
{
  for (auto& x : v_) x *= s;
  return *this;
}

SymTensor Spectral::recompose(const std::array<double, 3>& f) const
{
  SymTensor t(dim);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) t(i, j) += f[k] * vectors(i, k) * vectors(j, k);
  return t;
}

Spectral jacobi_eigen(const SymTensor& in)
{
  const int n = in.dim();
  Mat3 a = in.matrix();
  Mat3 v = Mat3::Identity();

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!std::isfinite(a(i, j))) throw InvalidDeformation("jacobi_eigen: non-finite entry");

  const double scale = a.norm();
  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) converged = converged && negligible(a, p, q, scale);
    if (converged) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (negligible(a, p, q, scale)) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        Mat3 g = Mat3::Identity();
        g(p, p) = c;
        g(q, q) = c;
        g(p, q) = s;
        g(q, p) = -s;
        a = g.transpose() * a * g;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        v = v * g;
      }
    }
  }
  if (!converged && off_diagonal_norm(a, n) > kOffDiagonalTolerance * scale)
    throw NonConvergence("jacobi_eigen: no convergence after 50 sweeps");

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.begin() + n, [&](int x, int y) { return a(x, x) > a(y, y); });

  Spectral out;
  out.dim = n;
  out.vectors.setZero();
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k).head(n) = v.col(order[k]).head(n);
  }
  if (n == 2) {
    out.vectors(2, 2) = 1.0;
  } else if (out.vectors.determinant() < 0.0) {
    out.vectors.col(2) *= -1.0;
  }
  return out;
}

SymTensor spectral_log(const Spectral& of_b)
{
  std::array<double, 3> f{};
  for (int k = 0; k < of_b.dim; ++k) {
    if (!(of_b.values[k] > 0.0))
      throw InvalidDeformation("spectral_log: nonpositive eigenvalue " + std::to_string(of_b.values[k]));
    f[k] = 0.5 * std::log(of_b.values[k]);
  }
  return of_b.recompose(f);
}

SymTensor dev(const SymTensor& a)
{
  SymTensor out = a;
  const double mean = a.trace() / a.dim();
  for (int i = 0; i < a.dim(); ++i) out(i, i) -= mean;
  return out;
}

Mat3 Full4::contract(const Mat3& x) const
{
  Mat3 out = Mat3::Zero();
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int l = 0; l < dim_; ++l) out(i, j) += (*this)(i, j, k, l) * x(k, l);
  return out;
}

Tangent4 Tangent4::identity(int dim)
{
  Tangent4 t(dim);
  for (int r = 0; r < t.size(); ++r) {
    const auto [i, j] = voigt_pair(dim, r);
    t.voigt(r, r) = i == j ? 1.0 : 0.5;
  }
  return t;
}

double Tangent4::asymmetry() const
{
  const Eigen::MatrixXd m = matrix();
  return (m - m.transpose()).norm();
}

Full4 voigt_unpack(const Tangent4& t)
{
  const int n = t.dim();
  Full4 a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) a(i, j, k, l) = t(i, j, k, l);
  return a;
}

Tangent4 voigt_pack(const Full4& a)
{
  const int n = a.dim();
  Tangent4 t(n);
  for (int r = 0; r < t.size(); ++r) {
    const auto [i, j] = voigt_pair(n, r);
    for (int c = 0; c < t.size(); ++c) {
      const auto [k, l] = voigt_pair(n, c);
      t.voigt(r, c) = 0.25 * (a(i, j, k, l) + a(j, i, k, l) + a(i, j, l, k) + a(j, i, l, k));
    }
  }
  return t;
}

} // namespace hencky::tensor
