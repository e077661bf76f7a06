#pragma once

// Test-only helpers: random generators, relative errors and brute-force oracles.

#include "hencky/fem.hpp"
#include "hencky/materials.hpp"
#include "hencky/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace hencky::testing {

using tensor::Full4;
using tensor::Mat3;
using tensor::SymTensor;
using tensor::Tangent4;
using tensor::Vec3;

inline double rel_err(double a, double b, double floor = 1e-300)
{
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

template <class A, class B>
double rel_err_norm(const A& a, const B& b, double floor = 1e-300)
{
  return (a - b).norm() / std::max({a.norm(), b.norm(), floor});
}

class Random
{
public:
  explicit Random(std::uint64_t seed = 20240601) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  /// Uniformly distributed proper rotation (leading dim x dim block).
  Mat3 rotation(int dim)
  {
    Mat3 r = Mat3::Identity();
    if (dim == 2) {
      const double a = uniform(0.0, 2.0 * M_PI);
      r(0, 0) = std::cos(a);
      r(0, 1) = -std::sin(a);
      r(1, 0) = std::sin(a);
      r(1, 1) = std::cos(a);
      return r;
    }
    Eigen::Quaterniond q(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
    q.normalize();
    return q.toRotationMatrix();
  }

  std::array<double, 3> stretches(int dim, double lo = 0.3, double hi = 4.0)
  {
    std::array<double, 3> l{1.0, 1.0, 1.0};
    for (int k = 0; k < dim; ++k) l[k] = uniform(lo, hi);
    return l;
  }

  /// F = R diag(lambda) Q^T with random rotations.
  Mat3 deformation_gradient(int dim, const std::array<double, 3>& lambda)
  {
    Mat3 d = Mat3::Zero();
    for (int k = 0; k < dim; ++k) d(k, k) = lambda[k];
    Mat3 f = rotation(dim) * d * rotation(dim).transpose();
    if (dim == 2) f.row(2).setZero(), f.col(2).setZero();
    return f;
  }

  Mat3 deformation_gradient(int dim, double lo = 0.3, double hi = 4.0)
  {
    return deformation_gradient(dim, stretches(dim, lo, hi));
  }

  SymTensor spd(int dim, double lo = 0.05, double hi = 20.0)
  {
    const Mat3 r = rotation(dim);
    Mat3 d = Mat3::Zero();
    for (int k = 0; k < dim; ++k) d(k, k) = uniform(lo, hi);
    return SymTensor::from_matrix(dim, r * d * r.transpose());
  }

  SymTensor symmetric(int dim, double scale = 1.0)
  {
    SymTensor t(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) t(i, j) = uniform(-scale, scale);
    return t;
  }

  Mat3 general(int dim, double scale = 1.0)
  {
    Mat3 m = Mat3::Zero();
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = uniform(-scale, scale);
    return m;
  }

  std::mt19937_64& engine() { return gen_; }

private:
  std::mt19937_64 gen_;
};

inline Mat3 leading(const Mat3& m, int dim)
{
  Mat3 out = Mat3::Zero();
  out.topLeftCorner(dim, dim) = m.topLeftCorner(dim, dim);
  return out;
}

/// Push-forward F_aA F_bB F_cC F_dD A_ABCD, one index at a time in long double.
inline Full4 push_forward(const Full4& a, const Mat3& f)
{
  const int n = a.dim();
  using Buf = std::array<long double, 81>;
  auto at = [](int i, int j, int k, int l) { return ((i * 3 + j) * 3 + k) * 3 + l; };
  Buf cur{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) cur[at(i, j, k, l)] = a(i, j, k, l);
  for (int slot = 0; slot < 4; ++slot) {
    Buf next{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            std::array<int, 4> idx{i, j, k, l};
            const int row = idx[slot];
            long double v = 0.0L;
            for (int p = 0; p < n; ++p) {
              idx[slot] = p;
              v += static_cast<long double>(f(row, p)) * cur[at(idx[0], idx[1], idx[2], idx[3])];
            }
            next[at(i, j, k, l)] = v;
          }
    cur = next;
  }
  Full4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(i, j, k, l) = static_cast<double>(cur[at(i, j, k, l)]);
  return out;
}

/// Energy as a function of log stretches, for finite differences.
inline double energy_at(const materials::MaterialParams& p, std::array<double, 3> x)
{
  return materials::energy(p, materials::PrincipalState::from_log_stretches(p.dim, x));
}

/// Random state strictly inside the Gent admissible region (other models: any).
inline materials::PrincipalState random_state(Random& rng, const materials::MaterialParams& p, double lo = 0.3,
                                              double hi = 4.0)
{
  for (;;) {
    const auto l = rng.stretches(p.dim, lo, hi);
    const auto s = materials::PrincipalState::from_stretches(p.dim, l);
    if (p.model != materials::Model::Gent) return s;
    const auto s3 = materials::PrincipalState::from_log_stretches(3, s.loglam);
    double inv = 0.0;
    for (int k = 0; k < 3; ++k) inv += std::exp(2.0 * s3.loglam_bar[k]);
    if (inv - 3.0 < 0.9 * p.jm) return s;
  }
}

inline std::array<materials::MaterialParams, 4> reference_models(int dim = 3)
{
  using materials::MaterialParams;
  using materials::Model;
  return {MaterialParams::reference_set(Model::ExpHencky, 1.0, dim),
          MaterialParams::reference_set(Model::QuadHencky, 1.0, dim),
          MaterialParams::reference_set(Model::NeoHooke, 1.0, dim),
          MaterialParams::reference_set(Model::Gent, 1.0, dim)};
}

/// Structured box of Q4 (dim 2) or H8 (dim 3) elements with lower corner at the origin.
inline fem::Mesh box_mesh(int dim, std::array<int, 3> n, Vec3 size)
{
  fem::Mesh m;
  m.dim = dim;
  m.kind = dim == 2 ? fem::ElementKind::Q4 : fem::ElementKind::H8;
  if (dim == 2) n[2] = 0;
  auto id = [&](int i, int j, int k) { return i + (n[0] + 1) * (j + (n[1] + 1) * k); };
  for (int k = 0; k <= n[2]; ++k)
    for (int j = 0; j <= n[1]; ++j)
      for (int i = 0; i <= n[0]; ++i)
        m.nodes.emplace_back(size[0] * i / n[0], size[1] * j / n[1], dim == 3 ? size[2] * k / n[2] : 0.0);
  for (int k = 0; k < std::max(n[2], 1); ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) {
        std::array<int, fem::kMaxElementNodes> c{};
        c.fill(-1);
        c[0] = id(i, j, k);
        c[1] = id(i + 1, j, k);
        c[2] = id(i + 1, j + 1, k);
        c[3] = id(i, j + 1, k);
        if (dim == 3) {
          c[4] = id(i, j, k + 1);
          c[5] = id(i + 1, j, k + 1);
          c[6] = id(i + 1, j + 1, k + 1);
          c[7] = id(i, j + 1, k + 1);
        }
        m.elements.push_back(c);
      }
  return m;
}

} // namespace hencky::testing
