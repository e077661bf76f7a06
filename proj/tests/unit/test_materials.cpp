#include "support.hpp"

#include "hencky/error.hpp"
#include "hencky/materials.hpp"

#include <doctest.h>

using namespace hencky::materials;
using hencky::tensor::Full4;
using hencky::tensor::Mat3;
using hencky::tensor::SymTensor;
using hencky::tensor::Tangent4;
using hencky::tensor::voigt_pack;
using hencky::tensor::voigt_unpack;
using hencky::testing::Random;
using hencky::testing::rel_err;
using hencky::testing::rel_err_norm;

namespace {

MaterialParams table2_eh(int dim = 3) { return MaterialParams::reference_set(Model::ExpHencky, 1.0, dim); }

PrincipalState state3(double a, double b, double c)
{
  const std::array<double, 3> l{a, b, c};
  return PrincipalState::from_stretches(3, l);
}

// Independent transcription of the exponentiated Hencky energy in principal stretches.
double exp_hencky_oracle(double mu, double kappa, double k, double khat, double l1, double l2, double l3)
{
  const double logdet = std::log(l1 * l2 * l3);
  const double b1 = std::log(l1) - logdet / 3.0;
  const double b2 = std::log(l2) - logdet / 3.0;
  const double b3 = std::log(l3) - logdet / 3.0;
  return mu / k * std::exp(k * (b1 * b1 + b2 * b2 + b3 * b3)) + kappa / (2.0 * khat) * std::exp(khat * logdet * logdet);
}

} // namespace

TEST_CASE("PrincipalState invariants")
{
  Random rng(1);
  for (int dim : {2, 3}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto l = rng.stretches(dim);
      const PrincipalState s = PrincipalState::from_stretches(dim, l);
      double sum_bar = 0.0;
      double prod = 1.0;
      for (int k = 0; k < dim; ++k) {
        sum_bar += s.loglam_bar[k];
        prod *= l[k];
        CHECK(std::abs(s.loglam[k] - (s.loglam_bar[k] + std::log(s.J) / dim)) < 1e-13);
      }
      CHECK(std::abs(sum_bar) < 1e-13);
      CHECK(rel_err(s.J, prod) < 1e-14);
    }
  }
  const std::array<double, 3> bad{1.0, -0.5, 1.0};
  CHECK_THROWS_AS(PrincipalState::from_stretches(3, bad), hencky::InvalidDeformation);
}

TEST_CASE("MaterialParams validation")
{
  MaterialParams p = table2_eh();
  CHECK_NOTHROW(p.validate());
  p.mu = -1.0;
  CHECK_THROWS_AS(p.validate(), hencky::ConfigError);
  p = table2_eh();
  p.kappa = 0.0;
  CHECK_THROWS_AS(p.validate(), hencky::ConfigError);
  p = MaterialParams::reference_set(Model::NeoHooke, 1.0, 2);
  CHECK_NOTHROW(p.validate());
  p.dim = 4;
  CHECK_THROWS_AS(p.validate(), hencky::ConfigError);
  p = MaterialParams::reference_set(Model::Gent);
  p.jm = 0.0;
  CHECK_THROWS_AS(p.validate(), hencky::ConfigError);
  CHECK(model_from_string("gent") == Model::Gent);
  CHECK(model_from_string(to_string(Model::QuadHencky)) == Model::QuadHencky);
  CHECK_THROWS_AS(model_from_string("ogden"), hencky::ConfigError);
}

TEST_CASE("energy examples")
{
  const MaterialParams eh = table2_eh();
  CHECK(energy(eh, state3(1, 1, 1)) == doctest::Approx(0.5 + 4.7 / 6.0).epsilon(1e-15));

  const MaterialParams h = MaterialParams::reference_set(Model::QuadHencky);
  CHECK(energy(h, state3(1, 1, 1)) == 0.0);
  const PrincipalState s = state3(2, 1, 1);
  const double ln2 = std::log(2.0);
  CHECK(energy(h, s) == doctest::Approx(1.0 * (4.0 / 9 + 2.0 / 9) * ln2 * ln2 + 0.5 * 4.7 * ln2 * ln2));

  CHECK(rel_err(energy(eh, s), exp_hencky_oracle(1.0, 4.7, 2.0, 3.0, 2, 1, 1)) < 1e-14);

  Random rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto l = rng.stretches(3);
    CHECK(rel_err(energy(eh, PrincipalState::from_stretches(3, l)),
                  exp_hencky_oracle(1.0, 4.7, 2.0, 3.0, l[0], l[1], l[2])) < 1e-13);
  }

  for (const auto& p : hencky::testing::reference_models()) {
    if (p.model == Model::ExpHencky) continue;
    CHECK(std::abs(energy(p, state3(1, 1, 1))) < 1e-15);
  }
}

TEST_CASE("NeoHooke isochoric invariant equals |F / det F^(1/3)|^2")
{
  Random rng(3);
  const MaterialParams nh = MaterialParams::reference_set(Model::NeoHooke);
  for (int trial = 0; trial < 50; ++trial) {
    const auto l = rng.stretches(3);
    const Mat3 f = rng.deformation_gradient(3, l);
    const double j = f.determinant();
    const double i1 = (f / std::cbrt(j)).squaredNorm();
    const double vol = 3.0 / 8.0 * nh.kappa * (std::pow(j, 4.0 / 3.0) + 2.0 / std::pow(j, 2.0 / 3.0) - 3.0);
    CHECK(rel_err(energy(nh, PrincipalState::from_stretches(3, l)), 0.5 * nh.mu * (i1 - 3.0) + vol) < 1e-12);
  }
}

TEST_CASE("Gent locking limit")
{
  const MaterialParams g = MaterialParams::reference_set(Model::Gent);
  CHECK_THROWS_AS(energy(g, state3(4.5, 1.0 / std::sqrt(4.5), 1.0 / std::sqrt(4.5))), hencky::LockingLimit);
  CHECK_NOTHROW(energy(g, state3(2.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0))));
}

TEST_CASE("principal_tau examples")
{
  for (const auto& p : hencky::testing::reference_models()) {
    const PrincipalStresses t = principal_tau(p, state3(1, 1, 1));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(t.tau[k]) < 1e-15);
  }

  // Quadratic Hencky: tau_i = 2 mu lbar_i + kappa theta.
  const MaterialParams h = MaterialParams::reference_set(Model::QuadHencky);
  const PrincipalStresses t = principal_tau(h, state3(2, 1, 1));
  const double ln2 = std::log(2.0);
  CHECK(t.tau[0] == doctest::Approx((4.0 / 3.0 + 4.7) * ln2).epsilon(1e-14));
  CHECK(t.tau[0] == doctest::Approx(4.1820).epsilon(1e-4));
  CHECK(t.tau[1] == doctest::Approx(2.7957).epsilon(1e-4));
  CHECK(t.tau[2] == doctest::Approx(t.tau[1]).epsilon(1e-15));
  CHECK(t.s1[0] == doctest::Approx(t.tau[0] / 2.0));
  CHECK(t.s2[0] == doctest::Approx(t.tau[0] / 4.0));
}

TEST_CASE("principal stresses are log-stretch gradients of the energy")
{
  Random rng(4);
  const double h = 1e-6;
  for (int dim : {2, 3}) {
    for (const auto& p : hencky::testing::reference_models(dim)) {
      if (p.dim != dim) continue;
      double worst = 0.0;
      for (int trial = 0; trial < 1000; ++trial) {
        const PrincipalState s = hencky::testing::random_state(rng, p);
        const PrincipalStresses t = principal_tau(p, s);
        double scale = 0.0;
        for (int k = 0; k < dim; ++k) scale = std::max(scale, std::abs(t.tau[k]));
        for (int k = 0; k < dim; ++k) {
          auto xp = s.loglam, xm = s.loglam;
          xp[k] += h;
          xm[k] -= h;
          const double fd = (hencky::testing::energy_at(p, xp) - hencky::testing::energy_at(p, xm)) / (2 * h);
          worst = std::max(worst, std::abs(fd - t.tau[k]) / std::max(scale, p.mu));
        }
      }
      INFO(to_string(p.model), " dim ", dim);
      CHECK(worst < 1e-6);
    }
  }
}

TEST_CASE("d2W examples")
{
  Random rng(5);
  const MaterialParams h = MaterialParams::reference_set(Model::QuadHencky);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat3 d = d2W(h, hencky::testing::random_state(rng, h));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(d(i, j) == doctest::Approx(2.0 * ((i == j) - 1.0 / 3.0) + 4.7));
  }
  const Mat3 d = d2W(table2_eh(), state3(1, 1, 1));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(d(i, j) == doctest::Approx(2.0 * ((i == j) - 1.0 / 3.0) + 4.7));

  const MaterialParams h2 = MaterialParams::reference_set(Model::QuadHencky, 1.0, 2);
  const std::array<double, 3> l2{1.7, 0.6, 1.0};
  const Mat3 dd = d2W(h2, PrincipalState::from_stretches(2, l2));
  CHECK(dd(0, 0) == doctest::Approx(2.0 * 0.5 + 4.7));
  CHECK(dd(0, 1) == doctest::Approx(-2.0 * 0.5 + 4.7));
}

TEST_CASE("d2W is the log-stretch Jacobian of the principal stresses")
{
  Random rng(6);
  const double h = 1e-5;
  for (int dim : {2, 3}) {
    for (const auto& p : hencky::testing::reference_models(dim)) {
      if (p.dim != dim) continue;
      double worst = 0.0;
      for (int trial = 0; trial < 1000; ++trial) {
        const PrincipalState s = hencky::testing::random_state(rng, p);
        const Mat3 d = d2W(p, s);
        CHECK((d - d.transpose()).norm() <= 1e-14 * d.norm());
        for (int j = 0; j < dim; ++j) {
          auto xp = s.loglam, xm = s.loglam;
          xp[j] += h;
          xm[j] -= h;
          const auto tp = principal_tau(p, PrincipalState::from_log_stretches(dim, xp));
          const auto tm = principal_tau(p, PrincipalState::from_log_stretches(dim, xm));
          for (int i = 0; i < dim; ++i) {
            const double fd = (tp.tau[i] - tm.tau[i]) / (2 * h);
            worst = std::max(worst, std::abs(fd - d(i, j)) / std::max(d.cwiseAbs().maxCoeff(), p.mu));
          }
        }
      }
      INFO(to_string(p.model), " dim ", dim);
      CHECK(worst < 5e-4);
    }
  }
}

TEST_CASE("exponentiated Hencky with vanishing exponents reduces to quadratic Hencky")
{
  Random rng(7);
  for (int dim : {2, 3}) {
    MaterialParams eh = table2_eh(dim);
    eh.k = 1e-9;
    eh.khat = 1e-9;
    const MaterialParams h = MaterialParams::reference_set(Model::QuadHencky, 1.0, dim);
    for (int trial = 0; trial < 200; ++trial) {
      const PrincipalState s = hencky::testing::random_state(rng, h, 0.5, 2.0);
      const auto te = principal_tau(eh, s);
      const auto th = principal_tau(h, s);
      for (int k = 0; k < dim; ++k) CHECK(std::abs(te.tau[k] - th.tau[k]) <= 1e-6 * std::max(1.0, std::abs(th.tau[k])));
      CHECK(rel_err_norm(d2W(eh, s), d2W(h, s)) < 1e-6);
    }
  }
}

TEST_CASE("chi examples")
{
  const MaterialParams h = MaterialParams::reference_set(Model::QuadHencky);
  CHECK(chi(h, state3(1, 1, 1), 0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(chi(table2_eh(), state3(1, 1, 1), 0, 2) == doctest::Approx(1.0).epsilon(1e-14));

  // Generic limit against the closed forms mu e^(k q) - tau_k and mu - tau_k.
  Random rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = rng.uniform(0.3, 4.0);
    const double c = rng.uniform(0.3, 4.0);
    for (int dim : {2, 3}) {
      const std::array<double, 3> l{a, a, c};
      const PrincipalState s = PrincipalState::from_stretches(dim, l);
      const MaterialParams eh = table2_eh(dim);
      double q = 0.0;
      for (int k = 0; k < dim; ++k) q += s.loglam_bar[k] * s.loglam_bar[k];
      const double tau0 = principal_tau(eh, s).tau[0];
      CHECK(rel_err(chi(eh, s, 0, 1), eh.mu * std::exp(eh.k * q) - tau0, 1.0) < 1e-12);
      double theta = 0.0;
      for (int k = 0; k < dim; ++k) theta += s.loglam[k];
      const double second_line = eh.mu * std::exp(eh.k * q) * (1.0 - 2.0 * s.loglam_bar[0]) -
                                 eh.kappa * std::exp(eh.khat * theta * theta) * theta;
      CHECK(rel_err(chi(eh, s, 0, 1), second_line, 1.0) < 1e-12);

      const MaterialParams hq = MaterialParams::reference_set(Model::QuadHencky, 1.0, dim);
      CHECK(rel_err(chi(hq, s, 0, 1), hq.mu - principal_tau(hq, s).tau[0], 1.0) < 1e-12);
    }
  }
}

TEST_CASE("chi is continuous across the coincident-stretch branch")
{
  Random rng(9);
  for (const auto& p : hencky::testing::reference_models()) {
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const PrincipalState base = hencky::testing::random_state(rng, p, 0.4, 3.0);
      std::array<double, 3> near = base.lambda;
      std::array<double, 3> equal = base.lambda;
      near[1] = near[0] * (1.0 + 1e-6);
      equal[1] = equal[0];
      const auto sn = PrincipalState::from_stretches(3, near);
      const auto se = PrincipalState::from_stretches(3, equal);
      if (p.model == Model::Gent) {
        try {
          (void)energy(p, sn);
        } catch (const hencky::LockingLimit&) {
          continue;
        }
      }
      const double dd = chi(p, sn, 0, 1);
      const double lim = chi(p, se, 0, 1);
      worst = std::max(worst, std::abs(dd - lim) / std::max(std::abs(lim), p.mu));
    }
    INFO(to_string(p.model));
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("chi divided difference converges linearly to the limit")
{
  const MaterialParams eh = table2_eh();
  const auto se = state3(1.7, 1.7, 0.6);
  const double lim = chi_limit(eh, se, 0, 1);
  double prev = 0.0;
  for (double eps : {1e-5, 1e-6, 1e-7}) {
    const auto s = state3(1.7, 1.7 * (1 + eps), 0.6);
    const double err = std::abs(chi(eh, s, 0, 1) - lim);
    CHECK(err < 50.0 * eps * std::max(1.0, std::abs(lim)));
    if (prev > 0.0) CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("spatial tangent at the identity is the isotropic elasticity tensor")
{
  for (int dim : {2, 3}) {
    const MaterialParams eh = table2_eh(dim);
    const StressAndTangent st = spatial_tangent_and_stress(eh, SymTensor::identity(dim));
    CHECK(st.tau_tensor.norm() == 0.0);
    const Eigen::MatrixXd c = st.c_spatial.matrix();
    for (int r = 0; r < dim; ++r)
      for (int q = 0; q < dim; ++q) CHECK(c(r, q) == doctest::Approx(2.0 * ((r == q) - 1.0 / dim) + 4.7));
    for (int r = dim; r < c.rows(); ++r) {
      CHECK(c(r, r) == doctest::Approx(1.0));
      for (int q = 0; q < c.cols(); ++q)
        if (q != r) CHECK(c(r, q) == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("spatial tangent is major-symmetric and equals the push-forward of the material tangent")
{
  Random rng(10);
  for (int dim : {2, 3}) {
    for (const auto& p : hencky::testing::reference_models(dim)) {
      if (p.dim != dim) continue;
      double worst_push = 0.0;
      double worst_sym = 0.0;
      for (int trial = 0; trial < 200; ++trial) {
        const PrincipalState s = hencky::testing::random_state(rng, p);
        const Mat3 f = rng.deformation_gradient(dim, s.lambda);
        const auto b = SymTensor::from_matrix(dim, f * f.transpose());
        const auto c = SymTensor::from_matrix(dim, f.transpose() * f);
        const StressAndTangent st = spatial_tangent_and_stress(p, b);
        const Full4 pushed = hencky::testing::push_forward(voigt_unpack(material_tangent(p, c)), f);
        worst_push = std::max(worst_push, rel_err_norm(voigt_pack(pushed).matrix(), st.c_spatial.matrix()));
        worst_sym = std::max(worst_sym, st.c_spatial.asymmetry() / st.c_spatial.norm());
      }
      INFO(to_string(p.model), " dim ", dim);
      CHECK(worst_push < 1e-12);
      CHECK(worst_sym < 1e-12);
    }
  }
}

TEST_CASE("material tangent is twice the C-derivative of S2")
{
  Random rng(11);
  const double h = 1e-6;
  for (int dim : {2, 3}) {
    for (const auto& p : hencky::testing::reference_models(dim)) {
      if (p.dim != dim) continue;
      double worst = 0.0;
      for (int trial = 0; trial < 200; ++trial) {
        const PrincipalState s = hencky::testing::random_state(rng, p, 0.4, 3.0);
        const Mat3 f = rng.deformation_gradient(dim, s.lambda);
        const auto c = SymTensor::from_matrix(dim, f.transpose() * f);
        const SymTensor dc = rng.symmetric(dim, c.norm());
        const Mat3 fd =
            (second_pk(p, c + h * dc).matrix() - second_pk(p, c - h * dc).matrix()) / (2.0 * h);
        const Mat3 an = voigt_unpack(material_tangent(p, c)).contract(0.5 * dc.matrix());
        worst = std::max(worst, rel_err_norm(an, fd));
      }
      INFO(to_string(p.model), " dim ", dim);
      CHECK(worst < 5e-4);
    }
  }
  const MaterialParams eh = table2_eh();
  CHECK(rel_err_norm(material_tangent(eh, SymTensor::identity(3)).matrix(),
                     spatial_tangent_and_stress(eh, SymTensor::identity(3)).c_spatial.matrix()) < 1e-15);
}

TEST_CASE("mixed tangent is the F-derivative of S1")
{
  Random rng(12);
  const double h = 1e-6;
  for (int dim : {2, 3}) {
    for (const auto& p : hencky::testing::reference_models(dim)) {
      if (p.dim != dim) continue;
      double worst = 0.0;
      for (int trial = 0; trial < 200; ++trial) {
        const PrincipalState s = hencky::testing::random_state(rng, p, 0.4, 3.0);
        const Mat3 f = rng.deformation_gradient(dim, s.lambda);
        const Mat3 df = rng.general(dim, f.norm());
        const Mat3 fd = (first_pk(p, f + h * df) - first_pk(p, f - h * df)) / (2.0 * h);
        worst = std::max(worst, rel_err_norm(mixed_tangent(p, f).contract(df), fd));
      }
      INFO(to_string(p.model), " dim ", dim);
      CHECK(worst < 5e-4);
    }
  }
}

TEST_CASE("mixed tangent special states")
{
  const MaterialParams eh = table2_eh();
  const Full4 at_identity = mixed_tangent(eh, Mat3::Identity());
  const Full4 spatial = voigt_unpack(spatial_tangent_and_stress(eh, SymTensor::identity(3)).c_spatial);
  CHECK((at_identity - spatial).norm() < 1e-14);

  Random rng(13);
  const Mat3 r = rng.rotation(3);
  CHECK(first_pk(eh, r).norm() < 1e-14);
  const Full4 rotated = mixed_tangent(eh, r);
  CHECK(std::isfinite(rotated.norm()));
  // d2W/dF2 at a rotation: R-rotated identity modulus acting on R^T dF.
  const Mat3 df = rng.general(3);
  const Mat3 expected = r * at_identity.contract(r.transpose() * df);
  CHECK(rel_err_norm(rotated.contract(df), expected) < 1e-12);

  Mat3 reflect = Mat3::Identity();
  reflect(2, 2) = -1.0;
  CHECK_THROWS_AS(mixed_tangent(eh, reflect), hencky::InvalidDeformation);
}

TEST_CASE("spatial response is objective and independent of the eigenvalue labeling")
{
  Random rng(14);
  for (const auto& p : hencky::testing::reference_models()) {
    for (int trial = 0; trial < 100; ++trial) {
      const PrincipalState s = hencky::testing::random_state(rng, p);
      const Mat3 f = rng.deformation_gradient(3, s.lambda);
      const Mat3 q = rng.rotation(3);
      const auto b = SymTensor::from_matrix(3, f * f.transpose());
      const auto bq = SymTensor::from_matrix(3, q.transpose() * b.matrix() * q);
      const StressAndTangent st = spatial_tangent_and_stress(p, b);
      const StressAndTangent sq = spatial_tangent_and_stress(p, bq);
      CHECK(rel_err_norm(sq.tau_tensor.matrix(), q.transpose() * st.tau_tensor.matrix() * q) < 1e-12);
      const Full4 rotated = hencky::testing::push_forward(voigt_unpack(st.c_spatial), q.transpose());
      CHECK(rel_err_norm(voigt_pack(rotated).matrix(), sq.c_spatial.matrix()) < 1e-10);
    }
  }

  // Same B with the principal axes listed in a different order.
  const MaterialParams eh = table2_eh();
  const Mat3 r = rng.rotation(3);
  auto build = [&](double a, double b, double c) {
    return SymTensor::from_matrix(3, r * Eigen::Vector3d(a, b, c).asDiagonal() * r.transpose());
  };
  const StressAndTangent s1 = spatial_tangent_and_stress(eh, build(2.0, 0.5, 1.3));
  const Mat3 perm = (Mat3() << 0, 1, 0, 0, 0, 1, 1, 0, 0).finished();
  const SymTensor bp = SymTensor::from_matrix(3, (r * perm) * Eigen::Vector3d(1.3, 2.0, 0.5).asDiagonal() *
                                                     (r * perm).transpose());
  const StressAndTangent s2 = spatial_tangent_and_stress(eh, bp);
  CHECK(rel_err_norm(s1.tau_tensor.matrix(), s2.tau_tensor.matrix()) < 1e-12);
  CHECK(rel_err_norm(s1.c_spatial.matrix(), s2.c_spatial.matrix()) < 1e-12);
}

TEST_CASE("spatial tangent rejects non-SPD B")
{
  CHECK_THROWS_AS(spatial_tangent_and_stress(table2_eh(), SymTensor::diag(3, {1.0, -1.0, 1.0})),
                  hencky::InvalidDeformation);
  CHECK_THROWS_AS(spatial_tangent_and_stress(table2_eh(3), SymTensor::identity(2)), hencky::ConfigError);
}

TEST_CASE("jaumann_modulus")
{
  Random rng(15);
  const Tangent4 c = spatial_tangent_and_stress(table2_eh(), rng.spd(3, 0.5, 3.0)).c_spatial;
  CHECK((jaumann_modulus(c, SymTensor::zero(3)).matrix() - c.matrix()).norm() == 0.0);

  const double pr = 2.5;
  const Eigen::MatrixXd shift = jaumann_modulus(c, SymTensor::identity(3) * pr).matrix() - c.matrix();
  const Eigen::VectorXd expected = (Eigen::VectorXd(6) << 2 * pr, 2 * pr, 2 * pr, pr, pr, pr).finished();
  CHECK((shift - Eigen::MatrixXd(expected.asDiagonal())).norm() < 1e-15);

  for (int dim : {2, 3}) {
    const SymTensor tau = rng.symmetric(dim, 3.0);
    const Tangent4 zero(dim);
    const Full4 added = voigt_unpack(jaumann_modulus(zero, tau));
    auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) {
            const double brute =
                0.5 * (tau(i, k) * d(j, l) + tau(j, k) * d(i, l) + tau(i, l) * d(j, k) + tau(j, l) * d(i, k));
            CHECK(std::abs(added(i, j, k, l) - brute) <= 1e-14);
          }
  }
}

TEST_CASE("cauchy_from_kirchhoff")
{
  CHECK(cauchy_from_kirchhoff(SymTensor::zero(3), 1.3).norm() == 0.0);
  const SymTensor t = SymTensor::diag(3, {2.0, 0.0, 0.0});
  CHECK(cauchy_from_kirchhoff(t, 1.0)(0, 0) == 2.0);
  CHECK(cauchy_from_kirchhoff(t, 2.0)(0, 0) == 1.0);
  CHECK_THROWS_AS(cauchy_from_kirchhoff(t, 0.0), hencky::InvalidDeformation);
}

TEST_CASE("log_strain_measures")
{
  auto m = log_strain_measures(state3(1, 1, 1));
  CHECK(m.omega_iso == 0.0);
  CHECK(m.omega_vol == 0.0);
  m = log_strain_measures(state3(2, 1, 1));
  CHECK(m.omega_vol == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(m.omega_iso == doctest::Approx(std::log(2.0) * std::sqrt(6.0) / 3.0).epsilon(1e-14));
  CHECK(m.omega_iso == doctest::Approx(0.565952).epsilon(1e-6));
  m = log_strain_measures(state3(1.7, 1.7, 1.7));
  CHECK(m.omega_iso < 1e-15);
  CHECK(m.omega_vol == doctest::Approx(3.0 * std::log(1.7)));
}

TEST_CASE("params_from_engineering")
{
  MaterialParams p = MaterialParams::reference_set(Model::ExpHencky);
  CHECK(engineering_from_params(p).nu == doctest::Approx(12.1 / 30.2).epsilon(1e-15));
  CHECK(engineering_from_params(p).nu == doctest::Approx(0.4).epsilon(2e-3));

  const MaterialParams zero_nu = params_from_engineering(3.0, 0.0, 2.0, true);
  CHECK(zero_nu.mu == doctest::Approx(1.5));
  CHECK(zero_nu.kappa == doctest::Approx(1.0));
  CHECK(zero_nu.khat == doctest::Approx(3.0));
  CHECK(params_from_engineering(3.0, 0.2, 2.0, false, 7.0).khat == 7.0);

  Random rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const double mu = rng.uniform(0.1, 10.0);
    const double kappa = mu * rng.uniform(0.5, 60.0);
    p.mu = mu;
    p.kappa = kappa;
    const auto e = engineering_from_params(p);
    const MaterialParams back = params_from_engineering(e.E, e.nu, p.k, false, p.khat);
    CHECK(rel_err(back.mu, mu) < 1e-14);
    CHECK(rel_err(back.kappa, kappa) < 1e-14);
  }

  CHECK_THROWS_AS(params_from_engineering(1.0, 0.5, 1.0, true), hencky::ConfigError);
  CHECK_THROWS_AS(params_from_engineering(1.0, 0.5 - 1e-14, 1.0, true), hencky::ConfigError);
  CHECK_THROWS_AS(params_from_engineering(-1.0, 0.3, 1.0, true), hencky::ConfigError);
}

TEST_CASE("planar exponentiated Hencky")
{
  const MaterialParams p2 = table2_eh(2);
  const std::array<double, 3> one{1.0, 1.0, 1.0};
  CHECK(energy(p2, PrincipalState::from_stretches(2, one)) == doctest::Approx(0.5 + 4.7 / 6.0).epsilon(1e-15));

  const std::array<double, 3> l{1.6, 0.7, 1.0};
  const PrincipalState s2 = PrincipalState::from_stretches(2, l);
  CHECK(std::abs(s2.loglam_bar[0] + s2.loglam_bar[1]) < 1e-15);
  // The planar energy is not the 3D energy at plane strain.
  const double planar = energy(p2, s2);
  const double plane_strain = energy(table2_eh(3), PrincipalState::from_stretches(3, l));
  CHECK(std::abs(planar - plane_strain) > 1e-3);
}
