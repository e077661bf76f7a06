#include "hencky/solver.hpp"

#include "hencky/error.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace hencky::solver {

namespace {

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Failures that a smaller increment can cure.
bool recoverable(const Error& e)
{
  return dynamic_cast<const NonConvergence*>(&e) || dynamic_cast<const InvalidDeformation*>(&e) ||
         dynamic_cast<const SingularTangent*>(&e);
}

} // namespace

// A failed Cholesky is the expected route to LU; keep CHOLMOD quiet about it.
LinearSolver::LinearSolver() { llt_.cholmod().print = 0; }

void LinearSolver::factorize(const SparseMatrix& k)
{
  if (k.rows() != k.cols()) throw ConfigError("linear solve: matrix is not square");
  if (k.rows() != rows_ || k.nonZeros() != nnz_) {
    llt_.analyzePattern(k);
    lu_analyzed_ = false;
    rows_ = k.rows();
    nnz_ = k.nonZeros();
  }
  // Cholesky reads one triangle only; anything beyond round-off asymmetry goes to LU.
  const SparseMatrix skew = k - SparseMatrix(k.transpose());
  use_lu_ = skew.norm() > 1e-10 * k.norm();
  if (!use_lu_) {
    llt_.factorize(k);
    use_lu_ = llt_.info() != Eigen::Success;
  }
  if (!use_lu_) return;
  matrix_ = k;
  matrix_.makeCompressed();
  if (!lu_analyzed_) {
    lu_.analyzePattern(matrix_);
    lu_analyzed_ = true;
  }
  lu_.factorize(matrix_);
  if (lu_.info() != Eigen::Success) throw SingularTangent("sparse LU: singular tangent");
}

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& rhs)
{
  Eigen::VectorXd x = use_lu_ ? Eigen::VectorXd(lu_.solve(rhs)) : Eigen::VectorXd(llt_.solve(rhs));
  if (!finite(x)) throw SingularTangent("sparse solve produced no finite solution");
  return x;
}

Eigen::VectorXd linear_solve(const SparseMatrix& k, const Eigen::VectorXd& rhs)
{
  if (rhs.size() != k.rows()) throw ConfigError("linear solve: right-hand side size mismatch");
  if (k.rows() == 0) return {};
  LinearSolver s;
  SparseMatrix kc = k;
  kc.makeCompressed();
  s.factorize(kc);
  return s.solve(rhs);
}

void NewtonConfig::validate() const
{
  if (!(tol_abs > 0.0) || !(tol_rel > 0.0) || !(tol_increment > 0.0))
    throw ConfigError("Newton tolerances must be > 0");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (max_step_cuts < 0) throw ConfigError("max_step_cuts must be >= 0");
}

void LoadProgram::validate(int ndof) const
{
  if (prescribed.size() != ndof || f_ext.size() != ndof)
    throw ConfigError("load program vectors do not match the dof count");
  if (!prescribed.allFinite() || !f_ext.allFinite()) throw ConfigError("load program values must be finite");
  for (double f : factors)
    if (!std::isfinite(f)) throw ConfigError("load factors must be finite");
  for (int d : reaction_dofs)
    if (d < 0 || d >= ndof) throw ConfigError("reaction dof out of range");
  if (displacement_dof >= ndof) throw ConfigError("monitored dof out of range");
}

std::vector<double> LoadProgram::uniform(int nsteps)
{
  if (nsteps < 1) throw ConfigError("number of steps must be >= 1");
  std::vector<double> f(nsteps);
  for (int s = 0; s < nsteps; ++s) f[s] = static_cast<double>(s + 1) / nsteps;
  return f;
}

int SolveReport::max_iterations() const
{
  int m = 0;
  for (const auto& s : steps) m = std::max(m, s.iterations);
  return m;
}

StepResult newton_solve_step(const Problem& problem, const Eigen::VectorXd& u_start,
                             const Eigen::VectorXd& prescribed_target, const Eigen::VectorXd& f_ext_target,
                             const NewtonConfig& cfg, LinearSolver* linear)
{
  LinearSolver local;
  LinearSolver& lin = linear ? *linear : local;
  const fem::DofMap& dofs = problem.dofs;
  const auto& free = dofs.free_dofs();
  const auto& fixed = dofs.constrained_dofs();
  fem::AssemblyOptions opt;
  opt.threads = problem.threads;

  StepResult out;
  out.u = u_start;
  Eigen::VectorXd du_c(fixed.size());
  for (size_t j = 0; j < fixed.size(); ++j) du_c[j] = prescribed_target[fixed[j]] - u_start[fixed[j]];

  fem::GlobalSystem sys = fem::assemble(problem.mesh, dofs, problem.material, out.u, f_ext_target, opt);
  fem::CondensedSystem cs = fem::condense(sys, dofs);
  Eigen::VectorXd rhs = cs.r_f;
  if (du_c.size() > 0) rhs -= cs.K_fc * du_c;
  const double tol = std::max(cfg.tol_abs, cfg.tol_rel * rhs.norm());
  out.residuals.push_back(rhs.norm());
  if (!std::isfinite(out.residuals.back())) throw NonConvergence("non-finite residual at the start of the step");
  if (out.residuals.back() <= cfg.tol_abs && du_c.lpNorm<Eigen::Infinity>() == 0.0) {
    out.system = std::move(sys);
    return out;
  }

  for (int it = 1; it <= cfg.max_iter; ++it) {
    Eigen::VectorXd du_f;
    if (!free.empty()) {
      try {
        lin.factorize(cs.K_ff);
        du_f = lin.solve(rhs);
      } catch (const SingularTangent& e) {
        throw SingularTangent("iteration " + std::to_string(it) + ": " + e.what());
      }
    }
    for (size_t i = 0; i < free.size(); ++i) out.u[free[i]] += du_f[i];
    if (it == 1)
      for (size_t j = 0; j < fixed.size(); ++j) out.u[fixed[j]] = prescribed_target[fixed[j]];
    out.iterations = it;

    sys = fem::assemble(problem.mesh, dofs, problem.material, out.u, f_ext_target, opt);
    cs = fem::condense(sys, dofs);
    rhs = cs.r_f;
    const double r = rhs.norm();
    out.residuals.push_back(r);
    if (!std::isfinite(r)) throw NonConvergence("non-finite residual at iteration " + std::to_string(it));
    const bool roundoff = it > 1 && (du_f.size() == 0 || du_f.lpNorm<Eigen::Infinity>() <= cfg.tol_increment);
    if (r <= tol || roundoff) {
      out.system = std::move(sys);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "no convergence in " << cfg.max_iter << " iterations, |R| = " << out.residuals.back() << " > " << tol;
  throw NonConvergence(msg.str());
}

RunResult run_program(const Problem& problem, const LoadProgram& program, const NewtonConfig& cfg,
                      const Eigen::VectorXd* u0)
{
  const auto start = std::chrono::steady_clock::now();
  const int ndof = problem.mesh.num_dofs();
  cfg.validate();
  program.validate(ndof);
  if (problem.dofs.num_dofs() != ndof) throw ConfigError("dof map does not match the mesh");

  RunResult res;
  res.u = u0 ? *u0 : Eigen::VectorXd::Zero(ndof);
  if (res.u.size() != ndof) throw ConfigError("initial displacement has the wrong size");
  LinearSolver lin;
  StepReport rep;

  // Recursive bisection of [a, b]; the state only advances on success.
  auto advance = [&](auto&& self, double a, double b, int depth) -> void {
    try {
      StepResult r = newton_solve_step(problem, res.u, b * program.prescribed, b * program.f_ext, cfg, &lin);
      res.u = std::move(r.u);
      res.system = std::move(r.system);
      rep.iterations += r.iterations;
      rep.residuals = std::move(r.residuals);
      rep.cuts = std::max(rep.cuts, depth);
    } catch (const Error& e) {
      if (!recoverable(e) || depth >= cfg.max_step_cuts) throw;
      self(self, a, 0.5 * (a + b), depth + 1);
      self(self, 0.5 * (a + b), b, depth + 1);
    }
  };

  double prev = 0.0;
  for (int s = 0; s < program.num_steps(); ++s) {
    rep = StepReport{};
    rep.step = s + 1;
    const double target = program.factors[s];
    try {
      advance(advance, prev, target, 0);
    } catch (const Error& e) {
      res.report.completed = false;
      std::ostringstream msg;
      msg << "step " << s + 1 << " (factor " << target << ") failed: " << e.what();
      res.report.failure = msg.str();
      break;
    }
    rep.factor = target;
    for (int d : program.reaction_dofs) rep.resultant += res.system.reactions[d];
    rep.displacement = program.displacement_dof >= 0 ? res.u[program.displacement_dof] : target;
    res.report.steps.push_back(rep);
    res.trajectory.push_back({target, rep.displacement, rep.resultant});
    prev = target;
  }
  res.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

} // namespace hencky::solver
