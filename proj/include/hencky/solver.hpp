#pragma once

#include "hencky/fem.hpp"

#include <Eigen/Sparse>
#include <Eigen/CholmodSupport>
#include <Eigen/UmfPackSupport>

#include <memory>
#include <string>
#include <vector>

namespace hencky::solver {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Direct sparse solve of a symmetric K, indefinite allowed. Zero pivot -> SingularTangent.
Eigen::VectorXd linear_solve(const SparseMatrix& k, const Eigen::VectorXd& rhs);

/**
 * Supernodal Cholesky while K is positive definite, pivoting LU (UMFPACK) otherwise.
 * Symbolic analyses are kept while the sparsity pattern is unchanged.
 */
class LinearSolver
{
public:
  LinearSolver();
  void factorize(const SparseMatrix& k);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs);
  /// True when the last factorization needed the LU fallback.
  bool used_lu() const { return use_lu_; }

private:
  Eigen::CholmodSupernodalLLT<SparseMatrix> llt_;
  Eigen::UmfPackLU<SparseMatrix> lu_;
  SparseMatrix matrix_; // UMFPACK reads the matrix again during the solve
  bool use_lu_ = false;
  bool lu_analyzed_ = false;
  Eigen::Index rows_ = -1;
  Eigen::Index nnz_ = -1;
};

struct NewtonConfig
{
  double tol_abs = 1e-9;        ///< N
  double tol_rel = 1e-10;       ///< relative to the first right-hand side of the step
  double tol_increment = 1e-13; ///< mm; accepts a step whose corrections have reached round-off
  int max_iter = 25;
  int max_step_cuts = 6;

  void validate() const;
};

/**
 * Proportional loading: after step s the constrained dofs take factor(s) times
 * `prescribed` and the external force is factor(s) times `f_ext`.
 */
struct LoadProgram
{
  std::vector<double> factors;     ///< cumulative load factor at the end of each step
  Eigen::VectorXd prescribed;      ///< full-length; only constrained entries are used
  Eigen::VectorXd f_ext;           ///< full-length reference load (N)
  std::vector<int> reaction_dofs;  ///< reactions summed into the resultant
  int displacement_dof = -1;       ///< dof reported as the curve abscissa
  std::string tag;

  int num_steps() const { return static_cast<int>(factors.size()); }
  void validate(int ndof) const;

  /// Uniform factors 1/n, 2/n, ..., 1.
  static std::vector<double> uniform(int nsteps);
};

struct Problem
{
  fem::Mesh mesh;
  fem::DofMap dofs;
  materials::MaterialParams material;
  int threads = 1;
};

struct StepReport
{
  int step = 0;           ///< program step (1-based)
  double factor = 0.0;    ///< load factor reached
  int iterations = 0;     ///< linear solves summed over the sub-increments
  int cuts = 0;           ///< bisection depth used
  std::vector<double> residuals; ///< free-dof residual norms of the last sub-increment
  double resultant = 0.0; ///< N
  double displacement = 0.0;
};

struct SolveReport
{
  std::vector<StepReport> steps;
  bool completed = true;
  std::string failure;
  double wall_seconds = 0.0;

  int max_iterations() const;
};

struct TrajectoryPoint
{
  double factor = 0.0;
  double displacement = 0.0;
  double resultant = 0.0;
};

struct StepResult
{
  Eigen::VectorXd u;
  int iterations = 0;
  std::vector<double> residuals;
  fem::GlobalSystem system; ///< assembled at the converged state
};

/**
 * Full Newton iterations for one increment. The first solve lifts the change of the
 * prescribed values into the free dofs; convergence is
 * |R_free| <= max(tol_abs, tol_rel |first rhs|). Throws NonConvergence,
 * SingularTangent or InvalidDeformation.
 */
StepResult newton_solve_step(const Problem& problem, const Eigen::VectorXd& u_start,
                             const Eigen::VectorXd& prescribed_target, const Eigen::VectorXd& f_ext_target,
                             const NewtonConfig& cfg, LinearSolver* linear = nullptr);

struct RunResult
{
  SolveReport report;
  std::vector<TrajectoryPoint> trajectory;
  Eigen::VectorXd u;
  fem::GlobalSystem system; ///< at the last converged state (empty when no step converged)
};

/// Applies the program step by step, bisecting a failed increment up to cfg.max_step_cuts times.
RunResult run_program(const Problem& problem, const LoadProgram& program, const NewtonConfig& cfg,
                      const Eigen::VectorXd* u0 = nullptr);

} // namespace hencky::solver
