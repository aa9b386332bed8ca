#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothsc/postprocess.hpp"
#include "smoothsc/problems.hpp"
#include "smoothsc/smoothers.hpp"

namespace smoothsc {

/// A smoother name resolved to a kind, a damping factor and the iteration
/// it is used with unless a method is given explicitly.
struct SmootherChoice {
  SmootherKind kind = SmootherKind::identity;
  double omega = 1.0;
  Method method = Method::pcg;
};

/// Accepts every SmootherKind name plus the aliases
///   cg  = identity + pcg      jcg = jacobi(1) + pcg    dj = jacobi(omega) + fp
///   gs  = gs_forward + fp     sgs = gs_symmetric + fp  bj = block_jacobi + pcg
///   block_gs, bgs = block_gs_symmetric + fp
/// Plain kind names default to fp for point and block sweeps and to pcg for
/// identity, block_jacobi and hx.
SmootherChoice resolve_smoother(const std::string& name, double omega);

/// Builds patches or HX data as the kind requires.
template <class T>
SmootherSpec make_smoother_spec(const SmootherChoice& choice, const Problem& p, const LevelSystem<T>& L);

struct ExperimentConfig {
  CaseId id = CaseId::poisson_hex;
  int k = 1;
  std::string smoother = "cg";
  std::optional<Method> method;  // unset: the smoother's default (gmres for complex cases)
  std::vector<int> ms{0, 1, 2, 3};
  int level_min = 1;
  int level_max = 4;
  ProblemParams params;
  std::string dump_matrix_dir;  // non-empty: write both matrices of every level
};

struct Orders {
  std::vector<double> steps;  // log(e_i / e_{i+1}) / log(s_i / s_{i+1})
  double tail = 0.0;          // least-squares slope of log e over log s, last min(tail, n) points
};

/// Throws for fewer than two levels, nonpositive entries or equal scales.
Orders compute_orders(std::span<const double> errors, std::span<const double> scales, int tail = 4);

struct ConvergenceTable {
  std::string case_name;
  std::string smoother;
  std::string method;
  int k = 1;
  std::vector<int> ms;
  std::vector<int> levels;
  std::vector<double> scales;                // h per level
  std::vector<std::size_t> ndofs;            // free dofs of the degree-k space
  std::vector<std::vector<double>> errors;   // [level][m index], NaN on failure
  std::vector<std::string> failures;         // empty string when the level ran
  std::vector<double> seconds;               // wall time per level
  std::vector<std::optional<Orders>> orders; // per m; unset with < 2 good levels

  bool failed(std::size_t level_index) const { return !failures[level_index].empty(); }
};

/// Every level: assemble both spaces, solve for u_h, postprocess once to the
/// largest m and record the error of R_m u_h for every requested m. A level
/// whose setup throws is kept as a failure row.
ConvergenceTable run_experiment(const ExperimentConfig& cfg);

/// Header "h,m<m>...", one row per level ("nan" on failure), one row
/// "step_L<a>_L<b>" per consecutive pair of good levels, final row "order"
/// with the tail fit. Errors print with 6 significant digits, orders with 4
/// decimals. Wall times are not written, so equal configs give equal bytes.
void write_csv(std::ostream& out, const ConvergenceTable& table);

/// Energy-norm smoothing decay ||u~ - u_k||_a / ||u~ - u_0||_a, k = 0..K,
/// for a real case at one level; u~ is the enriched solution.
std::vector<double> run_decay(const ExperimentConfig& cfg, int level, int K);

struct SpectrumResult {
  std::size_t n = 0;
  double lambda_max = 0.0;
  std::vector<double> history;
};

/// Power-iteration estimate of lambda_max(S A) on the enriched system of a
/// real case. Multiplicative sweeps are symmetrized by the gs_symmetric and
/// block_gs_symmetric kinds; forward/backward kinds are estimated as given.
SpectrumResult run_spectrum(const ExperimentConfig& cfg, int level, int iters, std::uint64_t seed);

}  // namespace smoothsc
