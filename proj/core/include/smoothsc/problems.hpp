#pragma once

#include <memory>
#include <string>
#include <vector>

#include "smoothsc/assembly.hpp"
#include "smoothsc/error_norms.hpp"
#include "smoothsc/mesh.hpp"

namespace smoothsc {

enum class CaseId {
  poisson_hex,
  poisson_square_threeline,
  dg_poisson,
  maxwell_cube,
  biharmonic_square,
  helmholtz_square,
  poisson_gmsh,
  maxwell_gmsh,
  adaptive_lshape
};

std::string to_string(CaseId id);
CaseId parse_case(const std::string& name);
const std::vector<CaseId>& all_cases();

struct ProblemParams {
  double gamma = 0.0;  // 0 selects the default penalty of the pair
  double kappa = 3.14159265358979323846;
  double omega = 2.0 / 3.0;
  double theta = 0.5;
  std::vector<std::string> mesh_files;  // *_gmsh cases, one file per level
};

/// A model problem: PDE form, error norm, load data and exact solution for
/// the degree pair (k, k+1).
struct Problem {
  CaseId id = CaseId::poisson_hex;
  int k = 1;
  int dim = 2;
  Family family = Family::lagrange;
  bool complex = false;
  bool dirichlet = true;
  DomainId domain = DomainId::hexagon;  // structured cases
  FormSpec form;
  NormSpec norm;
  SourceData source;
  ExactSolution<double> exact;
  ExactSolution<smoothsc::complex> exact_c;

  SpaceSpec space(int degree) const { return {family, degree, dim, complex, dirichlet}; }
  bool structured() const { return id != CaseId::poisson_gmsh && id != CaseId::maxwell_gmsh; }
};

/// Default CIP penalty: 10 for P2-P3 and 17 for P3-P4 (10 otherwise).
double default_gamma(CaseId id, int k);

Problem make_problem(CaseId id, int k, const ProblemParams& params = {});

/// Mesh of refinement `level` (structured cases) or mesh_files[level]
/// (Gmsh cases).
std::shared_ptr<const Mesh> problem_mesh(const Problem& p, int level, const ProblemParams& params = {});

/// Nominal mesh size: 2^-level h_0 for structured cases, 2^-level for Gmsh
/// cases (the target size of the level files), the measured maximal edge
/// length for the L-shape.
double problem_h(const Problem& p, const Mesh& mesh, int level);

/// Discretization of one level: coarse space V = P_k, enriched space
/// V~ = P_{k+1}, both systems, the embedding and the coarse solution u_h.
template <class T>
struct LevelSystem {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const DofMap> coarse;
  std::shared_ptr<const DofMap> fine;
  CsrMatrix<T> A;
  Vector<T> f;
  CsrMatrix<T> A_fine;
  Vector<T> f_fine;
  CsrMatrix<double> iota;
  Vector<T> u_h;

  NormSpec norm;
  ExactSolution<T> exact;

  /// Error of u_h in the problem norm.
  double error_coarse() const;
  /// Error of an enriched-space function in the problem norm.
  double error_fine(const Vector<T>& u) const;
};

/// Assembles both systems (loads integrated with one rule of degree
/// 2(k+2) so that iota^T f~ = f) and solves the coarse system.
template <class T>
LevelSystem<T> build_level(const Problem& p, std::shared_ptr<const Mesh> mesh);

}  // namespace smoothsc
