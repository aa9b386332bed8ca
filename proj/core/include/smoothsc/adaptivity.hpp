#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "smoothsc/dofmap.hpp"
#include "smoothsc/postprocess.hpp"
#include "smoothsc/problems.hpp"
#include "smoothsc/smoothers.hpp"

namespace smoothsc {

struct Estimate {
  double eta = 0.0;          // sqrt of the sum of squared indicators
  std::vector<double> cell;  // eta_T = |R_m u_h - iota u_h|_{H1(T)}
};

/// Indicators from two functions of the enriched space on the same mesh.
Estimate estimate(const DofMap& fine, const Vector<double>& iota_uh, const Vector<double>& rm_uh);

/// Smallest set of cells whose squared indicators sum to at least
/// theta^2 times the total: greedy over decreasing indicators, equal values
/// taken in ascending cell order. Returned in ascending order. All-zero
/// indicators give an empty set.
std::vector<int> dorfler_mark(std::span<const double> indicators, double theta);

struct AdaptConfig {
  int k = 1;
  double theta = 0.5;
  int m = 4;
  int max_iters = 40;
  int initial_level = 1;  // uniform refinements of the initial mesh
  SmootherKind smoother = SmootherKind::identity;
  Method method = Method::pcg;
};

struct AdaptRecord {
  int iter = 0;
  std::size_t ndof = 0;  // free dofs of the degree-k space
  double eta = 0.0;
  double err_u = 0.0;   // |u - u_h|_{H1}
  double err_rm = 0.0;  // |u - R_m u_h|_{H1}
  double effectivity = 0.0;
};

/// solve -> postprocess -> estimate -> mark -> bisect, max_iters times.
/// Iterations are numbered from 1.
std::vector<AdaptRecord> adapt_loop(const Problem& p, const AdaptConfig& cfg);

/// CSV with header iter,ndof,eta,err_u,err_Rm,effectivity.
void write_adapt_csv(std::ostream& out, const std::vector<AdaptRecord>& records);

}  // namespace smoothsc
