#include "smoothsc/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "smoothsc/error_norms.hpp"

namespace smoothsc {

Estimate estimate(const DofMap& fine, const Vector<double>& iota_uh, const Vector<double>& rm_uh) {
  if (iota_uh.size() != fine.num_free() || rm_uh.size() != fine.num_free())
    throw DimensionError("estimate: vectors do not match the enriched space");
  Vector<double> d = rm_uh;
  axpy(-1.0, iota_uh, d);
  Estimate est;
  est.cell = cell_h1_seminorms(fine, d);
  double s = 0.0;
  for (double e : est.cell) s += e * e;
  est.eta = std::sqrt(s);
  return est;
}

std::vector<int> dorfler_mark(std::span<const double> indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("dorfler_mark: theta must lie in (0, 1]");
  double total = 0.0;
  for (double e : indicators) {
    if (!(e >= 0.0)) throw std::invalid_argument("dorfler_mark: indicators must be nonnegative");
    total += e * e;
  }
  if (total == 0.0) return {};
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return indicators[a] > indicators[b]; });
  const double goal = theta * theta * total;
  std::vector<int> marked;
  double sum = 0.0;
  for (int c : order) {
    if (indicators[c] == 0.0) break;
    marked.push_back(c);
    sum += indicators[c] * indicators[c];
    // Relative slack guards theta = 1 against summation-order rounding.
    if (sum >= goal * (1.0 - 1e-14)) break;
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

std::vector<AdaptRecord> adapt_loop(const Problem& p, const AdaptConfig& cfg) {
  if (p.dim != 2 || p.family != Family::lagrange || p.complex)
    throw std::invalid_argument("adapt_loop: needs a 2D real Lagrange problem");
  if (p.k != cfg.k) throw std::invalid_argument("adapt_loop: problem degree differs from the config");
  if (cfg.max_iters < 1 || cfg.m < 0) throw std::invalid_argument("adapt_loop: max_iters >= 1 and m >= 0 required");
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) throw std::invalid_argument("adapt_loop: theta must lie in (0, 1]");
  auto mesh = std::make_shared<const Mesh>(generate_structured(p.domain, cfg.initial_level));
  std::vector<AdaptRecord> out;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const LevelSystem<double> L = build_level<double>(p, mesh);
    const Smoother<double> S(SmootherSpec::point(cfg.smoother), L.A_fine);
    const Vector<double> u0 = apply_real(L.iota, L.u_h);
    const Vector<double> rm = smooth_postprocess(L.u_h, {cfg.method, cfg.m}, L.A_fine, L.f_fine, L.iota, S);
    const Estimate est = estimate(*L.fine, u0, rm);
    AdaptRecord rec;
    rec.iter = it;
    rec.ndof = L.coarse->num_free();
    rec.eta = est.eta;
    rec.err_u = L.error_coarse();
    rec.err_rm = L.error_fine(rm);
    rec.effectivity = rec.err_u > 0.0 ? rec.eta / rec.err_u : 0.0;
    out.push_back(rec);
    if (it == cfg.max_iters) break;
    const std::vector<int> marked = dorfler_mark(est.cell, cfg.theta);
    if (marked.empty()) break;
    mesh = std::make_shared<const Mesh>(bisect(*mesh, marked));
  }
  return out;
}

void write_adapt_csv(std::ostream& out, const std::vector<AdaptRecord>& records) {
  out << "iter,ndof,eta,err_u,err_Rm,effectivity\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%zu,%.5e,%.5e,%.5e,%.5f\n", r.iter, r.ndof, r.eta, r.err_u, r.err_rm,
                  r.effectivity);
    out << buf;
  }
}

}  // namespace smoothsc
