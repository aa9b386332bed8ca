#include "smoothsc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "smoothsc/solvers.hpp"

namespace smoothsc {

SmootherChoice resolve_smoother(const std::string& name, double omega) {
  if (name == "cg") return {SmootherKind::identity, 1.0, Method::pcg};
  if (name == "jcg") return {SmootherKind::jacobi, 1.0, Method::pcg};
  if (name == "dj") return {SmootherKind::jacobi, omega, Method::fixed_point};
  if (name == "gs") return {SmootherKind::gs_forward, 1.0, Method::fixed_point};
  if (name == "sgs") return {SmootherKind::gs_symmetric, 1.0, Method::fixed_point};
  if (name == "bj") return {SmootherKind::block_jacobi, 1.0, Method::pcg};
  if (name == "block_gs" || name == "bgs") return {SmootherKind::block_gs_symmetric, 1.0, Method::fixed_point};
  const SmootherKind kind = parse_smoother_kind(name);
  switch (kind) {
    case SmootherKind::identity:
    case SmootherKind::block_jacobi:
    case SmootherKind::hx: return {kind, 1.0, Method::pcg};
    case SmootherKind::jacobi: return {kind, omega, Method::fixed_point};
    default: return {kind, 1.0, Method::fixed_point};
  }
}

template <class T>
SmootherSpec make_smoother_spec(const SmootherChoice& choice, const Problem& p, const LevelSystem<T>& L) {
  switch (choice.kind) {
    case SmootherKind::jacobi: return SmootherSpec::jacobi(choice.omega);
    case SmootherKind::block_jacobi:
      return SmootherSpec::block_jacobi(std::make_shared<const PatchSet>(build_patches(*L.mesh, *L.fine)),
                                        choice.omega);
    case SmootherKind::block_gs_symmetric:
      return SmootherSpec::block_gs_symmetric(std::make_shared<const PatchSet>(build_patches(*L.mesh, *L.fine)));
    case SmootherKind::hx:
      if constexpr (std::is_same_v<T, double>) {
        if (p.family != Family::nedelec1) throw std::invalid_argument("hx smoother needs a Nedelec case");
        const DofMap lag(L.mesh, SpaceSpec{Family::lagrange, p.k + 1, p.dim, false, false});
        FormSpec fs;
        fs.reaction = 1.0;
        return build_hx(*L.fine, lag, L.A_fine, assemble_matrix(fs, lag));
      } else {
        throw std::invalid_argument("hx smoother is real only");
      }
    default: return SmootherSpec::point(choice.kind);
  }
}

template SmootherSpec make_smoother_spec(const SmootherChoice&, const Problem&, const LevelSystem<double>&);
template SmootherSpec make_smoother_spec(const SmootherChoice&, const Problem&, const LevelSystem<complex>&);

Orders compute_orders(std::span<const double> errors, std::span<const double> scales, int tail) {
  const std::size_t n = errors.size();
  if (n != scales.size()) throw DimensionError("compute_orders: errors and scales differ in length");
  if (n < 2) throw std::invalid_argument("compute_orders: need at least two levels");
  if (tail < 2) throw std::invalid_argument("compute_orders: tail must be at least 2");
  for (std::size_t i = 0; i < n; ++i)
    if (!(errors[i] > 0.0) || !(scales[i] > 0.0))
      throw std::invalid_argument("compute_orders: errors and scales must be positive");
  Orders o;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ds = std::log(scales[i] / scales[i + 1]);
    if (ds == 0.0) throw std::invalid_argument("compute_orders: repeated scale");
    o.steps.push_back(std::log(errors[i] / errors[i + 1]) / ds);
  }
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(tail), n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n - t; i < n; ++i) {
    const double x = std::log(scales[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = static_cast<double>(t) * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("compute_orders: repeated scale");
  o.tail = (static_cast<double>(t) * sxy - sx * sy) / denom;
  return o;
}

namespace {

void dump_matrices(const std::string& dir, const ConvergenceTable& t, int level, const auto& L) {
  std::filesystem::create_directories(dir);
  char name[256];
  for (int fine = 0; fine < 2; ++fine) {
    std::snprintf(name, sizeof name, "%s_P%d_L%d_%s.mtx", t.case_name.c_str(), t.k + fine, level,
                  fine ? "fine" : "coarse");
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write " + std::string(name));
    write_matrix_market(out, fine ? L.A_fine : L.A);
  }
}

template <class T>
std::vector<double> run_level(const ExperimentConfig& cfg, const Problem& p, const SmootherChoice& choice,
                              Method method, const std::shared_ptr<const Mesh>& mesh, ConvergenceTable& t,
                              int level) {
  const LevelSystem<T> L = build_level<T>(p, mesh);
  t.ndofs.back() = L.coarse->num_free();
  if (!cfg.dump_matrix_dir.empty()) dump_matrices(cfg.dump_matrix_dir, t, level, L);
  const Smoother<T> S(make_smoother_spec(choice, p, L), L.A_fine);
  const int mmax = *std::max_element(cfg.ms.begin(), cfg.ms.end());
  const auto seq = smooth_postprocess_sequence(L.u_h, {method, mmax}, L.A_fine, L.f_fine, L.iota, S);
  std::vector<double> row;
  for (int m : cfg.ms) row.push_back(m == 0 ? L.error_coarse() : L.error_fine(seq[m]));
  return row;
}

Method effective_method(const ExperimentConfig& cfg, const Problem& p, const SmootherChoice& choice) {
  Method m = cfg.method.value_or(p.complex ? Method::gmres : choice.method);
  if (m == Method::gmres && !p.complex) throw std::invalid_argument("gmres smoothing is for the Helmholtz case");
  if (m == Method::pcg && p.complex) throw std::invalid_argument("pcg smoothing needs a real symmetric problem");
  return m;
}

}  // namespace

ConvergenceTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.ms.empty()) throw std::invalid_argument("run_experiment: empty m list");
  for (int m : cfg.ms)
    if (m < 0) throw std::invalid_argument("run_experiment: m must be nonnegative");
  if (cfg.level_min < 0 || cfg.level_max < cfg.level_min)
    throw std::invalid_argument("run_experiment: invalid level range");
  if (cfg.id == CaseId::adaptive_lshape)
    throw std::invalid_argument("run_experiment: adaptive_lshape runs through the adapt loop");
  const Problem p = make_problem(cfg.id, cfg.k, cfg.params);
  const SmootherChoice choice = resolve_smoother(cfg.smoother, cfg.params.omega);
  const Method method = effective_method(cfg, p, choice);

  ConvergenceTable t;
  t.case_name = to_string(cfg.id);
  t.smoother = cfg.smoother;
  t.method = to_string(method);
  t.k = cfg.k;
  t.ms = cfg.ms;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    t.levels.push_back(level);
    t.ndofs.push_back(0);
    t.scales.push_back(std::numeric_limits<double>::quiet_NaN());
    std::vector<double> row(cfg.ms.size(), std::numeric_limits<double>::quiet_NaN());
    std::string failure;
    try {
      const auto mesh = problem_mesh(p, level, cfg.params);
      t.scales.back() = problem_h(p, *mesh, level);
      row = p.complex ? run_level<complex>(cfg, p, choice, method, mesh, t, level)
                      : run_level<double>(cfg, p, choice, method, mesh, t, level);
    } catch (const std::exception& e) {
      failure = e.what();
      if (failure.empty()) failure = "unknown error";
    }
    t.errors.push_back(std::move(row));
    t.failures.push_back(std::move(failure));
    t.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  for (std::size_t j = 0; j < cfg.ms.size(); ++j) {
    std::vector<double> e, s;
    for (std::size_t i = 0; i < t.levels.size(); ++i)
      if (!t.failed(i) && t.errors[i][j] > 0.0) {
        e.push_back(t.errors[i][j]);
        s.push_back(t.scales[i]);
      }
    t.orders.push_back(e.size() >= 2 ? std::optional<Orders>(compute_orders(e, s)) : std::nullopt);
  }
  return t;
}

void write_csv(std::ostream& out, const ConvergenceTable& t) {
  char buf[64];
  out << "h";
  for (int m : t.ms) out << ",m" << m;
  out << '\n';
  auto num = [&](double v, const char* fmt) {
    if (std::isnan(v)) return std::string("nan");
    std::snprintf(buf, sizeof buf, fmt, v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    out << num(t.scales[i], "%.5e");
    for (double e : t.errors[i]) out << ',' << num(e, "%.5e");
    out << '\n';
  }
  std::vector<int> good;
  for (std::size_t i = 0; i < t.levels.size(); ++i)
    if (!t.failed(i)) good.push_back(static_cast<int>(i));
  for (std::size_t s = 0; s + 1 < good.size(); ++s) {
    out << "step_L" << t.levels[good[s]] << "_L" << t.levels[good[s + 1]];
    for (const auto& o : t.orders) out << ',' << (o && s < o->steps.size() ? num(o->steps[s], "%.4f") : "nan");
    out << '\n';
  }
  out << "order";
  for (const auto& o : t.orders) out << ',' << (o ? num(o->tail, "%.4f") : "nan");
  out << '\n';
}

namespace {

struct RealSetup {
  Problem p;
  LevelSystem<double> L;
  SmootherChoice choice;
};

RealSetup real_setup(const ExperimentConfig& cfg, int level) {
  Problem p = make_problem(cfg.id, cfg.k, cfg.params);
  if (p.complex) throw std::invalid_argument("this diagnostic needs a real case");
  auto mesh = problem_mesh(p, level, cfg.params);
  LevelSystem<double> L = build_level<double>(p, mesh);
  return {std::move(p), std::move(L), resolve_smoother(cfg.smoother, cfg.params.omega)};
}

}  // namespace

std::vector<double> run_decay(const ExperimentConfig& cfg, int level, int K) {
  if (K < 0) throw std::invalid_argument("run_decay: K must be nonnegative");
  const RealSetup s = real_setup(cfg, level);
  const Method method = cfg.method.value_or(s.choice.method);
  const Smoother<double> S(make_smoother_spec(s.choice, s.p, s.L), s.L.A_fine);
  const Vector<double> reference = exact_solve(s.L.A_fine, s.L.f_fine);
  return smoothing_decay(s.L.A_fine, s.L.f_fine, apply_real(s.L.iota, s.L.u_h), reference, S, method, K);
}

SpectrumResult run_spectrum(const ExperimentConfig& cfg, int level, int iters, std::uint64_t seed) {
  const RealSetup s = real_setup(cfg, level);
  const Smoother<double> S(make_smoother_spec(s.choice, s.p, s.L), s.L.A_fine);
  const LambdaMaxResult r = lambda_max(S, s.L.A_fine, iters, seed);
  return {s.L.A_fine.rows(), r.lambda, r.history};
}

}  // namespace smoothsc
