#include "smoothsc/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "smoothsc/config.hpp"

namespace smoothsc {

namespace {

// Raised for bad option values so they map to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto usage(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct Common {
  std::string case_name = "poisson_hex";
  std::string pair = "P1P2";
  std::string smoother = "cg";
  std::string method;
  double gamma = 0.0;
  double kappa = std::numbers::pi;
  double omega = 2.0 / 3.0;
  std::string mesh_files;
};

void add_common(CLI::App* sub, Common& c, bool with_method) {
  sub->add_option("--case", c.case_name, "case id")->capture_default_str();
  sub->add_option("--pair", c.pair, "degree pair, e.g. P1P2 or Nd1Nd2")->capture_default_str();
  sub->add_option("--smoother", c.smoother, "smoother kind or alias (cg, jcg, dj, gs, sgs, bj, block_gs, hx)")
      ->capture_default_str();
  if (with_method) sub->add_option("--method", c.method, "fp, pcg or gmres (default: from the smoother)");
  sub->add_option("--gamma", c.gamma, "DG/CIP penalty (0: default of the pair)");
  sub->add_option("--kappa", c.kappa, "Helmholtz wave number")->capture_default_str();
  sub->add_option("--omega", c.omega, "damped Jacobi factor")->capture_default_str();
  sub->add_option("--mesh-files", c.mesh_files, "comma separated .msh files, one per level (Gmsh cases)");
}

ExperimentConfig to_experiment(const Common& c, int level_min, int level_max) {
  return usage([&] {
    ExperimentConfig e;
    e.id = parse_case(c.case_name);
    e.k = parse_pair(c.pair);
    e.smoother = c.smoother;
    if (!c.method.empty()) e.method = parse_method(c.method);
    e.level_min = level_min;
    e.level_max = level_max;
    e.params.gamma = c.gamma;
    e.params.kappa = c.kappa;
    e.params.omega = c.omega;
    if (!c.mesh_files.empty()) {
      e.params.mesh_files.assign(level_min, std::string());
      std::stringstream ss(c.mesh_files);
      for (std::string f; std::getline(ss, f, ',');) e.params.mesh_files.push_back(f);
      if (static_cast<int>(e.params.mesh_files.size()) != level_max + 1)
        throw std::invalid_argument("--mesh-files needs one file per level");
    }
    resolve_smoother(e.smoother, e.params.omega);
    return e;
  });
}

// Writes to `path`, or to `out` when path is empty.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(f);
}

int report_table(const ConvergenceTable& t, std::ostream& err, bool verbose) {
  int failed = 0;
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    if (t.failed(i)) {
      err << "level " << t.levels[i] << " failed: " << t.failures[i] << '\n';
      ++failed;
    } else if (verbose) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "level %d: %zu dofs, %.2f s\n", t.levels[i], t.ndofs[i], t.seconds[i]);
      err << buf;
    }
  }
  return failed ? 1 : 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Smoothing-based superconvergent postprocessing of finite element solutions"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  std::string dump_dir;
  bool verbose = false;
  app.add_option("--seed", seed, "seed for randomized diagnostics")->capture_default_str();
  app.add_option("--dump-matrix", dump_dir, "write both system matrices of every level to DIR (Matrix Market)");
  app.add_flag("-v,--verbose", verbose, "per-level timing on stderr");

  auto* run = app.add_subcommand("run", "run every section of a config file");
  std::string config_path, out_dir;
  run->add_option("--config", config_path, "config file")->required();
  run->fallthrough();

  auto* table = app.add_subcommand("table", "convergence table of one case");
  Common tc;
  std::string ms = "0,1,2,3", levels = "1..4", table_out;
  add_common(table, tc, true);
  table->add_option("--m", ms, "comma separated step counts")->capture_default_str();
  table->add_option("--levels", levels, "level range a..b")->capture_default_str();
  table->add_option("--out", table_out, "CSV file (default stdout)");
  table->fallthrough();

  auto* decay = app.add_subcommand("decay", "energy smoothing-error decay over k = 0..steps");
  Common dc;
  dc.case_name = "poisson_square_threeline";
  dc.smoother = "gs";
  int decay_level = 4, steps = 20;
  std::string decay_out;
  add_common(decay, dc, true);
  decay->add_option("--level", decay_level, "refinement level")->capture_default_str();
  decay->add_option("--steps", steps, "largest k")->capture_default_str();
  decay->add_option("--out", decay_out, "CSV file (default stdout)");
  decay->fallthrough();

  auto* adapt = app.add_subcommand("adapt", "adaptive loop on the L-shape driven by |R_m u_h - u_h|");
  AdaptConfig ac;
  std::string adapt_pair = "P1P2", adapt_smoother = "cg", adapt_out;
  adapt->add_option("--pair", adapt_pair, "degree pair")->capture_default_str();
  adapt->add_option("--smoother", adapt_smoother, "smoother kind or alias")->capture_default_str();
  adapt->add_option("--m", ac.m, "smoothing steps")->capture_default_str();
  adapt->add_option("--theta", ac.theta, "Dorfler threshold")->capture_default_str();
  adapt->add_option("--iters", ac.max_iters, "adaptive iterations")->capture_default_str();
  adapt->add_option("--initial-level", ac.initial_level, "uniform refinements of the initial mesh")
      ->capture_default_str();
  adapt->add_option("--out", adapt_out, "CSV file (default stdout)");
  adapt->fallthrough();

  auto* spectrum = app.add_subcommand("spectrum", "power-iteration estimate of lambda_max(S A)");
  Common sc;
  sc.case_name = "poisson_square_threeline";
  sc.smoother = "gs_symmetric";
  int spectrum_level = 4, iters = 50;
  add_common(spectrum, sc, false);
  spectrum->add_option("--level", spectrum_level, "refinement level")->capture_default_str();
  spectrum->add_option("--iters", iters, "power iterations")->capture_default_str();
  spectrum->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << "smoothsc 0.1.0\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*run) {
      std::ifstream in(config_path);
      if (!in) {
        err << "cannot open config file '" << config_path << "'\n";
        return 2;
      }
      std::vector<RunSpec> jobs;
      try {
        const auto base = std::filesystem::path(config_path).parent_path();
        for (const auto& s : parse_config(in)) jobs.push_back(run_spec_from_section(s, base));
      } catch (const std::exception& e) {
        err << e.what() << '\n';
        return 2;
      }
      int status = 0;
      for (auto& job : jobs) {
        if (job.out.empty()) out << "# [" << job.label << "]\n";
        if (job.adaptive) {
          const auto records = adapt_loop(make_problem(CaseId::adaptive_lshape, job.adapt.k), job.adapt);
          emit(job.out, out, [&](std::ostream& o) { write_adapt_csv(o, records); });
        } else {
          if (!dump_dir.empty() && job.experiment.dump_matrix_dir.empty()) job.experiment.dump_matrix_dir = dump_dir;
          const ConvergenceTable t = run_experiment(job.experiment);
          emit(job.out, out, [&](std::ostream& o) { write_csv(o, t); });
          status = std::max(status, report_table(t, err, verbose));
        }
      }
      return status;
    }
    if (*table) {
      const auto [a, b] = usage([&] { return parse_level_range(levels); });
      ExperimentConfig cfg = to_experiment(tc, a, b);
      cfg.ms = usage([&] { return parse_int_list(ms); });
      cfg.dump_matrix_dir = dump_dir;
      const ConvergenceTable t = run_experiment(cfg);
      emit(table_out, out, [&](std::ostream& o) { write_csv(o, t); });
      return report_table(t, err, verbose);
    }
    if (*decay) {
      const ExperimentConfig cfg = to_experiment(dc, decay_level, decay_level);
      const auto curve = run_decay(cfg, decay_level, steps);
      emit(decay_out, out, [&](std::ostream& o) {
        o << "k,ratio\n";
        char buf[64];
        for (std::size_t k = 0; k < curve.size(); ++k) {
          std::snprintf(buf, sizeof buf, "%zu,%.5e\n", k, curve[k]);
          o << buf;
        }
      });
      return 0;
    }
    if (*adapt) {
      const SmootherChoice c = usage([&] { return resolve_smoother(adapt_smoother, 2.0 / 3.0); });
      ac.k = usage([&] { return parse_pair(adapt_pair); });
      ac.smoother = c.kind;
      ac.method = c.method;
      const auto records = usage([&] {
        if (!(ac.theta > 0.0 && ac.theta <= 1.0)) throw std::invalid_argument("--theta must lie in (0, 1]");
        return make_problem(CaseId::adaptive_lshape, ac.k);
      });
      const auto recs = adapt_loop(records, ac);
      emit(adapt_out, out, [&](std::ostream& o) { write_adapt_csv(o, recs); });
      return 0;
    }
    if (*spectrum) {
      const ExperimentConfig cfg = to_experiment(sc, spectrum_level, spectrum_level);
      const SpectrumResult r = run_spectrum(cfg, spectrum_level, iters, seed);
      char buf[160];
      std::snprintf(buf, sizeof buf, "n %zu\nlambda_max %.12f\nwithin_1_plus_1e-8 %s\n", r.n, r.lambda_max,
                    r.lambda_max <= 1.0 + 1e-8 ? "yes" : "no");
      out << buf;
      return 0;
    }
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace smoothsc
