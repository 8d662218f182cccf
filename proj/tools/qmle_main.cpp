// Command-line front end: dataset generation, single solver runs, and the
// benchmark harness. Exit codes: 0 success, 1 usage error, 2 runtime/solver
// error, 3 I/O error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qmle/qmle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

std::string solver_list() {
  std::string out;
  for (const std::string& name : qmle::solver_names()) {
    if (!out.empty()) {
      out += ", ";
    }
    out += name;
  }
  return out;
}

int run_generate(int qubits, std::uint64_t shots, std::uint64_t seed, const std::string& out_path,
                 bool exhaustive) {
  const qmle::PureState target = qmle::w_state(qubits);
  qmle::DatasetFile file;
  file.qubits = qubits;
  file.seed = seed;
  file.state = "W";
  file.records = qmle::sample_shots(qmle::DensityMatrix::pure(target.amplitudes()), shots, seed,
                                    exhaustive ? qmle::PauliSampling::kExhaustiveCycle
                                               : qmle::PauliSampling::kUniformRandom);
  qmle::write_dataset(out_path, file);
  std::cout << "wrote " << out_path << " (q=" << qubits << ", n=" << shots
            << ", records=" << file.records.size() << ")\n";
  return kExitOk;
}

int run_solve(const std::string& solver, const std::string& data_path, int epochs,
              std::uint64_t seed, std::optional<double> eta, double eps,
              const std::optional<std::string>& out_path) {
  if (!qmle::is_known_solver(solver)) {
    std::cerr << "unknown solver '" << solver << "' (valid: " << solver_list() << ")\n";
    return kExitUsage;
  }
  const qmle::DatasetFile file = qmle::read_dataset_file(data_path);
  const qmle::ShotDataset data = qmle::to_shot_dataset(file);
  const std::optional<qmle::PureState> target = qmle::true_state(file);

  std::vector<qmle::MetricsRow> rows =
      qmle::run_solver_metrics(solver, data, epochs, seed, eta, eps, target);

  // solve is the reproducibility entry point: all printed and written values
  // are deterministic functions of the arguments. Wall time is not, so the
  // elapsed column is reported as 0 here; timing belongs to `bench`.
  double run_min = rows.front().f_value;
  for (const qmle::MetricsRow& row : rows) {
    run_min = std::min(run_min, row.f_value);
  }
  for (qmle::MetricsRow& row : rows) {
    row.approx_opt_error = row.f_value - run_min;
    row.elapsed_seconds = 0.0;
  }

  const qmle::MetricsRow& final_row = rows.back();
  std::cout << "solver: " << solver << '\n';
  std::cout << "epochs: " << epochs << '\n';
  std::cout << "final_f: " << qmle::detail::format_significant(final_row.f_value) << '\n';
  std::cout << "fidelity: "
            << (final_row.fidelity ? qmle::detail::format_significant(*final_row.fidelity)
                                   : std::string("n/a"))
            << '\n';
  if (out_path) {
    qmle::write_results_csv(*out_path, rows);
  }
  return kExitOk;
}

int run_bench(const std::string& config_path, std::optional<std::string> out_path) {
  qmle::ExperimentConfig config = qmle::load_experiment_config(config_path);
  if (out_path) {
    config.out = *out_path;
  }
  if (!config.out) {
    std::cerr << "bench: no output path (give --out or set \"out\" in the config)\n";
    return kExitUsage;
  }
  const qmle::ExperimentResult result = qmle::run_experiment(config);
  qmle::write_results_csv(*config.out, result.rows);
  std::cout << "f_star: " << qmle::detail::format_significant(result.f_star) << '\n';
  std::cout << "rows: " << result.rows.size() << '\n';
  std::cout << "wrote " << *config.out << '\n';
  for (const qmle::RunFailure& failure : result.failures) {
    std::cerr << "run failed: solver=" << failure.solver << " seed=" << failure.seed << ": "
              << failure.message << '\n';
  }
  return result.failures.empty() ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-likelihood quantum state estimation benchmark"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a synthetic W-state dataset");
  int gen_qubits = 1;
  std::uint64_t gen_shots = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  bool gen_exhaustive = false;
  generate->add_option("--qubits", gen_qubits, "Number of qubits")->required();
  generate->add_option("--shots", gen_shots, "Total number of shots")->required();
  generate->add_option("--seed", gen_seed, "Generator seed")->required();
  generate->add_option("--out", gen_out, "Output dataset path")->required();
  generate->add_flag("--exhaustive", gen_exhaustive,
                     "Cycle through Pauli settings instead of sampling uniformly");

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver on one dataset");
  std::string solve_solver;
  std::string solve_data;
  int solve_epochs = 1;
  std::uint64_t solve_seed = 0;
  double solve_eta = 0.0;
  double solve_eps = 1e-9;
  std::string solve_out;
  solve->add_option("--solver", solve_solver, "Solver name (" + solver_list() + ")")->required();
  solve->add_option("--data", solve_data, "Dataset file")->required();
  solve->add_option("--epochs", solve_epochs, "Number of epochs")->required();
  solve->add_option("--seed", solve_seed, "Solver seed")->required();
  auto* eta_opt = solve->add_option("--eta", solve_eta, "Step size override");
  solve->add_option("--eps", solve_eps, "Newton decrement tolerance");
  auto* solve_out_opt = solve->add_option("--out", solve_out, "Write per-iterate metrics CSV");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a full experiment from a config file");
  std::string bench_config;
  std::string bench_out;
  bench->add_option("--config", bench_config, "Experiment config (JSON)")->required();
  auto* bench_out_opt = bench->add_option("--out", bench_out, "Results CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      return run_generate(gen_qubits, gen_shots, gen_seed, gen_out, gen_exhaustive);
    }
    if (solve->parsed()) {
      return run_solve(solve_solver, solve_data, solve_epochs, solve_seed,
                       eta_opt->count() > 0 ? std::optional<double>(solve_eta) : std::nullopt,
                       solve_eps,
                       solve_out_opt->count() > 0 ? std::optional<std::string>(solve_out)
                                                  : std::nullopt);
    }
    return run_bench(bench_config, bench_out_opt->count() > 0
                                       ? std::optional<std::string>(bench_out)
                                       : std::nullopt);
  } catch (const qmle::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qmle::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const qmle::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
