// nrep: build, solve and certify lattice Hamiltonians from the command line.
//
//   nrep counterexample --out cert.json
//   nrep blindness --n 3 --m 3
//   nrep stabilizer --code toric --L 5 --m 4 --threads 4 --out cert.json
//
// NREP_DENSE_MAX_SITES raises the dense-solve site ceiling (default 14).

#include <omp.h>

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nrep/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ground-space certification for lattice Hamiltonians"};
  app.fallthrough();

  std::string model = "compass", task, boundary = "cyclic", out;
  nrep::RunConfig cfg;
  app.add_option("--model,--code", model, "compass | toric | custom");
  app.add_option("--task", task, "pipeline to run when no subcommand is given");
  app.add_option("--n", cfg.compass.n, "compass lattice side");
  app.add_option("--jx", cfg.compass.jx, "XX coupling");
  app.add_option("--jz", cfg.compass.jz, "ZZ coupling");
  app.add_option("--boundary", boundary, "cyclic | open");
  app.add_option("--L", cfg.toric_l, "toric lattice side");
  app.add_option("--file", cfg.custom_file, "JSON descriptor for --model custom");
  app.add_option("--m", cfg.m, "blindness order");
  app.add_option("--tol", cfg.tol, "certification tolerance");
  app.add_option("--threads", cfg.threads, "OpenMP threads (0 = runtime default)");
  app.add_option("--out", out, "write the JSON report here ('-' for stdout)");

  const char* names[] = {"spectrum", "blindness", "kl", "fermion-verify", "stabilizer", "counterexample", "golden"};
  std::vector<CLI::App*> subs;
  for (const char* name : names) subs.push_back(app.add_subcommand(name)->fallthrough());
  subs[0]->add_option("--dump-spectrum", cfg.dump_spectrum, "sorted eigenvalues as JSON");
  subs[0]->add_option("--dump-ground", cfg.dump_ground, "ground basis amplitudes as JSON");
  subs[6]->add_option("--check", cfg.golden_check, "compare against a committed golden file");
  app.require_subcommand(0, 1);

  CLI11_PARSE(app, argc, argv);

  nrep::RunResult result;
  try {
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) task = names[i];
    if (task.empty()) throw nrep::ConfigError("no task given");
    cfg.task = nrep::task_from_string(task);
    cfg.model = nrep::model_from_string(model);
    cfg.compass.boundary = nrep::boundary_from_string(boundary);
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    result = nrep::run(cfg);
  } catch (const std::exception& e) {
    result = {1, {{"error", e.what()}}, std::string("error: ") + e.what()};
  }

  std::cout << result.summary << '\n';
  if (out == "-") {
    std::cout << result.report.dump(2) << '\n';
  } else if (!out.empty()) {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "cannot write " << out << '\n';
      return 1;
    }
    f << result.report.dump(2) << '\n';
  }
  return result.exit_code;
}
