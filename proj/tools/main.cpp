#include <iostream>

#include "CLI11.hpp"
#include "ader/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"linear ADER-DG space-time predictor kernels: correctness checks, convergence "
               "studies, footprint reports and wall-time benchmarks"};
  app.require_subcommand(1);

  ader::HarnessOptions opt;

  auto add_common = [&](CLI::App* cmd, const char* default_pde = "elastic") {
    cmd->add_option("--order,-N", opt.orders, "orders to run (repeatable)");
    cmd->add_option("--quantities,-m", opt.quantities, "quantity count (0 = pde default)");
    cmd->add_option("--pde", opt.pde, "advection | ncp-advection | demo | elastic")
        ->default_val(default_pde);
    cmd->add_option("--variant", opt.variant, "generic | log | splitck | aosoa | all")
        ->default_val("all");
    cmd->add_option("--vec-width", opt.vec_width, "SIMD lanes in doubles")->default_val(8);
    cmd->add_option("--seed", opt.seed, "PRNG seed for randomized inputs")->default_val(0);
    cmd->add_option("--csv-out", opt.csv_out, "write CSV here instead of stdout");
    cmd->add_option("--workers", opt.workers, "element-parallel workers")->default_val(1);
  };

  CLI::App* check = app.add_subcommand("check", "run the full invariant suites");
  add_common(check);
  check->add_option("--inject-fault", opt.inject_fault, "corrupt an operator (dmatrix)");

  CLI::App* conv = app.add_subcommand("convergence", "advection convergence study on e=3 vs e=9");
  add_common(conv, "advection");
  conv->add_option("--dump-final", opt.dump_final, "write the final fine-mesh field to a file");

  CLI::App* bench = app.add_subcommand("bench", "time repeated predictor calls per variant");
  add_common(bench);
  bench->add_flag("--assert-speedup", opt.assert_speedup,
                  "fail when the directional timing claims do not hold");
  bench->add_option("--elements", opt.elements, "distinct input elements cycled")->default_val(4);
  bench->add_option("--reps", opt.reps, "repetitions per record (median)")->default_val(7);
  bench->add_option("--calls", opt.calls, "predictor calls per repetition (0 = auto)")
      ->default_val(0);

  CLI::App* foot = app.add_subcommand("footprint", "scratch bytes per variant and order");
  add_common(foot);
  foot->add_option("--cache-kib", opt.cache_kib, "threshold in KiB (inf disables flags)")
      ->default_val(1024.0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) return ader::cmd_check(opt);
    if (conv->parsed()) return ader::cmd_convergence(opt);
    if (bench->parsed()) return ader::cmd_bench(opt);
    if (foot->parsed()) return ader::cmd_footprint(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
