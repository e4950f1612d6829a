#ifndef ADER_HARNESS_HPP
#define ADER_HARNESS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ader/config.hpp"
#include "ader/pde.hpp"

namespace ader {

// Parsed command-line options shared by the subcommands. Exit codes across
// the CLI: 0 pass, 1 violation/failure, 2 usage error.
struct HarnessOptions {
  std::vector<int> orders;       // --order, repeatable; per-command default
  int quantities = 0;            // --quantities, 0 -> pde default
  std::string pde = "elastic";   // --pde
  std::string variant = "all";   // --variant
  int vec_width = 8;             // --vec-width
  std::uint64_t seed = 0;        // --seed
  std::string csv_out;           // --csv-out, empty -> stdout
  bool assert_speedup = false;   // bench: enforce the directional timing claims
  int workers = 1;               // --workers
  double cache_kib = 1024.0;     // footprint: threshold, inf disables flags
  int elements = 4;              // bench: distinct elements cycled through
  int reps = 7;                  // bench: repetitions per record (median)
  int calls = 0;                 // bench: predictor calls per repetition, 0 -> auto
  std::string inject_fault;      // check: "dmatrix" flips a bit in D
  std::string dump_final;        // convergence: write the final field here
};

// PDE factory for the CLI names advection | ncp-advection | demo | elastic.
// Returns the instance and the actual quantity count.
std::pair<std::unique_ptr<LinearPde>, int> make_named_pde(const std::string& name,
                                                          int quantities);

int cmd_check(const HarnessOptions& opt);
int cmd_convergence(const HarnessOptions& opt);
int cmd_bench(const HarnessOptions& opt);
int cmd_footprint(const HarnessOptions& opt);

// One bench CSV row.
struct BenchRecord {
  std::string variant;
  int order = 0;
  int quantities = 0;
  int elements = 0;
  int steps = 0;
  double wall_seconds = 0.0;  // median seconds per predictor call
  std::uint64_t flop_estimate = 0;
  double flops_per_second = 0.0;
  std::uint64_t scratch_bytes = 0;
  double max_abs_diff_vs_generic = 0.0;
};

std::vector<BenchRecord> run_bench(const HarnessOptions& opt);

}  // namespace ader

#endif
