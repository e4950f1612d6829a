#include "ader/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ader/checks.hpp"
#include "ader/predictor.hpp"
#include "ader/solver.hpp"
#include "ader/util.hpp"

namespace ader {

namespace {

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  return file;
}

std::vector<Variant> selected_variants(const std::string& name) {
  if (name == "all") return {Variant::generic, Variant::log, Variant::splitck,
                             Variant::splitck_aosoa};
  auto v = variant_from_name(name);
  if (!v) throw std::runtime_error("unknown variant: " + name);
  return {*v};
}

}  // namespace

std::pair<std::unique_ptr<LinearPde>, int> make_named_pde(const std::string& name,
                                                          int quantities) {
  const std::array<double, 3> vel{1.0, 0.5, 0.25};
  if (name == "advection") {
    const int m = quantities > 0 ? quantities : 1;
    return {advection_pde(vel, m), m};
  }
  if (name == "ncp-advection") {
    const int m = quantities > 0 ? quantities : 1;
    return {ncp_advection_pde(vel, m), m};
  }
  if (name == "demo") return {paper_demo_pde(), 6};
  if (name == "elastic") return {elastic_pde(2.0, 1.0, 1.0), 9};
  throw std::runtime_error("unknown pde: " + name);
}

int cmd_check(const HarnessOptions& opt) {
  CheckOptions copt;
  if (!opt.orders.empty()) copt.orders = opt.orders;
  copt.pde = opt.pde;
  copt.quantities = make_named_pde(opt.pde, opt.quantities).second;
  copt.vec_width = opt.vec_width;
  copt.seed = opt.seed;
  copt.inject_d_fault = opt.inject_fault == "dmatrix";
  if (!opt.inject_fault.empty() && opt.inject_fault != "dmatrix") {
    std::cerr << "unknown fault: " << opt.inject_fault << "\n";
    return 2;
  }

  const std::vector<CheckResult> results = run_checks(copt);
  int failures = 0;
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "[ ok ] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) std::cout << ": " << r.detail;
    std::cout << "\n";
    if (!r.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all checks passed" : "checks FAILED") << " ("
            << results.size() - failures << "/" << results.size() << ")\n";
  if (!opt.csv_out.empty()) {
    std::ofstream file;
    std::ostream& os = open_sink(opt.csv_out, file);
    os << "check,pass,detail\n";
    for (const CheckResult& r : results)
      os << r.name << ',' << (r.pass ? 1 : 0) << ',' << r.detail << '\n';
  }
  return failures == 0 ? 0 : 1;
}

int cmd_convergence(const HarnessOptions& opt) {
  std::vector<int> orders = opt.orders.empty() ? std::vector<int>{2, 3, 4} : opt.orders;
  const std::string variant_name_ = opt.variant == "all" ? "splitck" : opt.variant;
  const auto variant_opt = variant_from_name(variant_name_);
  if (!variant_opt) {
    std::cerr << "unknown variant: " << opt.variant << "\n";
    return 2;
  }
  const Variant variant = *variant_opt;
  if (opt.pde != "advection" && opt.pde != "ncp-advection") {
    // the study needs an exact transport solution
    std::cerr << "convergence supports --pde advection or ncp-advection\n";
    return 2;
  }
  const int m = opt.quantities > 0 ? opt.quantities : 1;
  const std::array<double, 3> vel{1.0, 0.5, 0.25};
  auto pde = advection_pde(vel, m);
  if (opt.pde == "ncp-advection") pde = ncp_advection_pde(vel, m);

  // smooth periodic profile transported by the exact solution q0(x - v t)
  AnalyticFn exact = [m, vel](double x, double y, double z, double t, double* q) {
    const double twopi = 2.0 * M_PI;
    const double v = std::sin(twopi * (x - vel[0] * t)) + 0.5 * std::sin(twopi * (y - vel[1] * t)) +
                     0.25 * std::sin(twopi * (z - vel[2] * t));
    for (int s = 0; s < m; ++s) q[s] = v;
  };
  const double t_end = 0.4;

  std::ofstream file;
  std::ostream& os = open_sink(opt.csv_out, file);
  os << "order,elements,l2_error,observed_order\n";
  bool any_unstable = false;
  for (int n : orders) {
    SolverConfig cfg;
    cfg.order = n;
    cfg.quantities = m;
    cfg.vec_width = opt.vec_width;
    double errs[2] = {0.0, 0.0};
    bool stable[2] = {true, true};
    const int meshes[2] = {3, 9};
    for (int i = 0; i < 2; ++i) {
      Mesh mesh(meshes[i], cfg);
      const BasisOperators ops = make_basis(n);
      mesh.set_initial(ops, exact);
      RunResult res = run_simulation(*pde, cfg, mesh, t_end, variant, &exact, opt.workers);
      errs[i] = res.l2_error;
      stable[i] = res.stable;
      if (!res.stable) any_unstable = true;
      os << n << ',' << meshes[i] << ','
         << (res.stable ? format_double(res.l2_error) : "unstable") << ',';
      if (i == 1 && stable[0] && stable[1] && errs[1] > 0.0)
        os << format_double(std::log(errs[0] / errs[1]) / std::log(3.0));
      os << '\n';
      if (i == 1 && !opt.dump_final.empty()) {
        std::ofstream dump(opt.dump_final);
        mesh.dump_fields(dump, ops);
      }
    }
  }
  return any_unstable ? 1 : 0;
}

std::vector<BenchRecord> run_bench(const HarnessOptions& opt) {
  std::vector<int> orders = opt.orders.empty() ? std::vector<int>{4, 5, 6, 7, 8, 9} : opt.orders;
  auto [pde, m] = make_named_pde(opt.pde, opt.quantities);
  const std::vector<Variant> variants = selected_variants(opt.variant);
  std::vector<BenchRecord> records;

  for (int n : orders) {
    SolverConfig cfg;
    cfg.order = n;
    cfg.quantities = m;
    cfg.vec_width = opt.vec_width;
    const BasisOperators ops = make_basis(n);
    const LayoutSpec sp = LayoutSpec::aos(n, m, opt.vec_width);
    const double dt = 0.4 / (3.0 * std::max(pde->max_wavespeed(), 1.0) * (2.0 * n - 1.0));

    // a ring of distinct elements so successive calls do not replay one
    // cache-resident input
    const int n_elems = std::max(1, opt.elements);
    std::vector<ElementTensor> inputs;
    SplitMix64 rng(opt.seed * 2654435761ull + n);
    for (int e = 0; e < n_elems; ++e) {
      inputs.emplace_back(sp);
      ElementTensor& t = inputs.back();
      for (int k3 = 0; k3 < n; ++k3)
        for (int k2 = 0; k2 < n; ++k2)
          for (int k1 = 0; k1 < n; ++k1)
            for (int s = 0; s < m; ++s) t.at(k3, k2, k1, s) = rng.next_symmetric();
    }

    // reference output for the correctness column
    PredictorOutput ref(sp);
    {
      ScratchArena arena(Variant::generic, cfg);
      stp_generic(inputs[0], *pde, dt, ops, arena, ref);
    }

    const int calls = opt.calls > 0
                          ? opt.calls
                          : std::max(4, static_cast<int>(4e7 / (flop_count(Variant::log, cfg) + 1)));
    for (Variant v : variants) {
      ScratchArena arena(v, cfg);
      PredictorOutput out(sp);
      predict(v, inputs[0], *pde, dt, ops, arena, out);  // warm-up
      double max_diff = 0.0;
      for (std::size_t i = 0; i < sp.size(); ++i)
        max_diff = std::max(max_diff, std::abs(out.qavg.data()[i] - ref.qavg.data()[i]));

      std::vector<double> rep_seconds;
      for (int rep = 0; rep < std::max(5, opt.reps); ++rep) {
        const auto tic = std::chrono::steady_clock::now();
        for (int c = 0; c < calls; ++c)
          predict(v, inputs[c % n_elems], *pde, dt, ops, arena, out);
        const auto toc = std::chrono::steady_clock::now();
        rep_seconds.push_back(std::chrono::duration<double>(toc - tic).count() / calls);
      }
      std::sort(rep_seconds.begin(), rep_seconds.end());
      const double median = rep_seconds[rep_seconds.size() / 2];

      BenchRecord rec;
      rec.variant = variant_name(v);
      rec.order = n;
      rec.quantities = m;
      rec.elements = n_elems;
      rec.steps = calls;
      rec.wall_seconds = median;
      rec.flop_estimate = flop_count(v, cfg);
      rec.flops_per_second = median > 0.0 ? static_cast<double>(rec.flop_estimate) / median : 0.0;
      rec.scratch_bytes = scratch_bytes(v, cfg);
      rec.max_abs_diff_vs_generic = max_diff;
      records.push_back(rec);
    }
  }
  return records;
}

int cmd_bench(const HarnessOptions& opt) {
  const std::vector<BenchRecord> records = run_bench(opt);

  std::ofstream file;
  std::ostream& os = open_sink(opt.csv_out, file);
  os << "variant,order,quantities,elements,steps,wall_seconds,flop_estimate,flops_per_second,"
        "scratch_bytes,max_abs_diff_vs_generic\n";
  for (const BenchRecord& r : records)
    os << r.variant << ',' << r.order << ',' << r.quantities << ',' << r.elements << ','
       << r.steps << ',' << format_double(r.wall_seconds) << ',' << r.flop_estimate << ','
       << format_double(r.flops_per_second) << ',' << r.scratch_bytes << ','
       << format_double(r.max_abs_diff_vs_generic) << '\n';

  if (!opt.assert_speedup) return 0;
  // directional claims, opt-in because wall time is machine-dependent
  auto median_of = [&](Variant v, int n) -> double {
    for (const BenchRecord& r : records)
      if (r.variant == variant_name(v) && r.order == n) return r.wall_seconds;
    return -1.0;
  };
  bool ok = true;
  for (const BenchRecord& r : records) {
    if (r.order < 8) continue;
    const double t_log = median_of(Variant::log, r.order);
    const double t_split = median_of(Variant::splitck, r.order);
    const double t_aosoa = median_of(Variant::splitck_aosoa, r.order);
    if (t_log > 0 && t_split > 0 && t_split > t_log) {
      std::cerr << "speedup assertion failed: splitck slower than log at N=" << r.order << "\n";
      ok = false;
    }
    if (r.quantities >= 9 && t_split > 0 && t_aosoa > 0 && t_aosoa > t_split) {
      std::cerr << "speedup assertion failed: aosoa slower than splitck at N=" << r.order << "\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}

int cmd_footprint(const HarnessOptions& opt) {
  std::vector<int> orders = opt.orders.empty() ? std::vector<int>{4, 5, 6, 7, 8, 9, 10, 11}
                                               : opt.orders;
  const int m = opt.quantities > 0 ? opt.quantities : make_named_pde(opt.pde, 0).second;
  const double threshold_bytes = opt.cache_kib * 1024.0;

  std::ofstream file;
  std::ostream& os = open_sink(opt.csv_out, file);
  os << "variant,order,quantities,scratch_bytes,exceeds_threshold\n";
  for (Variant v : all_variants) {
    int first_exceed = -1;
    for (int n : orders) {
      SolverConfig cfg;
      cfg.order = n;
      cfg.quantities = m;
      cfg.vec_width = opt.vec_width;
      const std::uint64_t bytes = scratch_bytes(v, cfg);
      const bool exceeds = std::isfinite(threshold_bytes) && bytes > threshold_bytes;
      if (exceeds && first_exceed < 0) first_exceed = n;
      os << variant_name(v) << ',' << n << ',' << m << ',' << bytes << ','
         << (exceeds ? 1 : 0) << '\n';
    }
    if (first_exceed >= 0)
      std::cerr << variant_name(v) << ": scratch first exceeds " << format_double(opt.cache_kib)
                << " KiB at N=" << first_exceed << "\n";
  }
  return 0;
}

}  // namespace ader
