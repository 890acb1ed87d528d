// Compares the OpenMP kernels against the serial reference path on the two
// hot workloads: roof optimization (independent restarts) and inequality
// scans (independent samples). Both paths produce identical results; only
// the wall time differs.

#include <chrono>
#include <cstdio>

#include "qpoly/inequality.hpp"
#include "qpoly/parallel.hpp"
#include "qpoly/roof.hpp"

using namespace qpoly;

namespace {

double time_ms(void (*fn)()) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void roof_workload() {
  Rng rng(42);
  const DensityMatrix rho = random_density(DimVector({2, 2}), 2, rng);
  OptimizerBudget budget;
  budget.restarts = 96;
  budget.refine_steps = 250;
  (void)convex_roof(rho, {0}, PureFunctional::tsallis(2.0), budget);
  (void)concave_roof(rho, {0}, PureFunctional::tsallis(2.0), budget);
}

void scan_workload() {
  ScanConfig cfg;
  cfg.check = "subadd";
  cfg.dims = {2, 2};
  cfg.q_values = {1.0, 1.5, 2.0, 3.0};
  cfg.samples = 250;
  cfg.seed = 7;
  (void)scan(cfg);
}

void ccq_workload() {
  ScanConfig cfg;
  cfg.check = "ccq-general";
  cfg.dims = {2, 2};
  cfg.q_values = {1.0};
  cfg.samples = 200;
  cfg.seed = 11;
  (void)scan(cfg);
}

void report(const char* name, void (*fn)()) {
  par::set_parallel_enabled(false);
  const double serial = time_ms(fn);
  par::set_parallel_enabled(true);
  const double parallel = time_ms(fn);
  std::printf("%-14s serial %9.1f ms   openmp %9.1f ms   speedup %5.2fx\n",
              name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", par::max_threads());
  report("roof", roof_workload);
  report("scan-subadd", scan_workload);
  report("scan-ccq", ccq_workload);
  return 0;
}
