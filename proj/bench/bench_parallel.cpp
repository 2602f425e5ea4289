// Compares the OpenMP kernels against their serial reference
// implementations: the replica spin-model sum and the Monte Carlo trial
// loop.

#include <chrono>
#include <cstdio>

#include "rtnlab/replica.hpp"
#include "rtnlab/rtn.hpp"
#include "rtnlab/state.hpp"

using namespace rtnlab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main() {
  // replica oracle: 4 bulk vertices, k = 4 -> 24^4 = 331776 configurations
  TNGraph chain({{"a", true},
                 {"u", false},
                 {"v", false},
                 {"w", false},
                 {"z", false},
                 {"b", true}},
                {{"a", "u", 6, Spectrum::flat(6)},
                 {"u", "v", 6, Spectrum::flat(6)},
                 {"v", "w", 6, Spectrum::flat(6)},
                 {"w", "z", 6, Spectrum::flat(6)},
                 {"z", "b", 6, Spectrum::flat(6)}});
  auto a = chain.boundary_subset({"a"});
  const Permutation tau = Permutation::full_cycle(4);

  auto t0 = Clock::now();
  double serial = 0.0;
  for (int rep = 0; rep < 5; ++rep) serial = replica_expectation_serial(chain, a, 4, tau);
  double t_serial = seconds_since(t0) / 5;

  t0 = Clock::now();
  double parallel = 0.0;
  for (int rep = 0; rep < 5; ++rep) parallel = replica_expectation(chain, a, 4, tau);
  double t_parallel = seconds_since(t0) / 5;

  std::printf("replica oracle (k=4, 4 bulk): serial %.4fs, openmp %.4fs, speedup %.2fx, values %.12g / %.12g\n",
              t_serial, t_parallel, t_serial / t_parallel, serial, parallel);

  // Monte Carlo trial loop: Wishart-style single tensor
  TNGraph wishart({{"a", true}, {"x", false}, {"b", true}},
                  {{"a", "x", 128, Spectrum::flat(128)}, {"x", "b", 128, Spectrum::flat(128)}});
  auto wa = wishart.boundary_subset({"a"});
  auto labels = boundary_labels(wishart, wa);
  auto trial = [&](long, TrialRng rng) {
    PureState s = build_rtn_state(wishart, rng);
    DensityMatrix rho = reduced_density(s, labels);
    return (rho.matrix() * rho.matrix()).trace().real();
  };
  const long trials = 40;

  t0 = Clock::now();
  auto r_serial = run_trials_serial(trials, 5, trial);
  double mc_serial = seconds_since(t0);

  t0 = Clock::now();
  auto r_parallel = run_trials(trials, 5, 0, trial);
  double mc_parallel = seconds_since(t0);

  bool identical = r_serial == r_parallel;
  std::printf("monte carlo (%ld wishart trials): serial %.3fs, openmp %.3fs, speedup %.2fx, identical %s\n",
              trials, mc_serial, mc_parallel, mc_serial / mc_parallel, identical ? "yes" : "no");
  return identical ? 0 : 1;
}
