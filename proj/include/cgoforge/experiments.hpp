#pragma once
// Experiment pipelines behind the CLI subcommands. Each returns a RunReport whose
// content depends only on the config and the seed.

#include <cstdint>
#include <functional>
#include <string>

#include "cgoforge/config.hpp"
#include "cgoforge/lame.hpp"
#include "cgoforge/potential.hpp"
#include "cgoforge/report.hpp"

namespace cgoforge {

struct RunOptions {
  bool quick = false;  // see quick_config
  int jobs = 1;
  uint64_t seed = 42;
};

// Smaller grids and sweeps: grid.points <= 16, first 3 taus, first coefficients + 2
// elastic taus, gauge levels 8 and 12 on a 48-point fine grid, first 2 Green levels.
ExperimentConfig quick_config(const ExperimentConfig& c);

Potential make_potential(const ExperimentConfig& c, const Grid& g);
// Pair 1 from lame.lambda1/mu1; pair 2 adds the bump (bump family) or uses lambda2/mu2.
LamePair make_lame_pair(const ExperimentConfig& c, const Grid& g, int which);

RunReport run_transport(const ExperimentConfig& c, const RunOptions& o);
RunReport run_cgo(const ExperimentConfig& c, const RunOptions& o);
RunReport run_dtn_gauge(const ExperimentConfig& c, const RunOptions& o);
RunReport run_elastic_h(const ExperimentConfig& c, const RunOptions& o);
RunReport run_identity(const ExperimentConfig& c, const RunOptions& o);

// Runs fn(0), ..., fn(n-1) on up to `jobs` workers. Results must be stored by index;
// the first failure in index order is rethrown after all workers finish.
void for_each_case(size_t n, int jobs, const std::function<void(size_t)>& fn);

}  // namespace cgoforge
