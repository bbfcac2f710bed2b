#pragma once

#include <vector>

#include "mqpg/detection.hpp"
#include "mqpg/mqpg.hpp"

// Dimensional-scalability study: average FFB mode-sorting error over all
// sortable MUBs as a function of the dimension d and the bandwidth ratio
// R = pump bandwidth / phase-matching width.
//
// Geometry for a cell (d, R): the available pump span R * pm_fwhm is divided
// into 2d-1 bins with spacing D = R * pm_fwhm / (2d-1); input bins and output
// channels inherit the spacing D, and bins are D / separation_factor wide.
// Large d at small R therefore compresses the output comb until the channels
// overlap.

namespace mqpg {

struct SweepConfig {
  std::vector<int> dimensions;  // odd primes
  std::vector<double> ratios;
  double pm_fwhm = 0.03;
  double separation_factor = 3.0;
  PmShape pm_shape = PmShape::Sinc;
  double spectrograph_resolution = 0.0;  // 0 = ideal (per-channel projections)
  int max_grid_points = 16384;
  int threads = 1;
};

struct CellOutcome {
  double error = 1.0;
  bool feasible = false;
};

// Resolved geometry of one sweep cell; exposed so the kernel-based physics
// path can be cross-checked against the sweep's streamlined one.
struct SweepGeometry {
  bool feasible = false;
  double bin_spacing = 0.0;
  double bin_fwhm = 0.0;
  FrequencyGrid in_grid, out_grid, pump_grid;
  DeviceSpec device;
  AlphabetSpec alphabet;
};

SweepGeometry sweep_geometry(int d, double ratio, const SweepConfig& config);

struct SweepCell {
  int dimension = 0;
  double ratio = 0.0;
  double error = 1.0;
  bool feasible = false;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepCell> cells;  // row-major over (dimensions x ratios)
};

// Mean over the d sortable MUBs and their d eigenstates of
// 1 - C[correct(state), state], with C the column-normalized crosstalk
// matrix of the simulated channel probabilities. Geometry that cannot be
// resolved on the capped grid is reported as error 1.0 with feasible=false.
CellOutcome average_error(int d, double ratio, const SweepConfig& config);

SweepResult run_sweep(const SweepConfig& config);

}  // namespace mqpg
