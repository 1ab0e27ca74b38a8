#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Seeded ensemble runner and band calibration. Every sim is a pure function
// of (config, base seed, sim index), so results are identical across runs
// and worker counts.
namespace spherestats::mc {

struct ScenarioConfig {
  int lmax = 32;
  std::string cl_source = "power-law";  // "power-law" or a CL v1 file path
  double fnl = 0.0;
  double fnl_scale = 3e-3;   // converts survey-convention fnl to unit-variance fields
  int channels = 0;          // 0 = statistic sees the signal alm directly
  double noise_level = 0.0;  // flat C^N on l >= 2, same for every channel
  double declared_factor = 1.0;  // declared noise = factor * true (hausman)
  std::string mask = "none";     // "none" or "band:<b0 radians>"
  std::string statistic = "estimate-cl";
  // statistic parameters
  int L = 0;          // 0 = lmax
  int K = 4;          // squeezed offsets (j1)
  int l1_base = 2;    // squeezed base degree (j1)
  double B = 2.0;     // needlet bandwidth
  int j = 3;          // needlet scale (gamma)
  double R = 0.1;     // wavelet scale, radians (smhw-skew)
  int n_sims = 100;
  std::uint64_t seed = 1;
  std::uint64_t sim_offset = 0;  // first sim index, for held-out ensembles
  double level = 0.68;

  // flat key=value lines, '#' comments; unknown keys rejected
  static ScenarioConfig parse_file(const std::string& path);
  static ScenarioConfig parse_text(const std::string& text);
};

// Supported statistics: estimate-cl (curve over l), hausman (curve H_l),
// bl (scalar B_L(1)), gamma (scalar needlet power), j1, j2 (scalar
// integrated bispectra at r=1), smhw-skew (scalar skewness).
struct EnsembleResult {
  std::vector<double> grid;               // x-coordinate per point (l, or 0 for scalars)
  std::vector<std::vector<double>> sims;  // n_sims rows, one value per grid point
  std::vector<double> mean;
  std::vector<double> variance;
};

EnsembleResult run_ensemble(const ScenarioConfig& config, int workers);

struct Bands {
  double level = 0.0;
  std::vector<double> lo;
  std::vector<double> hi;
};

// Empirical symmetric quantile bands at (1-level)/2 and 1-(1-level)/2.
Bands calibrate_bands(const EnsembleResult& result, double level);

struct PowerPoint {
  double fnl = 0.0;
  double detection_fraction = 0.0;
};

// Null bands from an fnl = 0 ensemble (sim indices 0..N-1), then per fnl the
// fraction of held-out sims (indices N..2N-1) falling outside the bands.
// Scalar statistics only.
std::vector<PowerPoint> power_curve(const ScenarioConfig& config,
                                    const std::vector<double>& fnl_grid, int workers);

}  // namespace spherestats::mc
