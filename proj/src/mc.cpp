#include "spherestats/mc.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "spherestats/bispectrum.hpp"
#include "spherestats/curvature.hpp"
#include "spherestats/field_sim.hpp"
#include "spherestats/io.hpp"
#include "spherestats/needlets.hpp"
#include "spherestats/rng.hpp"
#include "spherestats/smhw.hpp"
#include "spherestats/spectra.hpp"
#include "spherestats/stats.hpp"

namespace spherestats::mc {

namespace {

// immutable per-ensemble context shared by all workers
struct Context {
  ScenarioConfig cfg;
  PowerSpectrum cl;
  std::vector<PowerSpectrum> noise;
  std::vector<PowerSpectrum> declared;
  std::shared_ptr<const SphereGrid> grid;
  Mask mask_spec = Mask::band(0.0);
  bool masked = false;
  NeedletFrame frame;       // gamma only
  SmhwKernel kernel;        // smhw-skew only
  int eff_L = 0;
  std::vector<double> grid_axis;
};

Mask parse_mask(const std::string& s, bool* enabled) {
  *enabled = false;
  if (s == "none" || s.empty()) return Mask::band(0.0);
  if (s.rfind("band:", 0) == 0) {
    *enabled = true;
    return Mask::band(std::stod(s.substr(5)));
  }
  throw std::invalid_argument("mc: unknown mask spec '" + s + "'");
}

Context build_context(const ScenarioConfig& cfg) {
  if (cfg.n_sims < 2) throw std::invalid_argument("mc: n_sims must be at least 2");
  Context ctx;
  ctx.cfg = cfg;
  ctx.cl = (cfg.cl_source == "power-law") ? PowerSpectrum::power_law(cfg.lmax)
                                          : io::read_cl(cfg.cl_source);
  if (ctx.cl.lmax < cfg.lmax) throw std::invalid_argument("mc: spectrum file lmax too small");
  if (ctx.cl.lmax > cfg.lmax) {
    ctx.cl.cl.resize(cfg.lmax + 1);
    ctx.cl.lmax = cfg.lmax;
  }
  for (int i = 0; i < cfg.channels; ++i) {
    ctx.noise.push_back(PowerSpectrum::flat(cfg.lmax, cfg.noise_level));
    ctx.declared.push_back(PowerSpectrum::flat(cfg.lmax, cfg.declared_factor * cfg.noise_level));
  }
  ctx.mask_spec = parse_mask(cfg.mask, &ctx.masked);
  ctx.eff_L = cfg.L > 0 ? cfg.L : cfg.lmax;

  const std::string& st = cfg.statistic;
  const bool needs_grid = cfg.fnl != 0.0 || ctx.masked || st == "smhw-skew";
  if (needs_grid) ctx.grid = build_grid(cfg.lmax);
  if (st == "gamma") ctx.frame = build_frame(cfg.B, cfg.lmax);
  if (st == "smhw-skew") ctx.kernel = smhw_kernel(cfg.R, ctx.grid);

  if (st == "estimate-cl" || st == "hausman") {
    for (int l = kSpectrumLmin; l <= cfg.lmax; ++l) ctx.grid_axis.push_back(l);
  } else if (st == "bl" || st == "gamma" || st == "j1" || st == "j2" || st == "smhw-skew") {
    ctx.grid_axis.push_back(0.0);
  } else {
    throw std::invalid_argument("mc: unknown statistic '" + st + "'");
  }
  if ((st == "hausman" || st == "bl") && cfg.channels < 2)
    throw std::invalid_argument("mc: statistic '" + st + "' needs channels >= 2");
  return ctx;
}

std::vector<double> run_one(const Context& ctx, std::uint64_t sim_index) {
  const ScenarioConfig& cfg = ctx.cfg;
  const std::uint64_t seed = rng::derive(cfg.seed, cfg.sim_offset + sim_index);
  Alm alm = sample_gaussian_alm(ctx.cl, seed);
  if (cfg.fnl != 0.0) alm = apply_fnl_alm(alm, cfg.fnl * cfg.fnl_scale, ctx.cl, ctx.grid);

  const std::string& st = cfg.statistic;
  if (st == "estimate-cl") {
    SpectrumEstimate est;
    if (cfg.channels > 0) {
      ChannelSet ch = add_noise_channels(alm, ctx.noise, seed);
      ch.noise_spectra = ctx.declared;
      est = auto_power(ch);
    } else if (ctx.masked) {
      SphereMap map = apply_mask(synthesize(alm, ctx.grid), ctx.mask_spec);
      est = estimate_cl(masked_alm(map, cfg.lmax));
    } else {
      est = estimate_cl(alm);
    }
    return std::vector<double>(est.chat.begin() + kSpectrumLmin, est.chat.end());
  }
  if (st == "hausman" || st == "bl") {
    ChannelSet ch = add_noise_channels(alm, ctx.noise, seed);
    const HausmanSeries h = hausman_statistic(ch, ctx.declared);
    if (st == "hausman") return h.h;
    return {brownian_functional(h, ctx.eff_L).b.back()};
  }
  if (st == "gamma") return {needlet_power(alm, ctx.frame, cfg.j, ctx.cl).gamma_hat};
  if (st == "j1") return {integrated_J1(alm, ctx.eff_L, cfg.K, cfg.l1_base).series.back()};
  if (st == "j2") return {integrated_J2(alm, ctx.eff_L).series.back()};
  if (st == "smhw-skew") return {smhw_moments(smhw_transform(alm, ctx.kernel)).skewness};
  throw std::logic_error("mc: unhandled statistic");
}

EnsembleResult run_context(const Context& ctx, int workers) {
  const int n = ctx.cfg.n_sims;
  EnsembleResult result;
  result.grid = ctx.grid_axis;
  result.sims.resize(n);

  if (workers < 1) workers = 1;
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mu;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        result.sims[i] = run_one(ctx, static_cast<std::uint64_t>(i));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        failed.store(true);
        if (error.empty()) error = "sim " + std::to_string(i) + ": " + e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(workers, n); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failed.load()) throw std::runtime_error("mc: " + error);

  const std::size_t g = result.grid.size();
  result.mean.assign(g, 0.0);
  result.variance.assign(g, 0.0);
  for (const auto& row : result.sims)
    for (std::size_t k = 0; k < g; ++k) result.mean[k] += row[k] / n;
  for (const auto& row : result.sims)
    for (std::size_t k = 0; k < g; ++k) {
      const double d = row[k] - result.mean[k];
      result.variance[k] += d * d / (n - 1);
    }
  return result;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "lmax") cfg.lmax = std::stoi(val);
      else if (key == "cl") cfg.cl_source = val;
      else if (key == "fnl") cfg.fnl = std::stod(val);
      else if (key == "fnl_scale") cfg.fnl_scale = std::stod(val);
      else if (key == "channels") cfg.channels = std::stoi(val);
      else if (key == "noise_level") cfg.noise_level = std::stod(val);
      else if (key == "declared_factor") cfg.declared_factor = std::stod(val);
      else if (key == "mask") cfg.mask = val;
      else if (key == "statistic") cfg.statistic = val;
      else if (key == "L") cfg.L = std::stoi(val);
      else if (key == "K") cfg.K = std::stoi(val);
      else if (key == "l1_base") cfg.l1_base = std::stoi(val);
      else if (key == "B") cfg.B = std::stod(val);
      else if (key == "j") cfg.j = std::stoi(val);
      else if (key == "R") cfg.R = std::stod(val);
      else if (key == "n_sims") cfg.n_sims = std::stoi(val);
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "level") cfg.level = std::stod(val);
      else throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file unreadable: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

EnsembleResult run_ensemble(const ScenarioConfig& config, int workers) {
  return run_context(build_context(config), workers);
}

Bands calibrate_bands(const EnsembleResult& result, double level) {
  const int n = static_cast<int>(result.sims.size());
  if (n < 30) throw std::invalid_argument("calibrate_bands: need at least 30 sims");
  if (level < 0.0 || level >= 1.0) throw std::invalid_argument("calibrate_bands: bad level");
  Bands bands;
  bands.level = level;
  const std::size_t g = result.grid.size();
  std::vector<double> col(n);
  for (std::size_t k = 0; k < g; ++k) {
    for (int i = 0; i < n; ++i) col[i] = result.sims[i][k];
    bands.lo.push_back(stats::quantile(col, 0.5 * (1.0 - level)));
    bands.hi.push_back(stats::quantile(col, 1.0 - 0.5 * (1.0 - level)));
  }
  return bands;
}

std::vector<PowerPoint> power_curve(const ScenarioConfig& config,
                                    const std::vector<double>& fnl_grid, int workers) {
  ScenarioConfig null_cfg = config;
  null_cfg.fnl = 0.0;
  null_cfg.sim_offset = 0;
  const EnsembleResult null_result = run_ensemble(null_cfg, workers);
  if (null_result.grid.size() != 1)
    throw std::invalid_argument("power_curve: scalar statistics only");
  const Bands bands = calibrate_bands(null_result, config.level);

  std::vector<PowerPoint> points;
  for (const double fnl : fnl_grid) {
    ScenarioConfig alt = config;
    alt.fnl = fnl;
    alt.sim_offset = static_cast<std::uint64_t>(config.n_sims);  // held out from calibration
    const EnsembleResult res = run_ensemble(alt, workers);
    int outside = 0;
    for (const auto& row : res.sims)
      if (row[0] < bands.lo[0] || row[0] > bands.hi[0]) ++outside;
    points.push_back({fnl, static_cast<double>(outside) / res.sims.size()});
  }
  return points;
}

}  // namespace spherestats::mc
