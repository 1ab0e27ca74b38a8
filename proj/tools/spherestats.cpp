#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <sstream>
#include <thread>

#include "spherestats/bispectrum.hpp"
#include "spherestats/curvature.hpp"
#include "spherestats/field_sim.hpp"
#include "spherestats/io.hpp"
#include "spherestats/mc.hpp"
#include "spherestats/needlets.hpp"
#include "spherestats/rng.hpp"
#include "spherestats/smhw.hpp"
#include "spherestats/spectra.hpp"
#include "spherestats/stats.hpp"

namespace ss = spherestats;
using ss::io::format_double;

namespace {

int default_workers() {
  if (const char* env = std::getenv("SPHERESTATS_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

ss::PowerSpectrum load_cl(const std::string& source, int lmax) {
  if (source == "power-law") return ss::PowerSpectrum::power_law(lmax);
  ss::PowerSpectrum cl = ss::io::read_cl(source);
  if (cl.lmax < lmax) throw std::runtime_error("spectrum file covers l <= " +
                                               std::to_string(cl.lmax) + ", need " +
                                               std::to_string(lmax));
  cl.cl.resize(lmax + 1);
  cl.lmax = lmax;
  return cl;
}

ss::Mask parse_mask(const std::string& s) {
  if (s.rfind("band:", 0) == 0) return ss::Mask::band(std::stod(s.substr(5)));
  throw CLI::ValidationError("--mask", "expected band:<radians>");
}

std::string iso_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& fields) {
  std::ostringstream out;
  out << "spherestats-manifest v1\n";
  out << "command " << command << "\n";
  out << "version 1.0.0\n";
  for (const auto& [k, v] : fields) out << k << " " << v << "\n";
  out << "timestamp " << iso_now() << "\n";
  ss::io::write_text(path, out.str());
}

// Gaussian baseline ensemble for density/moment bands: per-sim curves,
// returned row-major
std::vector<std::vector<double>> gaussian_curve_ensemble(
    int n_sims, std::uint64_t seed, const ss::PowerSpectrum& cl,
    const std::function<std::vector<double>(const ss::Alm&)>& statistic) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n_sims; ++i)
    rows.push_back(statistic(ss::sample_gaussian_alm(cl, ss::rng::derive(seed, i))));
  return rows;
}

struct BandSummary {
  std::vector<double> mean, lo, hi;
};

BandSummary summarize(const std::vector<std::vector<double>>& rows, double level) {
  BandSummary s;
  if (rows.empty()) return s;
  const std::size_t g = rows[0].size();
  std::vector<double> col(rows.size());
  for (std::size_t k = 0; k < g; ++k) {
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][k];
    s.mean.push_back(ss::stats::mean(col));
    s.lo.push_back(ss::stats::quantile(col, 0.5 * (1.0 - level)));
    s.hi.push_back(ss::stats::quantile(col, 1.0 - 0.5 * (1.0 - level)));
  }
  return s;
}

int run(int argc, char** argv) {
  CLI::App app{"Statistics toolkit for isotropic random fields on the sphere"};
  app.require_subcommand(1);

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Draw a Gaussian (optionally fNL) field realization");
  int sim_lmax = 32;
  std::string sim_cl = "power-law", sim_out, sim_out_alm, sim_mask;
  std::uint64_t sim_seed = 1;
  double sim_fnl = 0.0, sim_fnl_scale = 3e-3;
  sim->add_option("--lmax", sim_lmax, "band limit")->check(CLI::Range(2, 512));
  sim->add_option("--cl", sim_cl, "spectrum file or 'power-law'")->capture_default_str();
  sim->add_option("--seed", sim_seed, "base seed")->capture_default_str();
  sim->add_option("--fnl", sim_fnl, "quadratic non-Gaussianity amplitude")->capture_default_str();
  sim->add_option("--fnl-scale", sim_fnl_scale, "fnl unit conversion factor")->capture_default_str();
  sim->add_option("--mask", sim_mask, "band:<radians> equatorial mask");
  sim->add_option("--out", sim_out, "output map (SMAP v1)");
  sim->add_option("--out-alm", sim_out_alm, "output coefficients (ALM v1)");
  sim->callback([&] {
    if (sim_out.empty() && sim_out_alm.empty())
      throw CLI::ValidationError("simulate", "need --out and/or --out-alm");
    const ss::PowerSpectrum cl = load_cl(sim_cl, sim_lmax);
    ss::Alm alm = ss::sample_gaussian_alm(cl, sim_seed);
    const auto grid = ss::build_grid(sim_lmax);
    if (sim_fnl != 0.0) alm = ss::apply_fnl_alm(alm, sim_fnl * sim_fnl_scale, cl, grid);
    if (!sim_out_alm.empty()) ss::io::write_alm(sim_out_alm, alm);
    if (!sim_out.empty()) {
      ss::SphereMap map = ss::synthesize(alm, grid);
      if (!sim_mask.empty()) map = ss::apply_mask(map, parse_mask(sim_mask));
      ss::io::write_smap(sim_out, map);
    }
  });

  // ---- estimate-cl ----
  auto* est = app.add_subcommand("estimate-cl", "Spectrum estimate from a map or coefficients");
  std::string est_in, est_alm, est_out;
  est->add_option("--in", est_in, "input map (SMAP v1); masked maps use the masked projection");
  est->add_option("--alm", est_alm, "input coefficients (ALM v1)");
  est->add_option("--out", est_out, "output CSV 'l,C_hat'")->required();
  est->callback([&] {
    if (est_in.empty() == est_alm.empty())
      throw CLI::ValidationError("estimate-cl", "need exactly one of --in / --alm");
    ss::Alm alm;
    if (!est_alm.empty()) {
      alm = ss::io::read_alm(est_alm);
    } else {
      const ss::SphereMap map = ss::io::read_smap(est_in);
      alm = map.fully_observed() ? ss::analyze(map) : ss::masked_alm(map, map.grid->lmax);
    }
    const ss::SpectrumEstimate e = ss::estimate_cl(alm);
    std::ostringstream out;
    out << "l,C_hat\n";
    for (int l = ss::kSpectrumLmin; l <= e.lmax; ++l)
      out << l << "," << format_double(e.chat[l]) << "\n";
    ss::io::write_text(est_out, out.str());
  });

  // ---- auto-cross ----
  auto* ac = app.add_subcommand("auto-cross", "Auto- and cross-power estimates on simulated channels");
  int ac_lmax = 32, ac_channels = 2;
  std::string ac_cl = "power-law", ac_out;
  std::uint64_t ac_seed = 1;
  double ac_noise = 0.0;
  ac->add_option("--lmax", ac_lmax)->check(CLI::Range(2, 512));
  ac->add_option("--cl", ac_cl)->capture_default_str();
  ac->add_option("--channels", ac_channels, "channel count p")->check(CLI::Range(2, 64));
  ac->add_option("--noise-level", ac_noise, "flat noise C^N per channel")->capture_default_str();
  ac->add_option("--seed", ac_seed)->capture_default_str();
  ac->add_option("--out", ac_out, "output CSV 'l,auto,cross'")->required();
  ac->callback([&] {
    const ss::PowerSpectrum cl = load_cl(ac_cl, ac_lmax);
    const ss::Alm signal = ss::sample_gaussian_alm(cl, ac_seed);
    const std::vector<ss::PowerSpectrum> noise(ac_channels,
                                               ss::PowerSpectrum::flat(ac_lmax, ac_noise));
    const ss::ChannelSet ch = ss::add_noise_channels(signal, noise, ac_seed);
    const ss::SpectrumEstimate a = ss::auto_power(ch);
    const ss::SpectrumEstimate c = ss::cross_power(ch);
    std::ostringstream out;
    out << "l,auto,cross\n";
    for (int l = ss::kSpectrumLmin; l <= ac_lmax; ++l)
      out << l << "," << format_double(a.chat[l]) << "," << format_double(c.chat[l]) << "\n";
    ss::io::write_text(ac_out, out.str());
  });

  // ---- hausman ----
  auto* hm = app.add_subcommand("hausman", "Hausman noise-misspecification statistic");
  int hm_lmax = 32, hm_channels = 2;
  std::string hm_cl = "power-law", hm_out, hm_func_out;
  std::uint64_t hm_seed = 1;
  double hm_noise = 0.0, hm_declared = 1.0;
  hm->add_option("--lmax", hm_lmax)->check(CLI::Range(2, 512));
  hm->add_option("--cl", hm_cl)->capture_default_str();
  hm->add_option("--channels", hm_channels)->check(CLI::Range(2, 64));
  hm->add_option("--noise-level", hm_noise, "true flat noise C^N")->capture_default_str();
  hm->add_option("--declared-factor", hm_declared, "declared noise = factor * true")
      ->capture_default_str();
  hm->add_option("--seed", hm_seed)->capture_default_str();
  hm->add_option("--out", hm_out, "output CSV 'l,H'")->required();
  hm->add_option("--functional-out", hm_func_out, "output CSV 'r,B' with KS/CvM header comment");
  hm->callback([&] {
    if (hm_noise <= 0.0)
      throw CLI::ValidationError("hausman", "--noise-level must be positive");
    const ss::PowerSpectrum cl = load_cl(hm_cl, hm_lmax);
    const ss::Alm signal = ss::sample_gaussian_alm(cl, hm_seed);
    const std::vector<ss::PowerSpectrum> noise(hm_channels,
                                               ss::PowerSpectrum::flat(hm_lmax, hm_noise));
    const std::vector<ss::PowerSpectrum> declared(
        hm_channels, ss::PowerSpectrum::flat(hm_lmax, hm_declared * hm_noise));
    const ss::ChannelSet ch = ss::add_noise_channels(signal, noise, hm_seed);
    const ss::HausmanSeries h = ss::hausman_statistic(ch, declared);
    std::ostringstream out;
    out << "l,H\n";
    for (int l = h.lmin; l <= h.lmax; ++l) out << l << "," << format_double(h.at(l)) << "\n";
    ss::io::write_text(hm_out, out.str());
    if (!hm_func_out.empty()) {
      const ss::BrownianFunctional b = ss::brownian_functional(h, hm_lmax);
      std::ostringstream fo;
      fo << "# ks=" << format_double(b.ks) << " cvm=" << format_double(b.cvm) << "\n";
      fo << "r,B\n";
      for (std::size_t k = 0; k < b.r.size(); ++k)
        fo << format_double(b.r[k]) << "," << format_double(b.b[k]) << "\n";
      ss::io::write_text(hm_func_out, fo.str());
    }
  });

  // ---- needlet ----
  auto* nd = app.add_subcommand("needlet", "Needlet smoothed-spectrum estimates per scale");
  std::string nd_alm, nd_cl = "power-law", nd_out, nd_window_out;
  double nd_B = 2.0;
  nd->add_option("--alm", nd_alm, "input coefficients (ALM v1)")->required();
  nd->add_option("--cl", nd_cl, "theoretical spectrum for the expected value")
      ->capture_default_str();
  nd->add_option("--B", nd_B, "bandwidth")->check(CLI::PositiveNumber);
  nd->add_option("--out", nd_out, "output CSV 'j,Gamma_hat,Gamma_expected'")->required();
  nd->add_option("--window-out", nd_window_out, "window dump CSV 'xi,b'");
  nd->callback([&] {
    const ss::Alm alm = ss::io::read_alm(nd_alm);
    const ss::PowerSpectrum cl = load_cl(nd_cl, alm.lmax);
    const ss::NeedletFrame frame = ss::build_frame(nd_B, alm.lmax);
    std::ostringstream out;
    out << "j,Gamma_hat,Gamma_expected\n";
    for (int j = frame.j_min; j <= frame.j_max; ++j) {
      const ss::NeedletPower p = ss::needlet_power(alm, frame, j, cl);
      out << j << "," << format_double(p.gamma_hat) << "," << format_double(p.gamma_expected)
          << "\n";
    }
    ss::io::write_text(nd_out, out.str());
    if (!nd_window_out.empty()) {
      std::ostringstream wo;
      wo << "xi,b\n";
      for (int i = 0; i <= 400; ++i) {
        const double xi = 1.0 / nd_B + i * (nd_B - 1.0 / nd_B) / 400.0;
        wo << format_double(xi) << "," << format_double(frame.window.b(xi)) << "\n";
      }
      ss::io::write_text(nd_window_out, wo.str());
    }
  });

  // ---- bispectrum ----
  auto* bs = app.add_subcommand("bispectrum", "Bispectrum ordinates or integrated series");
  std::string bs_alm, bs_cl, bs_out, bs_mode = "ordinates", bs_triples;
  int bs_L = 0, bs_K = 4, bs_l1 = 2;
  bs->add_option("--alm", bs_alm, "input coefficients (ALM v1)")->required();
  bs->add_option("--mode", bs_mode, "ordinates | j1 | j2")->capture_default_str();
  bs->add_option("--triples", bs_triples, "semicolon list 'l1,l2,l3;...' (ordinates mode)");
  bs->add_option("--cl", bs_cl, "spectrum for the I normalization (ordinates mode)");
  bs->add_option("--L", bs_L, "series endpoint (j1/j2 modes; 0 = lmax)");
  bs->add_option("--K", bs_K, "offset count (j1)")->capture_default_str();
  bs->add_option("--l1-base", bs_l1, "squeezed base degree (j1)")->capture_default_str();
  bs->add_option("--out", bs_out, "output CSV")->required();
  bs->callback([&] {
    const ss::Alm alm = ss::io::read_alm(bs_alm);
    const int L = bs_L > 0 ? bs_L : alm.lmax;
    std::ostringstream out;
    if (bs_mode == "ordinates") {
      if (bs_triples.empty())
        throw CLI::ValidationError("bispectrum", "ordinates mode needs --triples");
      const bool have_cl = !bs_cl.empty();
      const ss::PowerSpectrum cl =
          have_cl ? load_cl(bs_cl, alm.lmax) : ss::PowerSpectrum::flat(alm.lmax, 1.0, 0);
      out << "l1,l2,l3,I,Ihat\n";
      std::istringstream ts(bs_triples);
      std::string item;
      while (std::getline(ts, item, ';')) {
        int l1, l2, l3;
        char c1, c2;
        std::istringstream is(item);
        if (!(is >> l1 >> c1 >> l2 >> c2 >> l3) || c1 != ',' || c2 != ',')
          throw CLI::ValidationError("--triples", "expected 'l1,l2,l3;...'");
        const double ihat = ss::bispectrum_I_hat(alm, l1, l2, l3);
        const double i_val = have_cl ? ss::bispectrum_I(alm, cl, l1, l2, l3) : 0.0;
        out << l1 << "," << l2 << "," << l3 << "," << format_double(i_val) << ","
            << format_double(ihat) << "\n";
      }
    } else if (bs_mode == "j1" || bs_mode == "j2") {
      const ss::IntegratedBispectrum series =
          bs_mode == "j1" ? ss::integrated_J1(alm, L, bs_K, bs_l1) : ss::integrated_J2(alm, L);
      out << "r," << (bs_mode == "j1" ? "J1" : "J2") << "\n";
      for (std::size_t k = 0; k < series.r.size(); ++k)
        out << format_double(series.r[k]) << "," << format_double(series.series[k]) << "\n";
    } else {
      throw CLI::ValidationError("--mode", "expected ordinates, j1 or j2");
    }
    ss::io::write_text(bs_out, out.str());
  });

  // ---- curvature ----
  auto* cv = app.add_subcommand("curvature", "Hill/lake densities over excursion sets");
  std::string cv_alm, cv_cl = "power-law", cv_out;
  double cv_tau = 1e-9;
  int cv_baseline = 0;
  std::uint64_t cv_seed = 1;
  double cv_level = 0.68;
  cv->add_option("--alm", cv_alm, "input coefficients (ALM v1)")->required();
  cv->add_option("--tau", cv_tau, "degeneracy tolerance")->capture_default_str();
  cv->add_option("--baseline-sims", cv_baseline,
                 "Gaussian baseline ensemble size (0 = no normalization)")
      ->capture_default_str();
  cv->add_option("--cl", cv_cl, "baseline spectrum")->capture_default_str();
  cv->add_option("--seed", cv_seed, "baseline seed")->capture_default_str();
  cv->add_option("--level", cv_level, "baseline band level")->capture_default_str();
  cv->add_option("--out", cv_out, "output CSV 'nu,h,l,h_norm,l_norm,band_lo,band_hi'")->required();
  cv->callback([&] {
    const ss::Alm alm = ss::io::read_alm(cv_alm);
    const auto grid = ss::build_grid(alm.lmax);
    const std::vector<double> nu = ss::default_nu_grid();
    auto densities = [&](const ss::Alm& a) {
      return ss::curvature_densities(a, ss::synthesize(a, grid), nu, cv_tau);
    };
    ss::DensityCurve curve = densities(alm);
    BandSummary bands;
    if (cv_baseline > 0) {
      const ss::PowerSpectrum cl = load_cl(cv_cl, alm.lmax);
      std::vector<std::vector<double>> h_rows, hl_rows;
      const auto rows = gaussian_curve_ensemble(cv_baseline, cv_seed, cl, [&](const ss::Alm& a) {
        const ss::DensityCurve c = densities(a);
        std::vector<double> row = c.h;
        row.insert(row.end(), c.l.begin(), c.l.end());
        return row;
      });
      bands = summarize(rows, cv_level);
      ss::DensityCurve base = curve;
      for (std::size_t q = 0; q < nu.size(); ++q) {
        base.h[q] = bands.mean[q];
        base.l[q] = bands.mean[nu.size() + q];
        base.defined[q] = base.h[q] > 0.0 && base.l[q] > 0.0;
      }
      curve = ss::normalized_densities(curve, base);
    } else {
      curve.h_norm.assign(nu.size(), 0.0);
      curve.l_norm.assign(nu.size(), 0.0);
    }
    std::ostringstream out;
    out << "nu,h,l,h_norm,l_norm,band_lo,band_hi\n";
    for (std::size_t q = 0; q < nu.size(); ++q) {
      const double lo = bands.lo.empty() ? 0.0 : bands.lo[q];
      const double hi = bands.hi.empty() ? 0.0 : bands.hi[q];
      out << format_double(nu[q]) << "," << format_double(curve.h[q]) << ","
          << format_double(curve.l[q]) << "," << format_double(curve.h_norm[q]) << ","
          << format_double(curve.l_norm[q]) << "," << format_double(lo) << ","
          << format_double(hi) << "\n";
    }
    ss::io::write_text(cv_out, out.str());
  });

  // ---- smhw ----
  auto* sw = app.add_subcommand("smhw", "Wavelet moment statistics per scale");
  std::string sw_alm, sw_cl = "power-law", sw_out, sw_scales;
  int sw_baseline = 0;
  std::uint64_t sw_seed = 1;
  double sw_level = 0.68;
  sw->add_option("--alm", sw_alm, "input coefficients (ALM v1)")->required();
  sw->add_option("--scales", sw_scales, "comma list of R in radians (default log-spaced sweep)");
  sw->add_option("--baseline-sims", sw_baseline, "Gaussian baseline ensemble size")
      ->capture_default_str();
  sw->add_option("--cl", sw_cl, "baseline spectrum")->capture_default_str();
  sw->add_option("--seed", sw_seed, "baseline seed")->capture_default_str();
  sw->add_option("--level", sw_level, "baseline band level")->capture_default_str();
  sw->add_option("--out", sw_out, "output CSV 'R,skewness,kurtosis,band_lo,band_hi'")->required();
  sw->callback([&] {
    const ss::Alm alm = ss::io::read_alm(sw_alm);
    std::vector<double> scales;
    if (sw_scales.empty()) {
      scales = ss::default_smhw_scales();
    } else {
      std::istringstream is(sw_scales);
      std::string tok;
      while (std::getline(is, tok, ',')) scales.push_back(std::stod(tok));
    }
    const auto grid = ss::build_grid(alm.lmax);
    std::vector<ss::SmhwKernel> kernels;
    for (const double R : scales) kernels.push_back(ss::smhw_kernel(R, grid));
    auto skew_row = [&](const ss::Alm& a) {
      std::vector<double> row;
      for (const auto& k : kernels) row.push_back(ss::smhw_moments(ss::smhw_transform(a, k)).skewness);
      return row;
    };
    const std::vector<double> skew = skew_row(alm);
    std::vector<double> kurt;
    for (const auto& k : kernels)
      kurt.push_back(ss::smhw_moments(ss::smhw_transform(alm, k)).kurtosis_excess);
    BandSummary bands;
    if (sw_baseline > 0) {
      const ss::PowerSpectrum cl = load_cl(sw_cl, alm.lmax);
      bands = summarize(gaussian_curve_ensemble(sw_baseline, sw_seed, cl, skew_row), sw_level);
    }
    std::ostringstream out;
    out << "R,skewness,kurtosis,band_lo,band_hi\n";
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const double lo = bands.lo.empty() ? 0.0 : bands.lo[k];
      const double hi = bands.hi.empty() ? 0.0 : bands.hi[k];
      out << format_double(scales[k]) << "," << format_double(skew[k]) << ","
          << format_double(kurt[k]) << "," << format_double(lo) << "," << format_double(hi)
          << "\n";
    }
    ss::io::write_text(sw_out, out.str());
  });

  // ---- mc ----
  auto* mc_cmd = app.add_subcommand("mc", "Seeded ensemble run with quantile bands");
  std::string mc_config, mc_out, mc_manifest;
  int mc_workers = default_workers();
  mc_cmd->add_option("--config", mc_config, "scenario config (key=value lines)")->required();
  mc_cmd->add_option("--out", mc_out, "output CSV 'x,mean,variance,lo,hi'")->required();
  mc_cmd->add_option("--manifest", mc_manifest, "run manifest path (default <out>.manifest)");
  mc_cmd->add_option("--workers", mc_workers, "worker threads")->check(CLI::PositiveNumber);
  mc_cmd->callback([&] {
    const ss::mc::ScenarioConfig cfg = ss::mc::ScenarioConfig::parse_file(mc_config);
    const ss::mc::EnsembleResult res = ss::mc::run_ensemble(cfg, mc_workers);
    const ss::mc::Bands bands = ss::mc::calibrate_bands(res, cfg.level);
    std::ostringstream out;
    out << "x,mean,variance,lo,hi\n";
    for (std::size_t k = 0; k < res.grid.size(); ++k)
      out << format_double(res.grid[k]) << "," << format_double(res.mean[k]) << ","
          << format_double(res.variance[k]) << "," << format_double(bands.lo[k]) << ","
          << format_double(bands.hi[k]) << "\n";
    ss::io::write_text(mc_out, out.str());
    write_manifest(mc_manifest.empty() ? mc_out + ".manifest" : mc_manifest, "mc",
                   {{"config", mc_config},
                    {"statistic", cfg.statistic},
                    {"lmax", std::to_string(cfg.lmax)},
                    {"n_sims", std::to_string(cfg.n_sims)},
                    {"seed", std::to_string(cfg.seed)},
                    {"level", format_double(cfg.level)}});
  });

  // ---- power-curve ----
  auto* pc = app.add_subcommand("power-curve", "Detection fraction against the null bands per fnl");
  std::string pc_config, pc_out, pc_fnl = "0,100,300", pc_manifest;
  int pc_workers = default_workers();
  pc->add_option("--config", pc_config, "scenario config (scalar statistic)")->required();
  pc->add_option("--fnl", pc_fnl, "comma list of fnl values")->capture_default_str();
  pc->add_option("--out", pc_out, "output CSV 'fnl,detection_fraction'")->required();
  pc->add_option("--manifest", pc_manifest, "run manifest path (default <out>.manifest)");
  pc->add_option("--workers", pc_workers, "worker threads")->check(CLI::PositiveNumber);
  pc->callback([&] {
    const ss::mc::ScenarioConfig cfg = ss::mc::ScenarioConfig::parse_file(pc_config);
    std::vector<double> grid;
    std::istringstream is(pc_fnl);
    std::string tok;
    while (std::getline(is, tok, ',')) grid.push_back(std::stod(tok));
    const auto points = ss::mc::power_curve(cfg, grid, pc_workers);
    std::ostringstream out;
    out << "fnl,detection_fraction\n";
    for (const auto& p : points)
      out << format_double(p.fnl) << "," << format_double(p.detection_fraction) << "\n";
    ss::io::write_text(pc_out, out.str());
    write_manifest(pc_manifest.empty() ? pc_out + ".manifest" : pc_manifest, "power-curve",
                   {{"config", pc_config},
                    {"statistic", cfg.statistic},
                    {"fnl", pc_fnl},
                    {"n_sims", std::to_string(cfg.n_sims)},
                    {"seed", std::to_string(cfg.seed)}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.get_name() << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    if (msg.rfind("cannot read", 0) == 0 || msg.find("unreadable") != std::string::npos)
      std::cerr << "input error: " << msg << "\n";
    else
      std::cerr << "error: " << msg << "\n";
    return 1;
  }
}
