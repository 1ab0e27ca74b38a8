// Subprocess tests of the command-line tool: exit codes, error channels,
// output formats and bit-level determinism. Invoked with the binary path as
// the only argument.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spherestats/field_sim.hpp"
#include "spherestats/io.hpp"
#include "spherestats/spectra.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_bin;
fs::path g_dir;
int g_failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("%s %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run(const std::string& args, std::string* out = nullptr, std::string* err = nullptr) {
  const auto out_p = g_dir / "stdout.txt";
  const auto err_p = g_dir / "stderr.txt";
  const std::string cmd =
      g_bin + " " + args + " >" + out_p.string() + " 2>" + err_p.string();
  const int rc = std::system(cmd.c_str());
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  if (out) *out = slurp(out_p);
  if (err) *err = slurp(err_p);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp_file(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// manifest content minus its timestamp line, for rerun comparisons
std::string without_timestamp(const std::string& text) {
  std::stringstream in(text), out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("timestamp", 0) != 0) out << line << "\n";
  return out.str();
}

void test_exit_codes() {
  std::string out, err;
  expect(run("--help", &out) == 0, "--help exits 0");
  expect(out.find("simulate") != std::string::npos, "--help lists subcommands");
  expect(run("", &out, &err) == 2, "missing subcommand exits 2");
  expect(err.rfind("usage error:", 0) == 0, "usage errors are prefixed on stderr");
  expect(run("simulate --no-such-flag", &out, &err) == 2, "unknown flag exits 2");
  expect(run("estimate-cl --alm " + (g_dir / "missing.alm").string() + " --out " +
                 (g_dir / "x.csv").string(),
             &out, &err) == 1,
         "unreadable input exits 1");
  expect(err.rfind("input error:", 0) == 0 || err.rfind("error:", 0) == 0,
         "runtime errors are prefixed on stderr");
}

void test_simulate_estimate_roundtrip() {
  const auto alm_p = g_dir / "sim.alm";
  const auto map_p = g_dir / "sim.smap";
  const auto csv_p = g_dir / "sim_cl.csv";
  const int rc = run("simulate --lmax 16 --seed 42 --out " + map_p.string() + " --out-alm " +
                     alm_p.string());
  expect(rc == 0, "simulate succeeds");
  expect(run("estimate-cl --alm " + alm_p.string() + " --out " + csv_p.string()) == 0,
         "estimate-cl succeeds");
  // CSV agrees with the library estimate on the written coefficients
  const auto alm = spherestats::io::read_alm(alm_p.string());
  const auto est = spherestats::estimate_cl(alm);
  std::ifstream csv(csv_p);
  std::string header;
  std::getline(csv, header);
  expect(header == "l,C_hat", "estimate-cl CSV header");
  bool match = true;
  int l;
  char comma;
  double v;
  int rows = 0;
  while (csv >> l >> comma >> v) {
    if (std::abs(v - est.chat[l]) > 1e-15 * std::max(1.0, std::abs(est.chat[l]))) match = false;
    ++rows;
  }
  expect(match && rows == 15, "estimate-cl CSV matches the library estimate for l = 2..16");
  // map and coefficients are consistent
  const auto map = spherestats::io::read_smap(map_p.string());
  const auto re = spherestats::analyze(map);
  double worst = 0;
  for (std::size_t i = 0; i < alm.c.size(); ++i)
    worst = std::max(worst, std::abs(alm.c[i] - re.c[i]));
  expect(worst < 1e-12, "written map analyzes back to the written coefficients");
}

void test_simulate_determinism() {
  const auto a = g_dir / "rep_a.alm";
  const auto b = g_dir / "rep_b.alm";
  run("simulate --lmax 24 --seed 7 --fnl 100 --out-alm " + a.string());
  run("simulate --lmax 24 --seed 7 --fnl 100 --out-alm " + b.string());
  expect(slurp_file(a) == slurp_file(b), "simulate reruns are bit-identical");
  const auto c = g_dir / "rep_c.alm";
  run("simulate --lmax 24 --seed 8 --fnl 100 --out-alm " + c.string());
  expect(slurp_file(a) != slurp_file(c), "different seeds give different output");
}

void test_masked_pipeline() {
  const auto map_p = g_dir / "masked.smap";
  const auto csv_p = g_dir / "masked_cl.csv";
  expect(run("simulate --lmax 16 --seed 3 --mask band:0.3 --out " + map_p.string()) == 0,
         "simulate with a band mask succeeds");
  const auto map = spherestats::io::read_smap(map_p.string());
  expect(map.n_masked() > 0, "masked map records masked pixels");
  expect(run("estimate-cl --in " + map_p.string() + " --out " + csv_p.string()) == 0,
         "estimate-cl accepts masked maps");
}

void test_auto_cross_and_hausman() {
  const auto ac_p = g_dir / "ac.csv";
  expect(run("auto-cross --lmax 16 --channels 3 --noise-level 0.2 --seed 5 --out " +
             ac_p.string()) == 0,
         "auto-cross succeeds");
  std::ifstream f(ac_p);
  std::string header;
  std::getline(f, header);
  expect(header == "l,auto,cross", "auto-cross CSV header");
  const auto hm_p = g_dir / "hm.csv";
  const auto fn_p = g_dir / "hm_func.csv";
  expect(run("hausman --lmax 16 --channels 2 --noise-level 0.2 --declared-factor 0.8 --seed 5 "
             "--out " + hm_p.string() + " --functional-out " + fn_p.string()) == 0,
         "hausman succeeds");
  const auto func = slurp_file(fn_p);
  expect(func.find("ks=") != std::string::npos && func.find("cvm=") != std::string::npos,
         "functional output carries the KS/CvM summary");
}

void test_analysis_commands() {
  const auto alm_p = g_dir / "an.alm";
  run("simulate --lmax 32 --seed 11 --out-alm " + alm_p.string());
  expect(run("needlet --alm " + alm_p.string() + " --B 2 --out " + (g_dir / "nd.csv").string() +
             " --window-out " + (g_dir / "ndw.csv").string()) == 0,
         "needlet succeeds");
  expect(run("bispectrum --alm " + alm_p.string() +
             " --mode ordinates --triples '2,2,2;4,4,4;4,6,8' --out " +
             (g_dir / "bs.csv").string()) == 0,
         "bispectrum ordinates succeed");
  expect(run("bispectrum --alm " + alm_p.string() + " --mode j1 --L 16 --out " +
             (g_dir / "j1.csv").string()) == 0,
         "bispectrum j1 succeeds");
  expect(run("curvature --alm " + alm_p.string() + " --baseline-sims 20 --seed 2 --out " +
             (g_dir / "cv.csv").string()) == 0,
         "curvature succeeds");
  expect(run("smhw --alm " + alm_p.string() + " --scales 0.2,0.4 --baseline-sims 20 --seed 2 "
             "--out " + (g_dir / "sw.csv").string()) == 0,
         "smhw succeeds");
}

void test_mc_determinism() {
  const auto cfg_p = g_dir / "mc.cfg";
  {
    std::ofstream f(cfg_p);
    f << "lmax = 16\nstatistic = j2\nn_sims = 32\nseed = 9\nlevel = 0.68\n";
  }
  const auto o1 = g_dir / "mc1.csv";
  const auto o4 = g_dir / "mc4.csv";
  const auto o4b = g_dir / "mc4b.csv";
  expect(run("mc --config " + cfg_p.string() + " --workers 1 --out " + o1.string()) == 0,
         "mc workers=1 succeeds");
  expect(run("mc --config " + cfg_p.string() + " --workers 4 --out " + o4.string()) == 0,
         "mc workers=4 succeeds");
  run("mc --config " + cfg_p.string() + " --workers 4 --out " + o4b.string());
  expect(slurp_file(o1) == slurp_file(o4), "mc output identical for workers 1 and 4");
  expect(slurp_file(o4) == slurp_file(o4b), "mc reruns are bit-identical");
  expect(without_timestamp(slurp_file(o1.string() + ".manifest")) ==
             without_timestamp(slurp_file(o4.string() + ".manifest")),
         "manifests agree up to the timestamp");

  // power-curve determinism at a small scale
  {
    std::ofstream f(cfg_p);
    f << "lmax = 16\nstatistic = j2\nn_sims = 30\nseed = 9\nlevel = 0.68\n";
  }
  const auto p1 = g_dir / "pc1.csv";
  const auto p4 = g_dir / "pc4.csv";
  expect(run("power-curve --config " + cfg_p.string() + " --fnl 0,300 --workers 1 --out " +
             p1.string()) == 0,
         "power-curve succeeds");
  run("power-curve --config " + cfg_p.string() + " --fnl 0,300 --workers 4 --out " + p4.string());
  expect(slurp_file(p1) == slurp_file(p4), "power-curve identical for workers 1 and 4");
}

void test_config_errors() {
  const auto cfg_p = g_dir / "bad.cfg";
  {
    std::ofstream f(cfg_p);
    f << "lmax = 16\nno_such_key = 1\n";
  }
  std::string err;
  expect(run("mc --config " + cfg_p.string() + " --out " + (g_dir / "never.csv").string(),
             nullptr, &err) == 1,
         "unknown config key exits 1");
  expect(err.find("no_such_key") != std::string::npos, "config error names the offending key");
  expect(!fs::exists(g_dir / "never.csv"), "no output written on failure");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-binary>\n");
    return 2;
  }
  g_bin = argv[1];
  g_dir = fs::temp_directory_path() / "spherestats_cli_tests";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  test_exit_codes();
  test_simulate_estimate_roundtrip();
  test_simulate_determinism();
  test_masked_pipeline();
  test_auto_cross_and_hausman();
  test_analysis_commands();
  test_mc_determinism();
  test_config_errors();

  std::printf("\n%s (%d failures)\n", g_failures == 0 ? "all cli checks passed" : "cli checks FAILED",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
