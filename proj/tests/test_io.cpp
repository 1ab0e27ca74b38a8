#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "spherestats/field_sim.hpp"
#include "spherestats/io.hpp"

using namespace spherestats;

namespace {
std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("alm round trip is exact") {
  const auto alm = sample_gaussian_alm(PowerSpectrum::power_law(12), 3);
  const auto p = tmp_path("t_alm.dat");
  io::write_alm(p, alm);
  const auto back = io::read_alm(p);
  CHECK(back.lmax == alm.lmax);
  CHECK(back.c == alm.c);
  std::remove(p.c_str());
}

TEST_CASE("smap round trip preserves values and mask") {
  const int lmax = 8;
  const auto grid = build_grid(lmax);
  auto map = synthesize(sample_gaussian_alm(PowerSpectrum::power_law(lmax), 4), grid);
  map = apply_mask(map, Mask::band(0.2));
  const auto p = tmp_path("t_smap.dat");
  io::write_smap(p, map);
  const auto back = io::read_smap(p);
  CHECK(back.grid->lmax == lmax);
  CHECK(back.n_masked() == map.n_masked());
  for (std::size_t i = 0; i < map.values.size(); ++i)
    if (map.observed[i]) CHECK(back.values[i] == map.values[i]);
}

TEST_CASE("cl round trip and comment handling") {
  PowerSpectrum cl = PowerSpectrum::flat(6, 0.25);
  const auto p = tmp_path("t_cl.dat");
  io::write_cl(p, cl);
  const auto back = io::read_cl(p);
  CHECK(back.lmax == 6);
  CHECK(back.cl == cl.cl);
  std::ofstream f(p);
  f << "# comment line\n0 0\n1 0\n2 0.5\n";
  f.close();
  const auto c2 = io::read_cl(p);
  CHECK(c2.lmax == 2);
  CHECK(c2.at(2) == 0.5);
  std::remove(p.c_str());
}

TEST_CASE("readers reject malformed input") {
  const auto p = tmp_path("t_bad.dat");
  io::write_text(p, "not a header\n");
  CHECK_THROWS(io::read_alm(p));
  CHECK_THROWS(io::read_smap(p));
  CHECK_THROWS(io::read_cl(p));
  std::remove(p.c_str());
  CHECK_THROWS(io::read_alm(tmp_path("does_not_exist.dat")));
}

TEST_CASE("format_double survives the round trip at full precision") {
  const double v = 0.1234567890123456789;
  CHECK(std::stod(io::format_double(v)) == v);
}
