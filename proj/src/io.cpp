#include "spherestats/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spherestats::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

void expect_header(std::istream& in, const std::string& magic, const std::string& path) {
  std::string line;
  std::getline(in, line);
  if (line != magic) throw std::runtime_error(path + ": expected \"" + magic + "\" header");
}

int header_int(std::istream& in, const std::string& key, const std::string& path) {
  std::string line;
  std::getline(in, line);
  std::istringstream ss(line);
  std::string k;
  long v = 0;
  if (!(ss >> k >> v) || k != key) throw std::runtime_error(path + ": bad header line, expected " + key);
  return static_cast<int>(v);
}

}  // namespace

void write_smap(const std::string& path, const SphereMap& map) {
  std::ostringstream out;
  const SphereGrid& g = *map.grid;
  out << "SMAP v1\n";
  out << "lmax " << g.lmax << "\n";
  out << "ntheta " << g.ntheta() << "\n";
  out << "nphi " << g.nphi << "\n";
  out << "masked " << map.n_masked() << "\n";
  for (std::size_t p = 0; p < map.values.size(); ++p) {
    if (map.observed[p])
      out << format_double(map.values[p]) << "\n";
    else
      out << "M\n";
  }
  write_text(path, out.str());
}

SphereMap read_smap(const std::string& path) {
  std::ifstream in = open_input(path);
  expect_header(in, "SMAP v1", path);
  const int lmax = header_int(in, "lmax", path);
  const int ntheta = header_int(in, "ntheta", path);
  const int nphi = header_int(in, "nphi", path);
  const int masked = header_int(in, "masked", path);
  SphereMap map(build_grid(lmax));
  if (map.grid->ntheta() != ntheta || map.grid->nphi != nphi)
    throw std::runtime_error(path + ": grid shape inconsistent with lmax");
  int seen_masked = 0;
  for (std::size_t p = 0; p < map.values.size(); ++p) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated map data");
    if (line == "M") {
      map.observed[p] = 0;
      map.values[p] = 0.0;
      ++seen_masked;
    } else {
      map.values[p] = std::stod(line);
    }
  }
  if (seen_masked != masked) throw std::runtime_error(path + ": mask-count mismatch");
  return map;
}

void write_alm(const std::string& path, const Alm& alm) {
  std::ostringstream out;
  out << "ALM v1\n";
  out << "lmax " << alm.lmax << "\n";
  for (int l = 0; l <= alm.lmax; ++l)
    for (int m = 0; m <= l; ++m) {
      const cdouble v = alm.at(l, m);
      out << l << " " << m << " " << format_double(v.real()) << " " << format_double(v.imag()) << "\n";
    }
  write_text(path, out.str());
}

Alm read_alm(const std::string& path) {
  std::ifstream in = open_input(path);
  expect_header(in, "ALM v1", path);
  const int lmax = header_int(in, "lmax", path);
  Alm alm(lmax);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int l, m;
    double re, im;
    if (!(ss >> l >> m >> re >> im)) throw std::runtime_error(path + ": bad alm line");
    if (l < 0 || l > lmax || m < 0 || m > l) throw std::runtime_error(path + ": alm index out of range");
    alm.at(l, m) = cdouble(re, im);
  }
  return alm;
}

void write_cl(const std::string& path, const PowerSpectrum& cl) {
  std::ostringstream out;
  for (int l = 0; l <= cl.lmax; ++l) out << l << " " << format_double(cl.cl[l]) << "\n";
  write_text(path, out.str());
}

PowerSpectrum read_cl(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::pair<int, double>> entries;
  int lmax = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int l;
    double c;
    if (!(ss >> l >> c)) throw std::runtime_error(path + ": bad spectrum line");
    if (l < 0) throw std::runtime_error(path + ": negative l");
    entries.emplace_back(l, c);
    lmax = std::max(lmax, l);
  }
  if (lmax < 0) throw std::runtime_error(path + ": empty spectrum");
  std::vector<double> cl(lmax + 1, 0.0);
  for (const auto& [l, c] : entries) cl[l] = c;
  return PowerSpectrum(lmax, std::move(cl));
}

}  // namespace spherestats::io
