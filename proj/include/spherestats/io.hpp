#pragma once

#include <string>

#include "spherestats/field_sim.hpp"
#include "spherestats/grid.hpp"

namespace spherestats::io {

// All writers go through a temp file + rename, so declared outputs appear
// atomically. Numeric output is full-precision ("%.17g").

// Map file "SMAP v1": header lines (lmax, ntheta, nphi, mask-count), then
// one value per line, row-major by theta then phi; masked pixels as "M".
void write_smap(const std::string& path, const SphereMap& map);
SphereMap read_smap(const std::string& path);

// Alm file "ALM v1": header lmax, then lines "l m re im" for m >= 0.
void write_alm(const std::string& path, const Alm& alm);
Alm read_alm(const std::string& path);

// Spectrum file "CL v1": lines "l C_l"; '#' comments skipped.
void write_cl(const std::string& path, const PowerSpectrum& cl);
PowerSpectrum read_cl(const std::string& path);

// Atomic whole-file text write (temp + rename).
void write_text(const std::string& path, const std::string& content);

std::string format_double(double v);

}  // namespace spherestats::io
