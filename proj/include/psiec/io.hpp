#pragma once
// Field and coefficient files, JSON run summaries.

#include <string>

#include "json.hpp"
#include "psiec/frame.hpp"
#include "psiec/grid.hpp"

namespace psiec {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Header: x1..xn then c_<multi-index> per component; one row per grid point,
// last axis fastest.
void write_field_csv(const SampledFormField& f, const std::string& path);
SampledFormField read_field_csv(const std::string& path, const Grid& g, int degree);

// Raw layout (little-endian):
//   0  char[4]  "PSEC"
//   4  u32      version (1)
//   8  u32      dim
//  12  u32      degree
//  16  u32      N (points per axis)
//  20  u32      component count
//  24  f64      extent L
//  32  f64[]    components in masks_of_degree order, each N^dim row-major
void write_field_raw(const SampledFormField& f, const std::string& path);
SampledFormField read_field_raw(const std::string& path);

// Columns n,r,nu,a,j,k1..kn,t,value in band/lattice order.
void write_coefficients_csv(const FrameCoefficients& c, const std::string& path,
                            double drop = 0.0);

void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace psiec
