#include "psiec/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace psiec {

static_assert(std::endian::native == std::endian::little, "raw format assumes little-endian");

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

void check(std::ostream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace

void write_field_csv(const SampledFormField& f, const std::string& path) {
  auto os = open_out(path);
  const Grid& g = f.grid;
  for (int a = 0; a < g.n; ++a) os << (a ? "," : "") << "x" << a + 1;
  for (unsigned m : f.masks) os << "," << component_name(m, g.n);
  os << "\n";
  char buf[40];
  for (size_t i = 0; i < g.size(); ++i) {
    double x[3];
    g.point(i, x);
    for (int a = 0; a < g.n; ++a) {
      std::snprintf(buf, sizeof buf, "%s%.10g", a ? "," : "", x[a]);
      os << buf;
    }
    for (const auto& c : f.comp) {
      std::snprintf(buf, sizeof buf, ",%.17g", c[i]);
      os << buf;
    }
    os << "\n";
  }
  check(os, path);
}

SampledFormField read_field_csv(const std::string& path, const Grid& g, int degree) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  SampledFormField f = SampledFormField::zeros(g, degree);
  std::string line;
  std::getline(is, line);
  for (size_t i = 0; i < g.size(); ++i) {
    if (!std::getline(is, line)) throw IoError("truncated CSV: " + path);
    std::stringstream ss(line);
    std::string cell;
    for (int a = 0; a < g.n; ++a) std::getline(ss, cell, ',');
    for (auto& c : f.comp) {
      if (!std::getline(ss, cell, ',')) throw IoError("short row in " + path);
      c[i] = std::stod(cell);
    }
  }
  return f;
}

void write_field_raw(const SampledFormField& f, const std::string& path) {
  auto os = open_out(path, true);
  const Grid& g = f.grid;
  char head[32] = {};
  std::memcpy(head, "PSEC", 4);
  uint32_t u[5] = {1u, static_cast<uint32_t>(g.n), static_cast<uint32_t>(f.degree),
                   static_cast<uint32_t>(g.N), static_cast<uint32_t>(f.masks.size())};
  std::memcpy(head + 4, u, sizeof u);
  std::memcpy(head + 24, &g.L, 8);
  os.write(head, 32);
  for (const auto& c : f.comp)
    os.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * 8));
  check(os, path);
}

SampledFormField read_field_raw(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  char head[32];
  if (!is.read(head, 32) || std::memcmp(head, "PSEC", 4) != 0)
    throw IoError("not a PSEC file: " + path);
  uint32_t u[5];
  std::memcpy(u, head + 4, sizeof u);
  if (u[0] != 1u) throw IoError("unsupported PSEC version");
  Grid g;
  g.n = static_cast<int>(u[1]);
  g.N = static_cast<int>(u[3]);
  std::memcpy(&g.L, head + 24, 8);
  SampledFormField f = SampledFormField::zeros(g, static_cast<int>(u[2]));
  if (f.masks.size() != u[4]) throw IoError("component count mismatch in " + path);
  for (auto& c : f.comp)
    if (!is.read(reinterpret_cast<char*>(c.data()), static_cast<std::streamsize>(c.size() * 8)))
      throw IoError("truncated PSEC file: " + path);
  return f;
}

void write_coefficients_csv(const FrameCoefficients& c, const std::string& path, double drop) {
  auto os = open_out(path);
  os << "n,r,nu,a,j";
  for (int a = 0; a < c.n; ++a) os << ",k" << a + 1;
  os << ",t,value\n";
  char buf[40];
  for (const auto& [idx, v] : c.entries(drop)) {
    os << idx.type.n << "," << idx.type.r << "," << nu_name(idx.type.nu) << "," << idx.type.a
       << "," << idx.j;
    for (int a = 0; a < c.n; ++a) os << "," << idx.k[a];
    std::snprintf(buf, sizeof buf, ",%d,%.17g\n", idx.t, v);
    os << buf;
  }
  check(os, path);
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto os = open_out(path);
  os << j.dump(2) << "\n";
  check(os, path);
}

}  // namespace psiec
