#include "qnl/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qnl {
namespace {

constexpr char kMagic[4] = {'Q', 'N', 'L', 'F'};
constexpr std::uint32_t kVersion = 1;

struct Header {
  std::uint32_t version = kVersion;
  std::uint32_t dim = 0;
  std::uint32_t n[3] = {0, 0, 0};
  double extent[3] = {0, 0, 0};
  double dealias_fraction = 0;
  std::uint8_t rep = 0;       // 0 physical, 1 Fourier
  std::uint8_t is_complex = 0;
  std::uint32_t components = 0;
};

void write_header(std::ostream& os, const SpectralGrid& g, Rep rep, bool cplx_flag,
                  std::uint32_t comps) {
  Header h;
  h.dim = g.dim;
  for (int a = 0; a < 3; ++a) {
    h.n[a] = g.n[a];
    h.extent[a] = g.extent[a];
  }
  h.dealias_fraction = g.dealias_fraction;
  h.rep = rep == Rep::Fourier ? 1 : 0;
  h.is_complex = cplx_flag ? 1 : 0;
  h.components = comps;
  os.write(kMagic, 4);
  os.write(reinterpret_cast<const char*>(&h), sizeof(h));
}

Header read_header(std::istream& is, SpectralGrid& g) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != std::string(kMagic, 4))
    throw StructuralError("not a qnl field file");
  Header h;
  is.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!is || h.version != kVersion) throw StructuralError("unsupported field file version");
  g.dim = static_cast<int>(h.dim);
  for (int a = 0; a < 3; ++a) {
    g.n[a] = static_cast<int>(h.n[a]);
    g.extent[a] = h.extent[a];
  }
  g.dealias_fraction = h.dealias_fraction;
  g.validate();
  return h;
}

void write_plane(std::ostream& os, const ScalarField& f, bool imag_plane) {
  std::vector<double> buf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) buf[i] = imag_plane ? f[i].imag() : f[i].real();
  os.write(reinterpret_cast<const char*>(buf.data()), sizeof(double) * buf.size());
}

void read_plane(std::istream& is, ScalarField& f, bool imag_plane) {
  std::vector<double> buf(f.size());
  is.read(reinterpret_cast<char*>(buf.data()), sizeof(double) * buf.size());
  if (!is) throw StructuralError("field file truncated");
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = imag_plane ? cplx(f[i].real(), buf[i]) : cplx(buf[i], f[i].imag());
}

void write_component_data(std::ostream& os, const ScalarField& f, bool cplx_flag) {
  write_plane(os, f, false);
  if (cplx_flag) write_plane(os, f, true);
}

}  // namespace

void write_field(const std::string& path, const ScalarField& f, bool complex_samples) {
  std::ofstream os(path + ".tmp", std::ios::binary);
  write_header(os, f.grid(), f.rep(), complex_samples, 1);
  write_component_data(os, f, complex_samples);
  os.close();
  std::filesystem::rename(path + ".tmp", path);
}

void write_field(const std::string& path, const VectorField& f, bool complex_samples) {
  std::ofstream os(path + ".tmp", std::ios::binary);
  write_header(os, f.grid(), f.rep(), complex_samples, static_cast<std::uint32_t>(f.dim()));
  for (int a = 0; a < f.dim(); ++a) write_component_data(os, f.comp(a), complex_samples);
  os.close();
  std::filesystem::rename(path + ".tmp", path);
}

ScalarField read_scalar_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StructuralError("cannot open field file " + path);
  SpectralGrid g;
  Header h = read_header(is, g);
  if (h.components != 1) throw StructuralError("expected a scalar field in " + path);
  ScalarField f(g, h.rep ? Rep::Fourier : Rep::Physical);
  read_plane(is, f, false);
  if (h.is_complex) read_plane(is, f, true);
  return f;
}

VectorField read_vector_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StructuralError("cannot open field file " + path);
  SpectralGrid g;
  Header h = read_header(is, g);
  if (static_cast<int>(h.components) != g.dim)
    throw StructuralError("component count does not match grid dim in " + path);
  VectorField f(g, h.rep ? Rep::Fourier : Rep::Physical);
  for (int a = 0; a < g.dim; ++a) {
    read_plane(is, f.comp(a), false);
    if (h.is_complex) read_plane(is, f.comp(a), true);
  }
  return f;
}

void write_text_dump(const std::string& path, const ScalarField& f, bool complex_samples) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    os << f[i].real();
    if (complex_samples) os << '\t' << f[i].imag();
    os << '\n';
  }
  atomic_write_text(path, os.str());
}

void atomic_write_text(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    os << contents;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qnl
