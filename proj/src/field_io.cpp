#include "cgoforge/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cgoforge/error.hpp"

namespace cgoforge {

namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host assumed");

constexpr char kMagic[4] = {'C', 'G', 'O', 'F'};
constexpr uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("field: truncated header");
  return v;
}

}  // namespace

void write_field(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os.write(kMagic, 4);
  put<uint32_t>(os, kVersion);
  put<uint32_t>(os, static_cast<uint32_t>(f.grid().n));
  put<uint32_t>(os, static_cast<uint32_t>(f.grid().N));
  put<double>(os, f.grid().L);
  put<uint32_t>(os, static_cast<uint32_t>(f.rows()));
  put<uint32_t>(os, static_cast<uint32_t>(f.cols()));
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.values().size() * sizeof(cplx)));
  if (!os) throw IoError("write failed: " + path);
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw IoError("not a field container: " + path);
  if (get<uint32_t>(is) != kVersion) throw IoError("unsupported container version: " + path);
  const int n = static_cast<int>(get<uint32_t>(is));
  const int N = static_cast<int>(get<uint32_t>(is));
  const double L = get<double>(is);
  const int rows = static_cast<int>(get<uint32_t>(is));
  const int cols = static_cast<int>(get<uint32_t>(is));
  Field f(Grid(n, N, L), rows, cols);
  is.read(reinterpret_cast<char*>(f.values().data()),
          static_cast<std::streamsize>(f.values().size() * sizeof(cplx)));
  if (!is) throw IoError("truncated field data: " + path);
  if (!f.all_finite()) throw IoError("non-finite values in " + path);
  return f;
}

void write_field_csv(const std::string& path, const Field& f) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  const Grid& g = f.grid();
  for (int a = 0; a < g.n; ++a) os << (a ? "," : "") << 'i' << a;
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c) os << ",c" << r << c << "_re,c" << r << c << "_im";
  os << '\n';
  os.precision(17);
  for (size_t i = 0; i < g.size(); ++i) {
    auto idx = g.index(i);
    for (int a = 0; a < g.n; ++a) os << (a ? "," : "") << idx[a];
    for (int r = 0; r < f.rows(); ++r)
      for (int c = 0; c < f.cols(); ++c) os << ',' << f.at(i, r, c).real() << ',' << f.at(i, r, c).imag();
    os << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace cgoforge
