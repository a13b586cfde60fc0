#pragma once

#include <string>

#include "cgoforge/field.hpp"

namespace cgoforge {

// Binary container: magic "CGOF", u32 version, u32 dims, u32 N, f64 L, u32 rows,
// u32 cols, then interleaved re/im f64 values in component-block order. Little-endian.
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path);

// CSV: index columns i0..i{n-1}, then c<r><c>_re, c<r><c>_im per component.
void write_field_csv(const std::string& path, const Field& f);

}  // namespace cgoforge
