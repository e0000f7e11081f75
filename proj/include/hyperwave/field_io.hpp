#pragma once

#include <string>

#include "hyperwave/grid.hpp"

namespace hyperwave {

// Binary field format (documented in docs/field-format.md): a fixed 64-byte
// header followed by the raw samples, everything little-endian regardless of
// host byte order.
//   offset 0   8 bytes  magic "HWFIELD\0"
//   offset 8   u32      format version (1)
//   offset 12  u32      d
//   offset 16  u32      n
//   offset 20  u32      m
//   offset 24  f64      T
//   offset 32  zeros up to byte 64
//   offset 64  (m+1) * n^d * d  f64 samples, step-major, axis 0 fastest,
//              component innermost.

void save_field(const std::string& path, const SpaceTimeField& f);

/// Reads a field and validates the header (magic, version, payload length).
SpaceTimeField load_field(const std::string& path);

/// As above, then checks the header against the expected grid; mismatches
/// name expected and actual values.
SpaceTimeField load_field(const std::string& path, const Grid& expect);

/// Plain-text export for small fields: step, multi-index, component, value.
void save_field_csv(const std::string& path, const SpaceTimeField& f);

}  // namespace hyperwave
