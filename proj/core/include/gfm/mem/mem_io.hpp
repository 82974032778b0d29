#pragma once

#include "gfm/mem/metric_map.hpp"

#include <optional>
#include <string>

namespace gfm::mem {

/// Persists the MEM as a 16-bit 4-channel PNG plus a `<path>.mem.json`
/// sidecar. Channel layout (documented in the sidecar as well): R holds
/// code bits 0-15, G 16-31, B 32-47, A 48-63; channel samples are 16-bit
/// big-endian as PNG mandates. The round trip is lossless.
void save_mem(const MetricEncodingMap& mem, const std::string& png_path);

struct LoadedMem {
  MetricEncodingMap mem;
  std::optional<std::string> warning;  // e.g. source-map hash mismatch
};

/// Loads a MEM written by save_mem. If `expected_source_hash` is nonzero
/// and disagrees with the sidecar, the mismatch is reported as a warning
/// rather than an error.
LoadedMem load_mem(const std::string& png_path,
                   uint64_t expected_source_hash = 0);

}  // namespace gfm::mem
