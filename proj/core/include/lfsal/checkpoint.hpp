#pragma once

#include <map>
#include <string>

#include "lfsal/tensor.hpp"

// Checkpoint container: little-endian binary, magic "LFSAL1", then for each
// tensor (in sorted name order): u32 name length, UTF-8 name bytes, u32 ndim,
// ndim u64 dims, then the raw 64-bit float payload. Full layout in
// docs/checkpoint_format.md.

namespace lfsal {

void save_checkpoint(const std::string& path, const std::map<std::string, Tensor>& tensors);

// Throws FormatError on bad magic, truncation, or trailing garbage.
std::map<std::string, Tensor> load_checkpoint(const std::string& path);

}  // namespace lfsal
