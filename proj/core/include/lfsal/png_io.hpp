#pragma once

#include <string>

#include "lfsal/tensor.hpp"

// 8-bit PNG load/save. Loaders normalize to [0,1] by /255; savers clamp to
// [0,1] and round to 0..255. Throws FormatError on undecodable files.

namespace lfsal {

// Any colour type accepted; converted to RGB. Returns [3,H,W].
Tensor load_png_rgb(const std::string& path);

// Converted to single channel (Rec. 601 luma for colour inputs). Returns [1,H,W].
Tensor load_png_gray(const std::string& path);

void save_png_rgb(const std::string& path, const Tensor& image);   // [3,H,W]
void save_png_gray(const std::string& path, const Tensor& image);  // [1,H,W] or [H,W]

}  // namespace lfsal
