#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "terraprop/raster.hpp"

namespace terraprop::io {

/// Binary PPM (P6) with maxval 255.
std::string encode_ppm(const RgbImage& image);
RgbImage decode_ppm(std::string_view bytes, const std::string& source = "<memory>");
RgbImage read_ppm(const std::filesystem::path& path);

}  // namespace terraprop::io
