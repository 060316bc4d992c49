#include "terraprop/io/ppm.hpp"

#include <cctype>
#include <cstring>

#include "terraprop/error.hpp"
#include "terraprop/io/atomic_file.hpp"

namespace terraprop::io {

std::string encode_ppm(const RgbImage& image) {
  if (image.channels() != 3) throw std::invalid_argument("PPM needs a 3-channel image");
  std::string out = "P6\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.data().data()), image.data().size());
  return out;
}

RgbImage decode_ppm(std::string_view bytes, const std::string& source) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char* what) {
    skip_space();
    long long v = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos++] - '0');
      if (v > (1LL << 30)) break;
      ++digits;
    }
    if (digits == 0) {
      throw DataError(pos >= bytes.size() ? DataErrc::truncated_file : DataErrc::malformed,
                      "'" + source + "': bad PPM " + what);
    }
    return static_cast<int>(v);
  };

  if (bytes.size() < 2 || bytes.substr(0, 2) != "P6") {
    throw DataError(DataErrc::malformed, "'" + source + "' is not a binary PPM (P6)");
  }
  pos = 2;
  const int width = read_int("width");
  const int height = read_int("height");
  const int maxval = read_int("maxval");
  if (maxval != 255) {
    throw DataError(DataErrc::malformed, "'" + source + "': only 8-bit PPM (maxval 255) supported");
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw DataError(DataErrc::truncated_file, "'" + source + "': PPM header ends early");
  }
  ++pos;
  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - pos < need) {
    throw DataError(DataErrc::truncated_file, "'" + source + "': PPM pixel data shorter than " +
                                                  std::to_string(need) + " bytes");
  }
  RgbImage img(height, width, 3);
  std::memcpy(img.data().data(), bytes.data() + pos, need);
  return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  return decode_ppm(read_file(path), path.string());
}

}  // namespace terraprop::io
