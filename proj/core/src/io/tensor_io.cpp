#include "terraprop/io/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <string>
#include <vector>

#include "terraprop/error.hpp"

namespace terraprop::io {
namespace {

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 1;
  [[nodiscard]] std::size_t elements() const {
    return static_cast<std::size_t>(height) * width * channels;
  }
};

Shape parse_shape(const Json& sidecar) {
  if (!sidecar.is_object() || !sidecar.contains("shape") || !sidecar["shape"].is_array()) {
    throw DataError(DataErrc::malformed, "sidecar lacks a 'shape' array");
  }
  const auto& s = sidecar["shape"];
  if (s.size() != 2 && s.size() != 3) {
    throw DataError(DataErrc::malformed, "sidecar shape must have 2 or 3 dimensions");
  }
  std::vector<int> dims;
  for (const auto& d : s) {
    if (!d.is_number_integer() || d.get<long long>() < 0 || d.get<long long>() > (1LL << 30)) {
      throw DataError(DataErrc::malformed, "sidecar shape entries must be non-negative integers");
    }
    dims.push_back(d.get<int>());
  }
  Shape out{dims[0], dims[1], dims.size() == 3 ? dims[2] : 1};
  if (out.channels < 1) throw DataError(DataErrc::malformed, "sidecar channel count must be >= 1");
  return out;
}

void expect_dtype(const Json& sidecar, std::string_view want) {
  if (!sidecar.contains("dtype") || !sidecar["dtype"].is_string()) {
    throw DataError(DataErrc::malformed, "sidecar lacks a 'dtype' string");
  }
  const auto dtype = sidecar["dtype"].get<std::string>();
  if (dtype != "float32" && dtype != "uint8") {
    throw DataError(DataErrc::unknown_dtype, "dtype '" + dtype + "'");
  }
  if (dtype != want) {
    throw DataError(DataErrc::unknown_dtype,
                    "expected dtype " + std::string(want) + ", sidecar says " + dtype);
  }
}

void check_length(std::size_t bytes, std::size_t element_size, const Shape& shape) {
  if (bytes % element_size != 0) {
    throw DataError(DataErrc::truncated_file,
                    std::to_string(bytes) + " payload bytes is not a whole number of elements");
  }
  const std::size_t count = bytes / element_size;
  if (count != shape.elements()) {
    throw DataError(DataErrc::payload_length_mismatch,
                    "sidecar shape needs " + std::to_string(shape.elements()) +
                        " elements, payload holds " + std::to_string(count));
  }
}

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& payload) {
  auto p = payload;
  p += ".json";
  return p;
}

Json make_sidecar(std::string_view dtype, int height, int width, int channels, const Json& extra,
                  bool drop_unit_channel) {
  Json j;
  j["dtype"] = dtype;
  if (drop_unit_channel && channels == 1) {
    j["shape"] = {height, width};
  } else {
    j["shape"] = {height, width, channels};
  }
  for (const auto& [key, value] : extra.items()) {
    if (key != "dtype" && key != "shape") j[key] = value;
  }
  return j;
}

std::string encode_payload(const Raster<float>& raster) {
  std::string bytes(raster.data().size() * sizeof(float), '\0');
  for (std::size_t i = 0; i < raster.data().size(); ++i) {
    const std::uint32_t v = to_little(std::bit_cast<std::uint32_t>(raster.data()[i]));
    std::memcpy(bytes.data() + i * 4, &v, 4);
  }
  return bytes;
}

std::string encode_payload(const Raster<std::uint8_t>& raster) {
  return {reinterpret_cast<const char*>(raster.data().data()), raster.data().size()};
}

Tensor<float> decode_float_tensor(std::string_view payload, const Json& sidecar) {
  expect_dtype(sidecar, "float32");
  const auto shape = parse_shape(sidecar);
  check_length(payload.size(), sizeof(float), shape);
  Tensor<float> out{Raster<float>(shape.height, shape.width, shape.channels), sidecar};
  for (std::size_t i = 0; i < shape.elements(); ++i) {
    std::uint32_t v;
    std::memcpy(&v, payload.data() + i * 4, 4);
    out.data.data()[i] = std::bit_cast<float>(to_little(v));
  }
  return out;
}

Tensor<std::uint8_t> decode_u8_tensor(std::string_view payload, const Json& sidecar) {
  expect_dtype(sidecar, "uint8");
  const auto shape = parse_shape(sidecar);
  check_length(payload.size(), 1, shape);
  Tensor<std::uint8_t> out{Raster<std::uint8_t>(shape.height, shape.width, shape.channels),
                           sidecar};
  std::memcpy(out.data.data().data(), payload.data(), payload.size());
  return out;
}

void write_tensor(AtomicWriter& writer, const std::filesystem::path& path,
                  const Raster<float>& raster, const Json& extra) {
  writer.add(path, encode_payload(raster));
  writer.add(sidecar_path(path),
             make_sidecar("float32", raster.height(), raster.width(), raster.channels(), extra)
                     .dump(2) +
                 "\n");
}

void write_tensor(AtomicWriter& writer, const std::filesystem::path& path,
                  const Raster<std::uint8_t>& raster, const Json& extra) {
  writer.add(path, encode_payload(raster));
  writer.add(sidecar_path(path),
             make_sidecar("uint8", raster.height(), raster.width(), raster.channels(), extra, true)
                     .dump(2) +
                 "\n");
}

Json read_json_file(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(DataErrc::malformed, "'" + path.string() + "': " + e.what());
  }
}

namespace {

template <class Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError(e.code(), "'" + path.string() + "': " +
                                  std::string(e.what()).substr(to_string(e.code()).size() + 2));
  }
}

}  // namespace

Tensor<float> read_float_tensor(const std::filesystem::path& path) {
  const auto sidecar = read_json_file(sidecar_path(path));
  const auto payload = read_file(path);
  return with_path(path, [&] { return decode_float_tensor(payload, sidecar); });
}

Tensor<std::uint8_t> read_u8_tensor(const std::filesystem::path& path) {
  const auto sidecar = read_json_file(sidecar_path(path));
  const auto payload = read_file(path);
  return with_path(path, [&] { return decode_u8_tensor(payload, sidecar); });
}

void write_label_raster(AtomicWriter& writer, const std::filesystem::path& path,
                        const LabelImage& labels, const Json& extra) {
  Json meta = extra;
  meta["ignore"] = kIgnoreLabel;
  write_tensor(writer, path, labels, meta);
}

LabelImage read_label_raster(const std::filesystem::path& path) {
  auto t = read_u8_tensor(path);
  if (t.data.channels() != 1) {
    throw DataError(DataErrc::shape_mismatch,
                    "'" + path.string() + "': label raster must have a single channel");
  }
  return std::move(t.data);
}

}  // namespace terraprop::io
