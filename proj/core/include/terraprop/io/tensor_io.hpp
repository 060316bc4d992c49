#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "terraprop/io/atomic_file.hpp"
#include "terraprop/raster.hpp"

namespace terraprop::io {

using Json = nlohmann::ordered_json;

/// Raw row-major little-endian payload plus a JSON sidecar at `<path>.json`:
///   {"dtype": "float32" | "uint8", "shape": [H, W] or [H, W, C], ...extra}
/// Extra sidecar members (class names, parameter ids, units) pass through.
template <class T>
struct Tensor {
  Raster<T> data;
  Json sidecar;
};

std::filesystem::path sidecar_path(const std::filesystem::path& payload);

/// Sidecar for a raster: dtype and shape followed by the members of `extra`.
Json make_sidecar(std::string_view dtype, int height, int width, int channels,
                  const Json& extra = Json::object(), bool drop_unit_channel = false);

std::string encode_payload(const Raster<float>& raster);
std::string encode_payload(const Raster<std::uint8_t>& raster);

/// Validates the sidecar (dtype, shape) against the payload and decodes it.
/// Errors: unknown_dtype, payload_length_mismatch, truncated_file, malformed.
Tensor<float> decode_float_tensor(std::string_view payload, const Json& sidecar);
Tensor<std::uint8_t> decode_u8_tensor(std::string_view payload, const Json& sidecar);

void write_tensor(AtomicWriter& writer, const std::filesystem::path& path,
                  const Raster<float>& raster, const Json& extra = Json::object());
void write_tensor(AtomicWriter& writer, const std::filesystem::path& path,
                  const Raster<std::uint8_t>& raster, const Json& extra = Json::object());

Tensor<float> read_float_tensor(const std::filesystem::path& path);
Tensor<std::uint8_t> read_u8_tensor(const std::filesystem::path& path);

/// 8-bit label raster ([H, W] uint8, "ignore": 255 recorded in the sidecar).
void write_label_raster(AtomicWriter& writer, const std::filesystem::path& path,
                        const LabelImage& labels, const Json& extra = Json::object());
LabelImage read_label_raster(const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);

}  // namespace terraprop::io
