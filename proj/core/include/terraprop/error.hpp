#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace terraprop {

/// Category of a data error. Every codec failure maps onto exactly one of
/// these so callers (and the CLI) can tell them apart without parsing text.
enum class DataErrc {
  io,                       // file cannot be opened / written
  truncated_file,           // fewer bytes than the header or sidecar promises
  payload_length_mismatch,  // sidecar shape disagrees with payload size
  unknown_dtype,
  missing_column,
  malformed,                // unparsable field, bad JSON, bad magic number
  shape_mismatch,           // two inputs that must agree in shape do not
  invalid_value,            // value parsed fine but violates a domain invariant
  no_scored_pixels,
};

std::string_view to_string(DataErrc code) noexcept;

/// Raised for bad input data: unreadable files, malformed records, values
/// outside their domain. Preconditions violated by library callers use
/// std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  DataError(DataErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] DataErrc code() const noexcept { return code_; }

 private:
  DataErrc code_;
};

}  // namespace terraprop
