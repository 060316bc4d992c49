#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace terraprop::io {

/// Collects output files and publishes them together: every file is written
/// to a temporary sibling first and renamed into place only by commit(). If
/// the writer is destroyed without commit() the temporaries are removed, so a
/// failed run never leaves partial outputs behind.
class AtomicWriter {
 public:
  AtomicWriter() = default;
  AtomicWriter(const AtomicWriter&) = delete;
  AtomicWriter& operator=(const AtomicWriter&) = delete;
  ~AtomicWriter();

  void add(const std::filesystem::path& path, std::string_view bytes);
  void commit();

 private:
  struct Staged {
    std::filesystem::path temp;
    std::filesystem::path final_path;
  };
  std::vector<Staged> staged_;
  bool committed_ = false;
};

/// Single-file convenience wrapper around AtomicWriter.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Whole file as bytes; DataError(io) when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace terraprop::io
