#include "terraprop/io/atomic_file.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>

#include "terraprop/error.hpp"

namespace terraprop::io {
namespace {

std::atomic<unsigned> g_counter{0};

std::filesystem::path temp_sibling(const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp" + std::to_string(g_counter.fetch_add(1));
  return tmp;
}

}  // namespace

AtomicWriter::~AtomicWriter() {
  if (committed_) return;
  for (const auto& s : staged_) {
    std::error_code ec;
    std::filesystem::remove(s.temp, ec);
  }
}

void AtomicWriter::add(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  Staged s{temp_sibling(path), path};
  {
    std::ofstream out(s.temp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(DataErrc::io, "cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw DataError(DataErrc::io, "short write to '" + path.string() + "'");
  }
  staged_.push_back(std::move(s));
}

void AtomicWriter::commit() {
  for (const auto& s : staged_) {
    std::error_code ec;
    std::filesystem::rename(s.temp, s.final_path, ec);
    if (ec) {
      throw DataError(DataErrc::io,
                      "cannot move output into '" + s.final_path.string() + "': " + ec.message());
    }
  }
  committed_ = true;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  AtomicWriter writer;
  writer.add(path, bytes);
  writer.commit();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataErrc::io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace terraprop::io
