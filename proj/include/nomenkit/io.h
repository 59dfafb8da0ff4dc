//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#ifndef NOMENKIT_IO_H_
#define NOMENKIT_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace nomenkit {

// Reads lines from a plain or gzip-compressed file. Line terminators (\n and
// a preceding \r) are stripped.
class LineReader {
public:
  explicit LineReader(const std::filesystem::path &path);
  ~LineReader();
  LineReader(const LineReader &) = delete;
  LineReader &operator=(const LineReader &) = delete;

  bool next(std::string &line);
  // 1-based number of the line last returned.
  std::uint64_t line_number() const { return line_number_; }

private:
  void *file_;
  std::string buffer_;
  std::uint64_t line_number_ = 0;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path &path);

std::string read_text_file(const std::filesystem::path &path);
// Writes through a temporary sibling and renames, so readers never see a
// partial file.
void write_text_file(const std::filesystem::path &path, std::string_view content);

// Private scratch directory, created under `parent` (the system temp dir
// when empty) and removed with its contents on destruction.
class ScratchDir {
public:
  explicit ScratchDir(const std::filesystem::path &parent = {});
  ~ScratchDir();
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

}  // namespace nomenkit

#endif  // NOMENKIT_IO_H_
