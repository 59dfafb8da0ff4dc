//
// nomenkit - SMILES/IUPAC dataset curation and evaluation toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "nomenkit/io.h"

#include <openssl/evp.h>
#include <zlib.h>

#include <unistd.h>

#include <array>
#include <atomic>
#include <fstream>
#include <memory>
#include <sstream>

#include "nomenkit/error.h"

namespace nomenkit {
namespace {

std::string to_hex(const unsigned char *data, unsigned int size) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (unsigned int i = 0; i < size; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 15];
  }
  return out;
}

struct DigestDeleter {
  void operator()(EVP_MD_CTX *ctx) const { EVP_MD_CTX_free(ctx); }
};

class Sha256 {
public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error("IoError", "SHA-256 unavailable");
    }
  }
  void update(const void *data, std::size_t size) { EVP_DigestUpdate(ctx_.get(), data, size); }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &len);
    return to_hex(md, len);
  }

private:
  std::unique_ptr<EVP_MD_CTX, DigestDeleter> ctx_;
};

}  // namespace

LineReader::LineReader(const std::filesystem::path &path) {
  if (!std::filesystem::is_regular_file(path)) throw Error("MissingFile", "no such file: " + path.string());
  file_ = gzopen(path.c_str(), "rb");
  if (file_ == nullptr) throw Error("IoError", "cannot open " + path.string());
  gzbuffer(static_cast<gzFile>(file_), 1 << 17);
}

LineReader::~LineReader() {
  gzclose(static_cast<gzFile>(file_));
}

bool LineReader::next(std::string &line) {
  line.clear();
  std::array<char, 8192> chunk;
  bool any = false;
  while (gzgets(static_cast<gzFile>(file_), chunk.data(), static_cast<int>(chunk.size())) != nullptr) {
    any = true;
    line += chunk.data();
    if (!line.empty() && line.back() == '\n') break;
  }
  if (!any) {
    int code = Z_OK;
    const char *message = gzerror(static_cast<gzFile>(file_), &code);
    if (code != Z_OK && code != Z_STREAM_END) throw Error("IoError", std::string("read failed: ") + message);
    return false;
  }
  if (!line.empty() && line.back() == '\n') line.pop_back();
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_number_;
  return true;
}

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path &path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("IoError", "write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("IoError", "cannot rename into " + path.string() + ": " + ec.message());
}

ScratchDir::ScratchDir(const std::filesystem::path &parent) {
  static std::atomic<unsigned> counter{0};
  const std::filesystem::path base = parent.empty() ? std::filesystem::temp_directory_path() : parent;
  std::error_code ec;
  for (int attempt = 0; attempt < 100; ++attempt) {
    path_ = base / ("nomenkit-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directories(path_, ec)) return;
  }
  throw Error("IoError", "cannot create scratch directory under " + base.string());
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace nomenkit
