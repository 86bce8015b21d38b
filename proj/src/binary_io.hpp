// Copyright 2026 The RAIL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAIL_SRC_BINARY_IO_HPP_
#define RAIL_SRC_BINARY_IO_HPP_

// Little-endian encoding shared by the embedding and checkpoint formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>

#include "rail/error.hpp"
#include "rail/types.hpp"

namespace rail::detail {

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xffu));
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

class ByteWriter {
 public:
  void bytes(std::string_view raw) { buf_.append(raw); }
  void u8(std::uint8_t v) { put_le(buf_, v); }
  void u32(std::uint32_t v) { put_le(buf_, v); }
  void u64(std::uint64_t v) { put_le(buf_, v); }
  void i32(std::int32_t v) { put_le(buf_, static_cast<std::uint32_t>(v)); }
  void f64(double v) { put_le(buf_, std::bit_cast<std::uint64_t>(v)); }
  // rows, cols, then row-major f64 payload.
  void matrix(const Matrix& m);

  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

// Reads from a byte buffer; any read past the end throws BadFormat.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::string_view bytes(std::size_t n);
  std::uint8_t u8() { return get_le<std::uint8_t>(take(1)); }
  std::uint32_t u32() { return get_le<std::uint32_t>(take(4)); }
  std::uint64_t u64() { return get_le<std::uint64_t>(take(8)); }
  std::int32_t i32() { return static_cast<std::int32_t>(get_le<std::uint32_t>(take(4))); }
  double f64() { return std::bit_cast<double>(get_le<std::uint64_t>(take(8))); }
  Matrix matrix();

  bool at_end() const { return pos_ == data_.size(); }

 private:
  const unsigned char* take(std::size_t n);

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace rail::detail

#endif  // RAIL_SRC_BINARY_IO_HPP_
