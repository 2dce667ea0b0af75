#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "sgnav/error.hpp"

namespace sgnav {

// Raw little-endian (host order) field writer for the cache and checkpoint
// formats. Both formats are tied to the producing platform.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  template <typename T>
    requires std::is_trivially_copyable_v<T>
  void put(const T& value) {
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }

  template <typename T>
  void put_array(const T* data, std::size_t n) {
    put<std::uint64_t>(n);
    out_.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(T)));
  }

  void put_string(const std::string& s) { put_array(s.data(), s.size()); }

  void check() const {
    if (!out_) throw Error(ErrorCode::Io, "binary write failed");
  }

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  template <typename T>
    requires std::is_trivially_copyable_v<T>
  T get() {
    T value{};
    in_.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in_) throw Error(ErrorCode::Io, "truncated binary file");
    return value;
  }

  template <typename T>
  std::vector<T> get_array(std::uint64_t max_count = 1ull << 32) {
    const auto n = get<std::uint64_t>();
    if (n > max_count) throw Error(ErrorCode::Io, "corrupt array length in binary file");
    std::vector<T> v(n);
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
    if (!in_) throw Error(ErrorCode::Io, "truncated binary file");
    return v;
  }

  std::string get_string() {
    auto v = get_array<char>();
    return std::string(v.begin(), v.end());
  }

 private:
  std::istream& in_;
};

}  // namespace sgnav
