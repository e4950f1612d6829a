#ifndef ADER_UTIL_HPP
#define ADER_UTIL_HPP

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

namespace ader {

// Heap buffer of doubles with a fixed alignment, zero-filled on construction.
class AlignedBuffer {
public:
  AlignedBuffer() = default;

  AlignedBuffer(std::size_t count, std::size_t alignment_bytes)
      : size_(count), alignment_(alignment_bytes) {
    if (alignment_ < alignof(double)) alignment_ = alignof(double);
    if (count == 0) return;
    // std::aligned_alloc wants the byte size to be a multiple of the alignment
    std::size_t bytes = count * sizeof(double);
    bytes = (bytes + alignment_ - 1) / alignment_ * alignment_;
    data_ = static_cast<double*>(std::aligned_alloc(alignment_, bytes));
    if (!data_) throw std::bad_alloc();
    std::memset(data_, 0, bytes);
  }

  AlignedBuffer(const AlignedBuffer& other) : AlignedBuffer(other.size_, other.alignment_) {
    if (size_ > 0) std::memcpy(data_, other.data_, size_ * sizeof(double));
  }

  AlignedBuffer(AlignedBuffer&& other) noexcept
      : data_(other.data_), size_(other.size_), alignment_(other.alignment_) {
    other.data_ = nullptr;
    other.size_ = 0;
  }

  AlignedBuffer& operator=(AlignedBuffer other) noexcept {
    swap(other);
    return *this;
  }

  ~AlignedBuffer() { std::free(data_); }

  void swap(AlignedBuffer& other) noexcept {
    std::swap(data_, other.data_);
    std::swap(size_, other.size_);
    std::swap(alignment_, other.alignment_);
  }

  double* data() { return data_; }
  const double* data() const { return data_; }
  std::size_t size() const { return size_; }
  std::size_t alignment() const { return alignment_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

private:
  double* data_ = nullptr;
  std::size_t size_ = 0;
  std::size_t alignment_ = alignof(double);
};

// SplitMix64 (Steele, Lea, Flood 2014). One 64-bit word of state; the output
// sequence for a given seed is fixed, which keeps randomized runs
// reproducible across platforms and implementations.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [-1, 1]
  double next_symmetric() {
    return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
  }

private:
  std::uint64_t state_;
};

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace ader

#endif
