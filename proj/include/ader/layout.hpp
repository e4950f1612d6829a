#ifndef ADER_LAYOUT_HPP
#define ADER_LAYOUT_HPP

#include <cstddef>
#include <iosfwd>

#include "ader/util.hpp"

namespace ader {

// Smallest multiple of v that is >= n.
inline int pad_extent(int n, int v) { return (n + v - 1) / v * v; }

enum class LayoutKind { aos, aosoa };

// Tensor dimensions, fastest-varying last in the AoS tuple (z,y,x,q).
enum class Dim { z, y, x, q };

// Linearization of a rank-4 element tensor (space^3 x quantity).
//
//   AoS:   (k3,k2,k1,s) -> ((k3*n + k2)*n + k1)*m_pad + s   quantity fastest
//   AoSoA: (k3,k2,s,k1) -> ((k3*n + k2)*m + s)*n_pad  + k1  x fastest
//
// The fastest dimension is zero-padded to a multiple of vec_width so every
// unit-stride row starts aligned; padding elements stay exactly zero.
struct LayoutSpec {
  LayoutKind kind = LayoutKind::aos;
  int n = 0;          // nodes per spatial dimension
  int m = 0;          // quantities
  int vec_width = 8;  // SIMD lanes in doubles
  int m_pad = 0;      // padded quantity extent (AoS)
  int n_pad = 0;      // padded x extent (AoSoA)
  int alignment_bytes = 64;

  static LayoutSpec aos(int n, int m, int vec_width);
  static LayoutSpec aosoa(int n, int m, int vec_width);

  std::size_t size() const {
    if (kind == LayoutKind::aos)
      return static_cast<std::size_t>(n) * n * n * m_pad;
    return static_cast<std::size_t>(n) * n * m * n_pad;
  }

  std::size_t index(int k3, int k2, int k1, int s) const {
    if (kind == LayoutKind::aos)
      return (static_cast<std::size_t>(k3) * n + k2) * n * m_pad +
             static_cast<std::size_t>(k1) * m_pad + s;
    return (static_cast<std::size_t>(k3) * n + k2) * m * n_pad +
           static_cast<std::size_t>(s) * n_pad + k1;
  }

  bool compatible(const LayoutSpec& o) const {
    return n == o.n && m == o.m && vec_width == o.vec_width;
  }
};

// Aligned, zero-initialized storage for one element's degrees of freedom.
// Exclusively owned by one worker at a time; copies are deep.
class ElementTensor {
public:
  explicit ElementTensor(const LayoutSpec& spec)
      : spec_(spec), data_(spec.size(), spec.alignment_bytes) {}

  const LayoutSpec& spec() const { return spec_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  double& at(int k3, int k2, int k1, int s) { return data_[spec_.index(k3, k2, k1, s)]; }
  double at(int k3, int k2, int k1, int s) const { return data_[spec_.index(k3, k2, k1, s)]; }

  void fill_zero();

  // true iff every padding element is exactly 0.0
  bool padding_is_zero() const;

  // one "(k3,k2,k1,s) = value" line per logical entry, shortest-round-trip
  // formatted, for diffing against an oracle
  void dump(std::ostream& os) const;

private:
  LayoutSpec spec_;
  AlignedBuffer data_;
};

bool padding_is_zero(const LayoutSpec& spec, const double* data);

// A matrix view into a tensor buffer: entry (r,c) lives at
// offset + r*slice_stride + c. The stride may exceed the logical row length,
// which is how padded rows and non-contiguous tensor slices are expressed.
struct SliceDescriptor {
  std::size_t offset = 0;
  std::size_t slice_stride = 0;
  int rows = 0;
  int cols = 0;
};

// Matrix slice with rows along row_dim and columns along the layout's
// unit-stride dimension (q for AoS, x for AoSoA); any other column request
// cannot be represented and is rejected. fixed_a/fixed_b are the indices of
// the two non-participating dimensions in (z,y,x,q) order.
SliceDescriptor slice(const LayoutSpec& spec, Dim row_dim, Dim col_dim, int fixed_a, int fixed_b);

// Slice whose columns fuse the two fastest dimensions into one contiguous
// run (AoS: (x,q) of length n*m_pad; AoSoA: (q,x) of length m*n_pad).
// row_dim is y or z; `fixed` is the index of the remaining spatial
// dimension. Requesting a non-adjacent pair is an error.
SliceDescriptor fused_slice(const LayoutSpec& spec, Dim row_dim, Dim fuse_slow, Dim fuse_fast,
                            int fixed);

inline SliceDescriptor slice(const ElementTensor& t, Dim row_dim, Dim col_dim, int fixed_a,
                             int fixed_b) {
  return slice(t.spec(), row_dim, col_dim, fixed_a, fixed_b);
}
inline SliceDescriptor fused_slice(const ElementTensor& t, Dim row_dim, Dim fuse_slow,
                                   Dim fuse_fast, int fixed) {
  return fused_slice(t.spec(), row_dim, fuse_slow, fuse_fast, fixed);
}

// Value-preserving layout transposes. Destination padding is zeroed.
void convert_aos_to_aosoa(const LayoutSpec& src_spec, const double* src,
                          const LayoutSpec& dst_spec, double* dst);
void convert_aosoa_to_aos(const LayoutSpec& src_spec, const double* src,
                          const LayoutSpec& dst_spec, double* dst);

ElementTensor aos_to_aosoa(const ElementTensor& src);
ElementTensor aosoa_to_aos(const ElementTensor& src);

}  // namespace ader

#endif
