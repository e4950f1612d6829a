#include "ader/layout.hpp"

#include <cstring>
#include <ostream>
#include <stdexcept>

namespace ader {

LayoutSpec LayoutSpec::aos(int n, int m, int vec_width) {
  if (n < 1 || m < 1 || vec_width < 1)
    throw std::invalid_argument("LayoutSpec: extents and vec_width must be positive");
  LayoutSpec s;
  s.kind = LayoutKind::aos;
  s.n = n;
  s.m = m;
  s.vec_width = vec_width;
  s.m_pad = pad_extent(m, vec_width);
  s.n_pad = n;
  s.alignment_bytes = vec_width * static_cast<int>(sizeof(double));
  return s;
}

LayoutSpec LayoutSpec::aosoa(int n, int m, int vec_width) {
  LayoutSpec s = aos(n, m, vec_width);
  s.kind = LayoutKind::aosoa;
  s.m_pad = m;
  s.n_pad = pad_extent(n, vec_width);
  return s;
}

void ElementTensor::fill_zero() { std::memset(data_.data(), 0, data_.size() * sizeof(double)); }

bool padding_is_zero(const LayoutSpec& spec, const double* data) {
  const int n = spec.n;
  if (spec.kind == LayoutKind::aos) {
    for (int node = 0; node < n * n * n; ++node)
      for (int s = spec.m; s < spec.m_pad; ++s)
        if (data[static_cast<std::size_t>(node) * spec.m_pad + s] != 0.0) return false;
  } else {
    for (int line = 0; line < n * n * spec.m; ++line)
      for (int k1 = n; k1 < spec.n_pad; ++k1)
        if (data[static_cast<std::size_t>(line) * spec.n_pad + k1] != 0.0) return false;
  }
  return true;
}

bool ElementTensor::padding_is_zero() const { return ader::padding_is_zero(spec_, data()); }

void ElementTensor::dump(std::ostream& os) const {
  const int n = spec_.n;
  for (int k3 = 0; k3 < n; ++k3)
    for (int k2 = 0; k2 < n; ++k2)
      for (int k1 = 0; k1 < n; ++k1)
        for (int s = 0; s < spec_.m; ++s)
          os << '(' << k3 << ',' << k2 << ',' << k1 << ',' << s
             << ") = " << format_double(at(k3, k2, k1, s)) << '\n';
}

namespace {

void check_spatial_index(const LayoutSpec& spec, int i, const char* what) {
  if (i < 0 || i >= spec.n) throw std::invalid_argument(std::string("slice: ") + what + " out of range");
}

}  // namespace

SliceDescriptor slice(const LayoutSpec& spec, Dim row_dim, Dim col_dim, int fixed_a, int fixed_b) {
  const Dim fastest = spec.kind == LayoutKind::aos ? Dim::q : Dim::x;
  if (col_dim != fastest)
    throw std::invalid_argument("slice: column dimension must be the unit-stride dimension");
  if (row_dim == col_dim) throw std::invalid_argument("slice: row and column dimensions coincide");

  const int n = spec.n;
  SliceDescriptor d;
  if (spec.kind == LayoutKind::aos) {
    const std::size_t sx = spec.m_pad, sy = static_cast<std::size_t>(n) * spec.m_pad,
                      sz = static_cast<std::size_t>(n) * n * spec.m_pad;
    d.cols = spec.m_pad;
    d.rows = n;
    switch (row_dim) {
      case Dim::x:  // fixed (k3,k2)
        check_spatial_index(spec, fixed_a, "k3");
        check_spatial_index(spec, fixed_b, "k2");
        d.slice_stride = sx;
        d.offset = fixed_a * sz + fixed_b * sy;
        break;
      case Dim::y:  // fixed (k3,k1)
        check_spatial_index(spec, fixed_a, "k3");
        check_spatial_index(spec, fixed_b, "k1");
        d.slice_stride = sy;
        d.offset = fixed_a * sz + fixed_b * sx;
        break;
      case Dim::z:  // fixed (k2,k1)
        check_spatial_index(spec, fixed_a, "k2");
        check_spatial_index(spec, fixed_b, "k1");
        d.slice_stride = sz;
        d.offset = fixed_a * sy + fixed_b * sx;
        break;
      default:
        throw std::invalid_argument("slice: bad row dimension");
    }
  } else {
    const std::size_t sq = spec.n_pad, sy = static_cast<std::size_t>(spec.m) * spec.n_pad,
                      sz = static_cast<std::size_t>(n) * spec.m * spec.n_pad;
    d.cols = spec.n_pad;
    switch (row_dim) {
      case Dim::q:  // fixed (k3,k2)
        check_spatial_index(spec, fixed_a, "k3");
        check_spatial_index(spec, fixed_b, "k2");
        d.rows = spec.m;
        d.slice_stride = sq;
        d.offset = fixed_a * sz + fixed_b * sy;
        break;
      case Dim::y:  // fixed (k3,s)
        check_spatial_index(spec, fixed_a, "k3");
        if (fixed_b < 0 || fixed_b >= spec.m) throw std::invalid_argument("slice: s out of range");
        d.rows = n;
        d.slice_stride = sy;
        d.offset = fixed_a * sz + fixed_b * sq;
        break;
      case Dim::z:  // fixed (k2,s)
        check_spatial_index(spec, fixed_a, "k2");
        if (fixed_b < 0 || fixed_b >= spec.m) throw std::invalid_argument("slice: s out of range");
        d.rows = n;
        d.slice_stride = sz;
        d.offset = fixed_a * sy + fixed_b * sq;
        break;
      default:
        throw std::invalid_argument("slice: bad row dimension");
    }
  }
  // every addressed entry must stay inside the buffer
  std::size_t last = d.offset + static_cast<std::size_t>(d.rows - 1) * d.slice_stride + d.cols - 1;
  if (last >= spec.size()) throw std::invalid_argument("slice: descriptor exceeds buffer");
  return d;
}

SliceDescriptor fused_slice(const LayoutSpec& spec, Dim row_dim, Dim fuse_slow, Dim fuse_fast,
                            int fixed) {
  const bool aos = spec.kind == LayoutKind::aos;
  const Dim want_slow = aos ? Dim::x : Dim::q;
  const Dim want_fast = aos ? Dim::q : Dim::x;
  if (fuse_slow != want_slow || fuse_fast != want_fast)
    throw std::invalid_argument("fused_slice: dimensions are not adjacent in this layout");
  if (row_dim != Dim::y && row_dim != Dim::z)
    throw std::invalid_argument("fused_slice: row dimension must be y or z");

  const int n = spec.n;
  const std::size_t run = aos ? static_cast<std::size_t>(n) * spec.m_pad
                              : static_cast<std::size_t>(spec.m) * spec.n_pad;
  check_spatial_index(spec, fixed, "fixed index");

  SliceDescriptor d;
  d.rows = n;
  d.cols = static_cast<int>(run);
  if (row_dim == Dim::y) {  // fixed k3
    d.slice_stride = run;
    d.offset = static_cast<std::size_t>(fixed) * n * run;
  } else {  // rows k3, fixed k2
    d.slice_stride = static_cast<std::size_t>(n) * run;
    d.offset = static_cast<std::size_t>(fixed) * run;
  }
  std::size_t last = d.offset + static_cast<std::size_t>(d.rows - 1) * d.slice_stride + d.cols - 1;
  if (last >= spec.size()) throw std::invalid_argument("fused_slice: descriptor exceeds buffer");
  return d;
}

void convert_aos_to_aosoa(const LayoutSpec& src_spec, const double* src,
                          const LayoutSpec& dst_spec, double* dst) {
  if (src_spec.kind != LayoutKind::aos || dst_spec.kind != LayoutKind::aosoa ||
      !src_spec.compatible(dst_spec))
    throw std::invalid_argument("convert_aos_to_aosoa: incompatible layouts");
  std::memset(dst, 0, dst_spec.size() * sizeof(double));
  const int n = src_spec.n, m = src_spec.m;
  for (int k3 = 0; k3 < n; ++k3)
    for (int k2 = 0; k2 < n; ++k2)
      for (int k1 = 0; k1 < n; ++k1)
        for (int s = 0; s < m; ++s)
          dst[dst_spec.index(k3, k2, k1, s)] = src[src_spec.index(k3, k2, k1, s)];
}

void convert_aosoa_to_aos(const LayoutSpec& src_spec, const double* src,
                          const LayoutSpec& dst_spec, double* dst) {
  if (src_spec.kind != LayoutKind::aosoa || dst_spec.kind != LayoutKind::aos ||
      !src_spec.compatible(dst_spec))
    throw std::invalid_argument("convert_aosoa_to_aos: incompatible layouts");
  std::memset(dst, 0, dst_spec.size() * sizeof(double));
  const int n = src_spec.n, m = src_spec.m;
  for (int k3 = 0; k3 < n; ++k3)
    for (int k2 = 0; k2 < n; ++k2)
      for (int k1 = 0; k1 < n; ++k1)
        for (int s = 0; s < m; ++s)
          dst[dst_spec.index(k3, k2, k1, s)] = src[src_spec.index(k3, k2, k1, s)];
}

ElementTensor aos_to_aosoa(const ElementTensor& src) {
  LayoutSpec dst_spec = LayoutSpec::aosoa(src.spec().n, src.spec().m, src.spec().vec_width);
  ElementTensor dst(dst_spec);
  convert_aos_to_aosoa(src.spec(), src.data(), dst_spec, dst.data());
  return dst;
}

ElementTensor aosoa_to_aos(const ElementTensor& src) {
  LayoutSpec dst_spec = LayoutSpec::aos(src.spec().n, src.spec().m, src.spec().vec_width);
  ElementTensor dst(dst_spec);
  convert_aosoa_to_aos(src.spec(), src.data(), dst_spec, dst.data());
  return dst;
}

}  // namespace ader
