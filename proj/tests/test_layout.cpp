#include <cstring>
#include <sstream>

#include "ader/layout.hpp"
#include "ader/util.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace ader;

TEST_CASE("pad_extent") {
  CHECK(pad_extent(6, 8) == 8);
  CHECK(pad_extent(8, 8) == 8);   // no padding required
  CHECK(pad_extent(9, 8) == 16);  // the expensive case
  CHECK(pad_extent(1, 1) == 1);
  CHECK(pad_extent(12, 4) == 12);
}

TEST_CASE("index formulas match the documented linearizations") {
  // n=2, m=3, vec_width=4: element (k3,k2,k1,s)=(1,0,1,2)
  LayoutSpec aos = LayoutSpec::aos(2, 3, 4);
  LayoutSpec soa = LayoutSpec::aosoa(2, 3, 4);
  CHECK(aos.m_pad == 4);
  CHECK(soa.n_pad == 4);
  CHECK(aos.index(1, 0, 1, 2) == 22);
  CHECK(soa.index(1, 0, 1, 2) == 33);
}

TEST_CASE("both linearizations are bijections onto distinct offsets") {
  for (int n : {1, 2, 3, 4})
    for (int m : {1, 2, 3, 5}) {
      for (LayoutKind kind : {LayoutKind::aos, LayoutKind::aosoa}) {
        LayoutSpec sp = kind == LayoutKind::aos ? LayoutSpec::aos(n, m, 4)
                                                : LayoutSpec::aosoa(n, m, 4);
        std::vector<int> hits(sp.size(), 0);
        for (int k3 = 0; k3 < n; ++k3)
          for (int k2 = 0; k2 < n; ++k2)
            for (int k1 = 0; k1 < n; ++k1)
              for (int s = 0; s < m; ++s) hits[sp.index(k3, k2, k1, s)] += 1;
        for (int h : hits) CHECK(h <= 1);
        std::size_t used = 0;
        for (int h : hits) used += h;
        CHECK(used == static_cast<std::size_t>(n) * n * n * m);
      }
    }
}

TEST_CASE("round trip aos -> aosoa -> aos is bit-exact") {
  SplitMix64 rng(11);
  for (int n : {1, 3, 6, 9}) {
    for (int m : {1, 4, 9}) {
      ElementTensor src(LayoutSpec::aos(n, m, 8));
      oracles::fill_random(src, rng);
      ElementTensor mid = aos_to_aosoa(src);
      CHECK(mid.padding_is_zero());
      ElementTensor back = aosoa_to_aos(mid);
      CHECK(std::memcmp(src.data(), back.data(), src.size() * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("remap agrees with a naive nested-loop oracle") {
  SplitMix64 rng(12);
  const int n = 3, m = 5;
  ElementTensor src(LayoutSpec::aos(n, m, 4));
  oracles::fill_random(src, rng);
  ElementTensor dst = aos_to_aosoa(src);
  for (int k3 = 0; k3 < n; ++k3)
    for (int k2 = 0; k2 < n; ++k2)
      for (int k1 = 0; k1 < n; ++k1)
        for (int s = 0; s < m; ++s) CHECK(dst.at(k3, k2, k1, s) == src.at(k3, k2, k1, s));
}

TEST_CASE("constant tensor maps to constant tensor with zero padding") {
  LayoutSpec sp = LayoutSpec::aos(4, 3, 8);
  ElementTensor src(sp);
  for (int k3 = 0; k3 < 4; ++k3)
    for (int k2 = 0; k2 < 4; ++k2)
      for (int k1 = 0; k1 < 4; ++k1)
        for (int s = 0; s < 3; ++s) src.at(k3, k2, k1, s) = 2.5;
  ElementTensor dst = aos_to_aosoa(src);
  CHECK(dst.padding_is_zero());
  for (int k3 = 0; k3 < 4; ++k3)
    for (int k1 = 0; k1 < 4; ++k1) CHECK(dst.at(k3, 0, k1, 2) == 2.5);
}

TEST_CASE("conversion rejects mismatched specs") {
  ElementTensor a(LayoutSpec::aos(3, 4, 8));
  LayoutSpec wrong = LayoutSpec::aosoa(3, 5, 8);
  std::vector<double> buf(wrong.size());
  CHECK_THROWS(convert_aos_to_aosoa(a.spec(), a.data(), wrong, buf.data()));
}

TEST_CASE("x-slice of an AoS tensor is offset-only and contiguous") {
  LayoutSpec sp = LayoutSpec::aos(4, 5, 8);
  SliceDescriptor sl = slice(sp, Dim::x, Dim::q, 2, 1);  // fixed k3=2, k2=1
  CHECK(sl.slice_stride == static_cast<std::size_t>(sp.m_pad));
  CHECK(sl.cols == sp.m_pad);
  CHECK(sl.rows == 4);
  CHECK(sl.offset == sp.index(2, 1, 0, 0));
}

TEST_CASE("fused slice reproduces the hard-coded n=6 m=12 configuration") {
  // quantity padded to 12 at vec_width 4, so the fused (x,q) run is 72 and
  // the y-rows stride is 72 with k3 blocks of 432
  LayoutSpec sp = LayoutSpec::aos(6, 12, 4);
  CHECK(sp.m_pad == 12);
  for (int k3 = 0; k3 < 6; ++k3) {
    SliceDescriptor sl = fused_slice(sp, Dim::y, Dim::x, Dim::q, k3);
    CHECK(sl.cols == 72);
    CHECK(sl.slice_stride == 72);
    CHECK(sl.offset == static_cast<std::size_t>(k3) * 432);
    CHECK(sl.rows == 6);
  }
}

TEST_CASE("fused slice on AoSoA with n_pad == n covers m*n columns") {
  LayoutSpec sp = LayoutSpec::aosoa(8, 5, 8);  // pad(8,8) == 8
  CHECK(sp.n_pad == 8);
  SliceDescriptor sl = fused_slice(sp, Dim::y, Dim::q, Dim::x, 0);
  CHECK(sl.cols == 5 * 8);
}

TEST_CASE("slice gather equivalence against the naive gather") {
  SplitMix64 rng(13);
  LayoutSpec sp = LayoutSpec::aos(5, 7, 8);
  ElementTensor t(sp);
  oracles::fill_random(t, rng);

  SUBCASE("y-rows quantity-columns slice") {
    SliceDescriptor sl = slice(sp, Dim::y, Dim::q, 3, 2);  // fixed k3=3, k1=2
    for (int r = 0; r < sl.rows; ++r)
      for (int c = 0; c < sp.m; ++c)
        CHECK(t.data()[sl.offset + r * sl.slice_stride + c] == t.at(3, r, 2, c));
  }
  SUBCASE("z-rows fused columns slice") {
    SliceDescriptor sl = fused_slice(sp, Dim::z, Dim::x, Dim::q, 1);  // fixed k2=1
    for (int r = 0; r < sl.rows; ++r)
      for (int c = 0; c < sl.cols; ++c) {
        const int k1 = c / sp.m_pad, s = c % sp.m_pad;
        const double want = s < sp.m ? t.at(r, 1, k1, s) : 0.0;
        CHECK(t.data()[sl.offset + r * sl.slice_stride + c] == want);
      }
  }
  SUBCASE("AoSoA quantity-rows x-columns slice") {
    ElementTensor ts = aos_to_aosoa(t);
    SliceDescriptor sl = slice(ts.spec(), Dim::q, Dim::x, 4, 0);  // fixed k3=4, k2=0
    for (int s = 0; s < sp.m; ++s)
      for (int k1 = 0; k1 < sp.n; ++k1)
        CHECK(ts.data()[sl.offset + s * sl.slice_stride + k1] == t.at(4, 0, k1, s));
  }
}

TEST_CASE("slice errors") {
  LayoutSpec aos = LayoutSpec::aos(4, 3, 8);
  LayoutSpec soa = LayoutSpec::aosoa(4, 3, 8);
  // column dimension must be unit-stride
  CHECK_THROWS(slice(aos, Dim::q, Dim::x, 0, 0));
  CHECK_THROWS(slice(soa, Dim::y, Dim::q, 0, 0));
  // non-adjacent fusion requests
  CHECK_THROWS(fused_slice(aos, Dim::z, Dim::y, Dim::q, 0));
  CHECK_THROWS(fused_slice(soa, Dim::z, Dim::x, Dim::q, 0));
  // out-of-range fixed index
  CHECK_THROWS(slice(aos, Dim::x, Dim::q, 4, 0));
}

TEST_CASE("dump writes shortest round-trip decimal lines") {
  ElementTensor t(LayoutSpec::aos(1, 2, 4));
  t.at(0, 0, 0, 0) = 0.1;
  t.at(0, 0, 0, 1) = -3.0;
  std::ostringstream os;
  t.dump(os);
  CHECK(os.str() == "(0,0,0,0) = 0.1\n(0,0,0,1) = -3\n");
}

TEST_CASE("tensor buffers are aligned to vec_width lanes") {
  for (int vw : {4, 8}) {
    ElementTensor t(LayoutSpec::aos(3, 5, vw));
    CHECK(reinterpret_cast<std::uintptr_t>(t.data()) % (vw * sizeof(double)) == 0);
  }
}
