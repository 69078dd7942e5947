#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "grfaug/warp.hpp"
#include "test_support.hpp"

using namespace grfaug;
using grfaug::testing::labeled_image;
using grfaug::testing::random_image;

namespace {

ScalarField constant(int w, int h, double v) { return ScalarField::constant(w, h, v); }

void check_all(const PixelAffineGrid& grid, const Affine& expected, double tol = 0.0) {
  for (const auto& m : grid.matrices()) {
    for (int i = 0; i < 6; ++i) CHECK(std::abs(m[i] - expected[i]) <= tol);
  }
}

// Independent oracle: full 3x3 homogeneous product by triple loop.
Affine product_oracle(const Affine& a, const Affine& b) {
  double A[3][3] = {{a[0], a[1], a[2]}, {a[3], a[4], a[5]}, {0, 0, 1}};
  double B[3][3] = {{b[0], b[1], b[2]}, {b[3], b[4], b[5]}, {0, 0, 1}};
  double C[3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) C[i][j] += A[i][k] * B[k][j];
  return {C[0][0], C[0][1], C[0][2], C[1][0], C[1][1], C[1][2]};
}

// Global transform oracle in pixel units: source = center + M (target - center) + offset.
ImageBuffer global_nearest(const ImageBuffer& in, double m11, double m12, double m21, double m22,
                           double ox_px, double oy_px) {
  const int w = in.width(), h = in.height();
  const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  ImageBuffer out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double sx = cx + m11 * (x - cx) + m12 * (y - cy) * w / h + ox_px;
      const double sy = cy + m21 * (x - cx) * h / w + m22 * (y - cy) + oy_px;
      const int ix = std::clamp(static_cast<int>(std::lround(sx)), 0, w - 1);
      const int iy = std::clamp(static_cast<int>(std::lround(sy)), 0, h - 1);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = in.at(ix, iy, c);
    }
  }
  return out;
}

constexpr SamplingPolicy kNearest{Interpolation::Nearest, Padding::EdgeClamp};

}  // namespace

TEST_CASE("build_pixel_affine matrices") {
  CHECK(build_pixel_affine(LocalRotate{constant(4, 3, 0.0)}) == PixelAffineGrid(4, 3));
  check_all(build_pixel_affine(LocalTranslate{constant(4, 3, 0.25), constant(4, 3, 0.0)}),
            {1, 0, 0.25, 0, 1, 0});
  check_all(build_pixel_affine(LocalRotate{constant(4, 3, 0.5)}), {0, -1, 0, 1, 0, 0}, 1e-15);
  check_all(build_pixel_affine(LocalScale{constant(2, 2, 0.1), constant(2, 2, -0.2)}),
            {1.1, 0, 0, 0, 0.8, 0});
  check_all(build_pixel_affine(LocalShear{constant(2, 2, 0.1), constant(2, 2, -0.2)}),
            {1, 0.1, 0, -0.2, 1, 0});
  CHECK_THROWS_AS(build_pixel_affine(LocalScale{constant(2, 2, 0.1), constant(3, 2, 0.1)}),
                  std::invalid_argument);
}

TEST_CASE("zero fields give the identity for every kind") {
  const auto z = synthesize_field({16, 12, 8.0, 0.0, 3});
  const PixelAffineGrid id(16, 12);
  CHECK(build_pixel_affine(LocalRotate{z}) == id);
  CHECK(build_pixel_affine(LocalScale{z, z}) == id);
  CHECK(build_pixel_affine(LocalShear{z, z}) == id);
  CHECK(build_pixel_affine(LocalTranslate{z, z}) == id);
}

TEST_CASE("rotation angle is bounded by pi * alpha") {
  const double alpha = 0.3;
  const auto grid = build_pixel_affine(LocalRotate{synthesize_field({32, 32, 3.0, alpha, 8})});
  double max_angle = 0.0;
  for (const auto& m : grid.matrices()) max_angle = std::max(max_angle, std::abs(std::atan2(m[3], m[0])));
  CHECK(max_angle <= std::numbers::pi * alpha + 1e-12);
  CHECK(max_angle == doctest::Approx(std::numbers::pi * alpha));
}

TEST_CASE("compose_grids") {
  const auto t1 = build_pixel_affine(LocalTranslate{constant(3, 3, 0.2), constant(3, 3, 0.0)});
  const auto t2 = build_pixel_affine(LocalTranslate{constant(3, 3, 0.15), constant(3, 3, 0.0)});

  SUBCASE("single grid is unchanged") {
    const std::vector<PixelAffineGrid> one{t1};
    CHECK(compose_grids(one) == t1);
  }
  SUBCASE("translations add") {
    const std::vector<PixelAffineGrid> two{t1, t2};
    check_all(compose_grids(two), {1, 0, 0.35, 0, 1, 0}, 1e-15);
  }
  SUBCASE("two quarter turns make a half turn") {
    const auto r = build_pixel_affine(LocalRotate{constant(3, 3, 0.5)});
    const std::vector<PixelAffineGrid> two{r, r};
    const Affine expected = product_oracle(r.at(0, 0), r.at(0, 0));
    check_all(compose_grids(two), expected, 0.0);
    check_all(compose_grids(two), {-1, 0, 0, 0, -1, 0}, 1e-15);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(compose_grids(std::vector<PixelAffineGrid>{}), std::invalid_argument);
    const std::vector<PixelAffineGrid> mismatched{PixelAffineGrid(3, 3), PixelAffineGrid(3, 4)};
    CHECK_THROWS_AS(compose_grids(mismatched), std::invalid_argument);
  }
}

TEST_CASE("composition matches the brute-force product and is associative") {
  const int w = 5, h = 4;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<PixelAffineGrid> g;
    g.push_back(build_pixel_affine(LocalRotate{synthesize_field({w, h, 2.0, 0.4, seed})}));
    g.push_back(build_pixel_affine(
        LocalShear{synthesize_field({w, h, 2.0, 0.3, seed + 100}), synthesize_field({w, h, 2.0, 0.3, seed + 200})}));
    g.push_back(build_pixel_affine(
        LocalTranslate{synthesize_field({w, h, 2.0, 0.5, seed + 300}), synthesize_field({w, h, 2.0, 0.5, seed + 400})}));

    const auto abc = compose_grids(g);
    const std::vector<PixelAffineGrid> ab_list{g[0], g[1]};
    const std::vector<PixelAffineGrid> bc_list{g[1], g[2]};
    const std::vector<PixelAffineGrid> left{compose_grids(ab_list), g[2]};
    const std::vector<PixelAffineGrid> right{g[0], compose_grids(bc_list)};
    const auto l = compose_grids(left);
    const auto r = compose_grids(right);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Affine oracle = product_oracle(product_oracle(g[0].at(x, y), g[1].at(x, y)), g[2].at(x, y));
        for (int i = 0; i < 6; ++i) {
          CHECK(abc.at(x, y)[i] == doctest::Approx(oracle[i]).epsilon(1e-12));
          CHECK(l.at(x, y)[i] == doctest::Approx(r.at(x, y)[i]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("identity grid reproduces the image bit-exactly") {
  for (auto [w, h] : {std::pair{8, 8}, std::pair{13, 7}, std::pair{224, 224}}) {
    const auto img = random_image(w, h, 17);
    for (auto interp : {Interpolation::Bilinear, Interpolation::Nearest}) {
      for (auto pad : {Padding::EdgeClamp, Padding::ZeroFill}) {
        CHECK(apply_pixel_affine(img, PixelAffineGrid(w, h), {interp, pad}) == img);
      }
    }
  }
}

TEST_CASE("constant translate by two pixels is a global shift") {
  const auto img = labeled_image(8, 8);
  // Two pixels of an 8-pixel axis spanning [-1, 1].
  const auto grid = build_pixel_affine(LocalTranslate{constant(8, 8, 0.5), constant(8, 8, 0.0)});
  ImageBuffer expected(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 3; ++c) expected.at(x, y, c) = img.at(std::min(x + 2, 7), y, c);
  CHECK(apply_pixel_affine(img, grid, kNearest) == expected);
  CHECK(apply_pixel_affine(img, grid, {Interpolation::Bilinear, Padding::EdgeClamp}) == expected);

  ImageBuffer zero_expected = expected;
  for (int y = 0; y < 8; ++y)
    for (int x = 6; x < 8; ++x)
      for (int c = 0; c < 3; ++c) zero_expected.at(x, y, c) = 0.0f;
  CHECK(apply_pixel_affine(img, grid, {Interpolation::Nearest, Padding::ZeroFill}) == zero_expected);
}

TEST_CASE("constant rotate by a quarter turn permutes pixels") {
  const auto img = labeled_image(8, 8);
  const auto grid = build_pixel_affine(LocalRotate{constant(8, 8, 0.5)});
  ImageBuffer expected(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 3; ++c) expected.at(x, y, c) = img.at(7 - y, x, c);
  CHECK(apply_pixel_affine(img, grid, kNearest) == expected);
}

TEST_CASE("constant scale and shear match global transforms") {
  const auto img = labeled_image(8, 8);
  const auto scale = build_pixel_affine(LocalScale{constant(8, 8, 0.5), constant(8, 8, -0.25)});
  CHECK(apply_pixel_affine(img, scale, kNearest) == global_nearest(img, 1.5, 0, 0, 0.75, 0, 0));
  const auto shear = build_pixel_affine(LocalShear{constant(8, 8, 0.25), constant(8, 8, 0.0)});
  CHECK(apply_pixel_affine(img, shear, kNearest) == global_nearest(img, 1, 0.25, 0, 1, 0, 0));
}

TEST_CASE("bilinear translate by half a pixel averages neighbours") {
  ImageBuffer img(4, 1);
  for (int x = 0; x < 4; ++x)
    for (int c = 0; c < 3; ++c) img.at(x, 0, c) = 0.25f * static_cast<float>(x);
  // Half a pixel on a 4-pixel axis is 0.25 normalized units.
  const auto grid = build_pixel_affine(LocalTranslate{constant(4, 1, 0.25), constant(4, 1, 0.0)});
  const auto out = apply_pixel_affine(img, grid);
  CHECK(out.at(0, 0, 0) == doctest::Approx(0.125));
  CHECK(out.at(2, 0, 1) == doctest::Approx(0.625));
  CHECK(out.at(3, 0, 2) == doctest::Approx(0.75));
}

TEST_CASE("warped output stays in range and keeps its shape") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto img = random_image(23, 17, seed);
    const auto gx = synthesize_field({23, 17, 3.0, 1.0, seed});
    const auto gy = synthesize_field({23, 17, 3.0, 1.0, seed + 50});
    for (auto pad : {Padding::EdgeClamp, Padding::ZeroFill}) {
      const auto out = apply_pixel_affine(img, build_pixel_affine(LocalScale{gx, gy}),
                                          {Interpolation::Bilinear, pad});
      CHECK(out.width() == 23);
      CHECK(out.height() == 17);
      CHECK(std::all_of(out.data().begin(), out.data().end(), [](float v) { return v >= 0.0f && v <= 1.0f; }));
    }
  }
}

TEST_CASE("apply_pixel_affine errors") {
  const auto img = random_image(4, 4, 1);
  CHECK_THROWS_AS(apply_pixel_affine(img, PixelAffineGrid(4, 5)), std::invalid_argument);
  PixelAffineGrid bad(4, 4);
  bad.at(1, 2)[0] = std::nan("");
  CHECK_THROWS_AS(apply_pixel_affine(img, bad), std::invalid_argument);
  CHECK_THROWS_AS(PixelAffineGrid(2, 2, std::vector<Affine>(3, kIdentityAffine)), std::invalid_argument);
}
