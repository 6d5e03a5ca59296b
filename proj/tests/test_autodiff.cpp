#include <doctest.h>

#include <cmath>

#include "lfhybrid/blocks.hpp"
#include "lfhybrid/convert.hpp"
#include "lfhybrid/grad_check.hpp"
#include "lfhybrid/graph.hpp"
#include "lfhybrid/resample.hpp"
#include "support/oracles.hpp"

using namespace lfhybrid;

TEST_CASE("conv2d identity kernel reproduces the input") {
  Rng rng(1);
  Tensor<float> x = oracle::random_tensor<float>(2, 5, 6, rng);
  Tensor<float> w(2, 2, 9);
  w.at(0, 0, 4) = 1.0f;  // center tap of kernel (0,0)
  w.at(1, 1, 4) = 1.0f;
  Tensor<float> b(2, 1, 1);
  Graph<float> g;
  const int y = g.conv2d(g.leaf(x), g.leaf(w), g.leaf(b));
  for (size_t i = 0; i < x.v.size(); ++i) CHECK(g.value(y).v[i] == x.v[i]);
}

TEST_CASE("conv2d zero weights give zero output and zero input grad") {
  Rng rng(2);
  Tensor<float> x = oracle::random_tensor<float>(3, 4, 4, rng);
  Tensor<float> w(2, 3, 9);
  Tensor<float> b(2, 1, 1);
  Graph<float> g;
  const int y = g.conv2d(g.leaf(x), g.leaf(w), g.leaf(b));
  for (float v : g.value(y).v) CHECK(v == 0.0f);
  x.zero_grad();
  w.zero_grad();
  b.zero_grad();
  g.backward(g.sum(y));
  for (float v : x.g) CHECK(v == 0.0f);
}

TEST_CASE("conv2d matches the six-loop oracle") {
  Rng rng(3);
  for (int stride : {1, 2}) {
    Tensor<double> x = oracle::random_tensor<double>(2, 5, 5, rng);
    Tensor<double> w = oracle::random_tensor<double>(3, 2, 9, rng);
    Tensor<double> b = oracle::random_tensor<double>(3, 1, 1, rng);
    Graph<double> g;
    const int y = g.conv2d(g.leaf(x), g.leaf(w), g.leaf(b), stride);
    Tensor<double> ref = oracle::conv2d(x, w, b, 3, stride);
    REQUIRE(g.value(y).same_shape(ref));
    for (size_t i = 0; i < ref.v.size(); ++i)
      CHECK(g.value(y).v[i] == doctest::Approx(ref.v[i]).epsilon(1e-6));
  }
  // 1x1 kernel
  Tensor<double> x = oracle::random_tensor<double>(3, 4, 4, rng);
  Tensor<double> w = oracle::random_tensor<double>(2, 3, 1, rng);
  Tensor<double> b = oracle::random_tensor<double>(2, 1, 1, rng);
  Graph<double> g;
  const int y = g.conv2d(g.leaf(x), g.leaf(w), g.leaf(b));
  Tensor<double> ref = oracle::conv2d(x, w, b, 1, 1);
  for (size_t i = 0; i < ref.v.size(); ++i)
    CHECK(g.value(y).v[i] == doctest::Approx(ref.v[i]).epsilon(1e-6));
}

TEST_CASE("conv2d stride-1 3x3 preserves spatial dims down to 1x1 inputs") {
  Rng rng(4);
  for (auto [h, w] : {std::pair{1, 1}, {1, 7}, {2, 2}, {5, 3}}) {
    Tensor<float> x = oracle::random_tensor<float>(1, h, w, rng);
    Tensor<float> wt = oracle::random_tensor<float>(2, 1, 9, rng);
    Tensor<float> b(2, 1, 1);
    Graph<float> g;
    const int y = g.conv2d(g.leaf(x), g.leaf(wt), g.leaf(b));
    CHECK(g.value(y).h == h);
    CHECK(g.value(y).w == w);
  }
}

TEST_CASE("conv2d gradients pass the finite-difference check") {
  Rng rng(5);
  for (int stride : {1, 2}) {
    Tensor<double> x = oracle::random_tensor<double>(2, 4, 5, rng);
    Tensor<double> w = oracle::random_tensor<double>(2, 2, 9, rng, -0.5, 0.5);
    Tensor<double> b = oracle::random_tensor<double>(2, 1, 1, rng);
    auto build = [&](Graph<double>& g) {
      return g.sum(g.conv2d(g.leaf(x), g.leaf(w), g.leaf(b), stride));
    };
    // linear in each input; bound is loose only for coordinates whose true
    // gradient nearly cancels
    CHECK(grad_check(build, {&x, &w, &b}, 1e-5) < 1e-6);
  }
}

TEST_CASE("conv2d rejects mismatched channels") {
  Rng rng(6);
  Tensor<float> x = oracle::random_tensor<float>(2, 4, 4, rng);
  Tensor<float> w = oracle::random_tensor<float>(2, 3, 9, rng);
  Tensor<float> b(2, 1, 1);
  Graph<float> g;
  CHECK_THROWS_AS(g.conv2d(g.leaf(x), g.leaf(w), g.leaf(b)), std::invalid_argument);
}

TEST_CASE("concat stacks channels and routes gradients") {
  Rng rng(7);
  Tensor<double> a = oracle::random_tensor<double>(2, 4, 4, rng);
  Tensor<double> b = oracle::random_tensor<double>(3, 4, 4, rng);
  {
    Graph<double> g;
    const int y = g.concat({g.leaf(a), g.leaf(b)});
    CHECK(g.value(y).c == 5);
    CHECK(g.value(y).at(0, 1, 2) == a.at(0, 1, 2));
    CHECK(g.value(y).at(2, 3, 1) == b.at(0, 3, 1));
  }
  Tensor<double> weights = oracle::random_tensor<double>(5, 4, 4, rng);
  auto build = [&](Graph<double>& g) {
    return g.sum(g.mul(g.concat({g.leaf(a), g.leaf(b)}), g.constant(weights)));
  };
  CHECK(grad_check(build, {&a, &b}, 1e-5) < 1e-8);
}

TEST_CASE("mul by ones is the identity; add/mul gradcheck") {
  Rng rng(8);
  Tensor<double> a = oracle::random_tensor<double>(2, 3, 3, rng);
  Tensor<double> ones(2, 3, 3, 1.0);
  {
    Graph<double> g;
    const int y = g.mul(g.leaf(a), g.constant(ones));
    for (size_t i = 0; i < a.v.size(); ++i) CHECK(g.value(y).v[i] == a.v[i]);
  }
  Tensor<double> b = oracle::random_tensor<double>(2, 3, 3, rng);
  auto build = [&](Graph<double>& g) {
    const int s = g.add(g.leaf(a), g.leaf(b));
    return g.sum(g.mul(s, g.leaf(b)));
  };
  CHECK(grad_check(build, {&a, &b}, 1e-5) < 1e-6);
}

TEST_CASE("leaky_relu slope and finite differences") {
  Tensor<double> x(1, 1, 2);
  x.v = {-2.0, 2.0};
  auto build = [&](Graph<double>& g) { return g.sum(g.leaky_relu(g.leaf(x), 0.1)); };
  CHECK(grad_check(build, {&x}, 1e-5) < 1e-8);
  x.zero_grad();
  Graph<double> g;
  g.backward(build(g));
  CHECK(x.g[0] == doctest::Approx(0.1));
  CHECK(x.g[1] == doctest::Approx(1.0));
}

TEST_CASE("dense_block with identity bottleneck returns the configured width") {
  // L=1 with a zero conv layer; bottleneck 1x1 initialized to pass x through.
  const int in_c = 3, growth = 2;
  DenseBlockParams<float> p;
  p.layers.push_back(make_zero_conv_param<float>(growth, in_c, 3));
  p.bottleneck = make_zero_conv_param<float>(in_c, in_c + growth, 1);
  for (int c = 0; c < in_c; ++c) p.bottleneck.w.at(c, c, 0) = 1.0f;

  Rng rng(9);
  Tensor<float> x = oracle::random_tensor<float>(in_c, 4, 4, rng);
  Graph<float> g;
  const int y = dense_block(g, g.leaf(x), p);
  CHECK(g.value(y).c == in_c);
  for (size_t i = 0; i < x.v.size(); ++i) CHECK(g.value(y).v[i] == x.v[i]);
}

TEST_CASE("dense_block zero parameters give zero output") {
  DenseBlockParams<float> p;
  p.layers.push_back(make_zero_conv_param<float>(2, 2, 3));
  p.layers.push_back(make_zero_conv_param<float>(2, 4, 3));
  p.bottleneck = make_zero_conv_param<float>(3, 6, 1);
  Rng rng(10);
  Tensor<float> x = oracle::random_tensor<float>(2, 4, 4, rng);
  Graph<float> g;
  const int y = dense_block(g, g.leaf(x), p);
  CHECK(g.value(y).c == 3);
  for (float v : g.value(y).v) CHECK(v == 0.0f);
}

namespace {
// Straight-line reimplementation of the dense recurrence with the oracle
// convolution: feats = [x]; y_i = leaky(conv(cat(feats))); bottleneck at the
// end. Independent of Graph.
Tensor<double> oracle_dense_block(const Tensor<double>& x,
                                  DenseBlockParams<double>& p) {
  std::vector<Tensor<double>> feats{x};
  for (auto& layer : p.layers) {
    int total_c = 0;
    for (auto& f : feats) total_c += f.c;
    Tensor<double> cat(total_c, x.h, x.w);
    int off = 0;
    for (auto& f : feats) {
      std::copy(f.v.begin(), f.v.end(), cat.v.begin() + off);
      off += static_cast<int>(f.v.size());
    }
    Tensor<double> y = oracle::conv2d(cat, layer.w, layer.b, 3, 1);
    for (double& v : y.v) v = v >= 0 ? v : 0.1 * v;
    feats.push_back(std::move(y));
  }
  int total_c = 0;
  for (auto& f : feats) total_c += f.c;
  Tensor<double> cat(total_c, x.h, x.w);
  int off = 0;
  for (auto& f : feats) {
    std::copy(f.v.begin(), f.v.end(), cat.v.begin() + off);
    off += static_cast<int>(f.v.size());
  }
  return oracle::conv2d(cat, p.bottleneck.w, p.bottleneck.b, 1, 1);
}
}  // namespace

TEST_CASE("dense_block matches an independent unrolled oracle") {
  Rng rng(11);
  DenseBlockParams<double> p = make_dense_block<double>(3, 2, 4, 5, rng);
  Tensor<double> x = oracle::random_tensor<double>(3, 4, 4, rng);
  Graph<double> g;
  const int y = dense_block(g, g.leaf(x), p);
  Tensor<double> ref = oracle_dense_block(x, p);
  REQUIRE(g.value(y).same_shape(ref));
  for (size_t i = 0; i < ref.v.size(); ++i)
    CHECK(g.value(y).v[i] == doctest::Approx(ref.v[i]).epsilon(1e-6));
}

TEST_CASE("pixel_shuffle definitional mapping and inverse") {
  Tensor<float> x(4, 2, 2);
  for (size_t i = 0; i < x.v.size(); ++i) x.v[i] = static_cast<float>(i);
  Graph<float> g;
  const int y = g.pixel_shuffle(g.leaf(x), 2);
  const Tensor<float>& out = g.value(y);
  REQUIRE(out.c == 1);
  REQUIRE(out.h == 4);
  REQUIRE(out.w == 4);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(out.at(0, i * 2 + k / 2, j * 2 + k % 2) == x.at(k, i, j));

  // alpha = 1 is the identity
  Graph<float> g1;
  const int same = g1.pixel_shuffle(g1.leaf(x), 1);
  for (size_t i = 0; i < x.v.size(); ++i) CHECK(g1.value(same).v[i] == x.v[i]);
}

TEST_CASE("pixel_shuffle and its backward are mutually inverse permutations") {
  Rng rng(12);
  Tensor<float> x = oracle::random_tensor<float>(8, 3, 2, rng);
  // Forward, then pull an arbitrary pattern back through backward: the
  // pulled-back grad must be the inverse rearrangement, so shuffling it
  // again must reproduce the pattern bit-exactly.
  Tensor<float> pattern = oracle::random_tensor<float>(2, 6, 4, rng);
  Graph<float> g;
  const int y = g.pixel_shuffle(g.leaf(x), 2);
  x.zero_grad();
  g.backward(g.sum(g.mul(y, g.constant(pattern))));
  Tensor<float> pulled(8, 3, 2);
  pulled.v = x.g;
  Graph<float> g2;
  const int again = g2.pixel_shuffle(g2.leaf(pulled), 2);
  for (size_t i = 0; i < pattern.v.size(); ++i)
    CHECK(g2.value(again).v[i] == pattern.v[i]);

  Graph<float> g3;
  CHECK_THROWS_AS(g3.pixel_shuffle(g3.leaf(x), 3), std::invalid_argument);
}

TEST_CASE("upsample_bicubic constants, identity, and disparity scaling") {
  Tensor<float> x(2, 3, 3, 0.7f);
  {
    Graph<float> g;
    const int y = g.upsample_bicubic(g.leaf(x), 2, false);
    CHECK(g.value(y).h == 6);
    for (float v : g.value(y).v) CHECK(v == doctest::Approx(0.7f).epsilon(1e-6));
  }
  {
    Graph<float> g;
    const int y = g.upsample_bicubic(g.leaf(x), 3, true);  // disparity mode
    for (float v : g.value(y).v) CHECK(v == doctest::Approx(3 * 0.7f).epsilon(1e-6));
  }
  {
    Graph<float> g;
    const int y = g.upsample_bicubic(g.leaf(x), 1, false);
    for (size_t i = 0; i < x.v.size(); ++i) CHECK(g.value(y).v[i] == x.v[i]);
  }
}

TEST_CASE("upsample_bicubic gradient matches finite differences") {
  Rng rng(13);
  Tensor<double> x = oracle::random_tensor<double>(1, 4, 4, rng);
  Tensor<double> weights = oracle::random_tensor<double>(1, 8, 8, rng);
  auto build = [&](Graph<double>& g) {
    return g.sum(g.mul(g.upsample_bicubic(g.leaf(x), 2, true), g.constant(weights)));
  };
  CHECK(grad_check(build, {&x}, 1e-5) < 1e-4);
}

TEST_CASE("warp_bicubic identities") {
  Rng rng(14);
  Tensor<float> img = oracle::random_tensor<float>(1, 8, 8, rng, 0.0, 1.0);
  Tensor<float> zero_disp(1, 8, 8, 0.0f);
  {
    Graph<float> g;
    const int y = g.warp_bicubic(g.leaf(img), g.leaf(zero_disp), 1.0, 0.0);
    for (size_t i = 0; i < img.v.size(); ++i) CHECK(g.value(y).v[i] == img.v[i]);
  }
  // disp = 1 with du=(0,1): out(y,x) = img(y, x+1) on interior pixels.
  Tensor<float> one_disp(1, 8, 8, 1.0f);
  {
    Graph<float> g;
    const int y = g.warp_bicubic(g.leaf(img), g.leaf(one_disp), 0.0, 1.0);
    for (int yy = 0; yy < 8; ++yy)
      for (int xx = 0; xx < 7; ++xx)
        CHECK(g.value(y).at(0, yy, xx) == img.at(0, yy, xx + 1));
  }
}

TEST_CASE("warp_bicubic half-integer shift matches the sampling oracle") {
  Rng rng(15);
  Image img = oracle::random_image(1, 8, 8, rng);
  Tensor<float> timg = tensor_from_image<float>(img);
  Tensor<float> half(1, 8, 8, 0.5f);
  Graph<float> g;
  const int y = g.warp_bicubic(g.leaf(timg), g.leaf(half), 1.0, 0.0);
  for (int yy = 0; yy < 8; ++yy)
    for (int xx = 0; xx < 8; ++xx)
      CHECK(g.value(y).at(0, yy, xx) ==
            doctest::Approx(oracle::bicubic_sample(img, 0, yy + 0.5, xx)).epsilon(1e-6));
}

TEST_CASE("warp_bicubic gradients") {
  Rng rng(16);
  Tensor<double> img = oracle::random_tensor<double>(1, 6, 6, rng, 0.0, 1.0);
  Tensor<double> disp(1, 6, 6);
  for (double& v : disp.v) v = rng.uniform(-0.8, 0.8) + 0.3;  // non-integer phases
  Tensor<double> weights = oracle::random_tensor<double>(1, 6, 6, rng);
  auto build_img = [&](Graph<double>& g) {
    return g.sum(g.mul(g.warp_bicubic(g.leaf(img), g.constant(disp), 1.0, 0.5),
                       g.constant(weights)));
  };
  CHECK(grad_check(build_img, {&img}, 1e-5) < 1e-4);

  auto build_disp = [&](Graph<double>& g) {
    return g.sum(g.mul(g.warp_bicubic(g.constant(img), g.leaf(disp), 1.0, 0.5),
                       g.constant(weights)));
  };
  CHECK(grad_check(build_disp, {&disp}, 1e-5) < 1e-3);
}

TEST_CASE("softmax_pair values") {
  Tensor<float> a(1, 2, 2, 1.3f), b(1, 2, 2, 1.3f);
  {
    Graph<float> g;
    auto [pa, pb] = g.softmax_pair(g.leaf(a), g.leaf(b));
    for (float v : g.value(pa).v) CHECK(v == doctest::Approx(0.5f).epsilon(1e-6));
    for (float v : g.value(pb).v) CHECK(v == doctest::Approx(0.5f).epsilon(1e-6));
  }
  {
    Tensor<float> a3(1, 1, 1, static_cast<float>(std::log(3.0)));
    Tensor<float> b3(1, 1, 1, 0.0f);
    Graph<float> g;
    auto [pa, pb] = g.softmax_pair(g.leaf(a3), g.leaf(b3));
    CHECK(g.value(pa).v[0] == doctest::Approx(0.75f).epsilon(1e-6));
    CHECK(g.value(pb).v[0] == doctest::Approx(0.25f).epsilon(1e-6));
  }
  {
    Tensor<float> big(1, 1, 1, 1000.0f), zero(1, 1, 1, 0.0f);
    Graph<float> g;
    auto [pa, pb] = g.softmax_pair(g.leaf(big), g.leaf(zero));
    CHECK(std::isfinite(g.value(pa).v[0]));
    CHECK(g.value(pa).v[0] == doctest::Approx(1.0f));
    CHECK(g.value(pb).v[0] == doctest::Approx(0.0f));
  }
}

TEST_CASE("softmax_pair outputs sum to one and gradcheck passes") {
  Rng rng(17);
  Tensor<double> a = oracle::random_tensor<double>(1, 5, 5, rng, -8.0, 8.0);
  Tensor<double> b = oracle::random_tensor<double>(1, 5, 5, rng, -8.0, 8.0);
  Graph<double> g;
  auto [pa, pb] = g.softmax_pair(g.leaf(a), g.leaf(b));
  for (size_t i = 0; i < a.v.size(); ++i) {
    const double s = g.value(pa).v[i] + g.value(pb).v[i];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.value(pa).v[i] > 0.0);
    CHECK(g.value(pa).v[i] < 1.0);
  }
  Tensor<double> wa = oracle::random_tensor<double>(1, 5, 5, rng);
  Tensor<double> wb = oracle::random_tensor<double>(1, 5, 5, rng);
  auto build = [&](Graph<double>& gg) {
    auto [qa, qb] = gg.softmax_pair(gg.leaf(a), gg.leaf(b));
    return gg.add(gg.sum(gg.mul(qa, gg.constant(wa))),
                  gg.sum(gg.mul(qb, gg.constant(wb))));
  };
  CHECK(grad_check(build, {&a, &b}, 1e-5) < 1e-4);
}

TEST_CASE("slice, pad_reflect, and crop route gradients correctly") {
  Rng rng(18);
  Tensor<double> x = oracle::random_tensor<double>(4, 5, 5, rng);
  Tensor<double> w1 = oracle::random_tensor<double>(2, 5, 5, rng);
  auto build_slice = [&](Graph<double>& g) {
    return g.sum(g.mul(g.slice_channels(g.leaf(x), 1, 3), g.constant(w1)));
  };
  CHECK(grad_check(build_slice, {&x}, 1e-5) < 1e-8);

  Tensor<double> w2 = oracle::random_tensor<double>(4, 7, 6, rng);
  auto build_pad = [&](Graph<double>& g) {
    return g.sum(g.mul(g.pad_reflect(g.leaf(x), 2, 1), g.constant(w2)));
  };
  // reflected taps can nearly cancel, leaving finite-difference noise over
  // the 1e-8 denominator floor; 1e-5 still pins the routing
  CHECK(grad_check(build_pad, {&x}, 1e-5) < 1e-5);

  Tensor<double> w3 = oracle::random_tensor<double>(4, 3, 2, rng);
  auto build_crop = [&](Graph<double>& g) {
    return g.sum(g.mul(g.crop_top_left(g.leaf(x), 3, 2), g.constant(w3)));
  };
  CHECK(grad_check(build_crop, {&x}, 1e-5) < 1e-8);

  Graph<double> g;
  const int padded = g.pad_reflect(g.leaf(x), 2, 0);
  CHECK(g.value(padded).at(0, 5, 1) == x.at(0, 3, 1));  // reflected row
  CHECK(g.value(padded).at(0, 6, 1) == x.at(0, 2, 1));
}

TEST_CASE("l1 and smoothness losses gradcheck away from kinks") {
  Rng rng(19);
  Tensor<double> pred(1, 4, 4);
  Tensor<double> target(1, 4, 4);
  for (size_t i = 0; i < pred.v.size(); ++i) {
    target.v[i] = rng.uniform();
    pred.v[i] = target.v[i] + (rng.uniform() < 0.5 ? -0.2 : 0.2) +
                rng.uniform(-0.05, 0.05);
  }
  auto build_l1 = [&](Graph<double>& g) {
    return g.l1_loss(g.leaf(pred), g.constant(target));
  };
  CHECK(grad_check(build_l1, {&pred}, 1e-6) < 1e-6);

  // neighbor differences bounded away from the |.| kinks, both signs covered
  Tensor<double> disp(1, 4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      disp.at(0, y, x) = 0.4 * x - 0.4 * y + 0.3 * std::sin(0.9 * x + 0.4 * y);
  Tensor<double> edge = oracle::random_tensor<double>(1, 4, 4, rng, 0.0, 1.0);
  auto build_smooth = [&](Graph<double>& g) {
    return g.smoothness_loss(g.leaf(disp), g.constant(edge), 150.0);
  };
  CHECK(grad_check(build_smooth, {&disp}, 1e-6) < 1e-4);
}

TEST_CASE("grad_check on a linear subgraph is exact to rounding") {
  Rng rng(20);
  Tensor<double> x = oracle::random_tensor<double>(1, 4, 4, rng);
  Tensor<double> w = oracle::random_tensor<double>(2, 1, 9, rng);
  Tensor<double> b = oracle::random_tensor<double>(2, 1, 1, rng);
  auto build = [&](Graph<double>& g) {
    return g.sum(g.conv2d(g.leaf(x), g.constant(w), g.constant(b)));
  };
  CHECK(grad_check(build, {&x}, 1e-5) < 1e-8);
}

TEST_CASE("tensors stay finite through a mixed graph") {
  Rng rng(21);
  Tensor<float> x = oracle::random_tensor<float>(4, 6, 6, rng);
  Graph<float> g;
  const int up = g.upsample_bicubic(g.leaf(x), 2, false);
  const int sh = g.pixel_shuffle(g.leaf(x), 2);
  const int s = g.add(g.slice_channels(up, 0, 1), sh);
  CHECK(g.value(s).values_finite());
}
