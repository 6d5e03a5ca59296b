#pragma once

#include "lfhybrid/image.hpp"
#include "lfhybrid/light_field.hpp"
#include "lfhybrid/tensor.hpp"

namespace lfhybrid {

template <typename T>
Tensor<T> tensor_from_image(const Image& img) {
  Tensor<T> t(img.channels, img.height, img.width);
  for (size_t i = 0; i < img.data.size(); ++i) t.v[i] = static_cast<T>(img.data[i]);
  return t;
}

template <typename T>
Image image_from_tensor(const Tensor<T>& t) {
  Image img(t.c, t.h, t.w);
  for (size_t i = 0; i < t.v.size(); ++i) img.data[i] = static_cast<float>(t.v[i]);
  return img;
}

/// Side views stacked along the channel axis in row-major angular order;
/// views must be single-channel.
template <typename T>
Tensor<T> stack_side_views(const HybridInput& hybrid) {
  const int n = static_cast<int>(hybrid.side_views.size());
  const int h = hybrid.lr_height(), w = hybrid.lr_width();
  Tensor<T> t(n, h, w);
  for (int i = 0; i < n; ++i) {
    const Image& img = hybrid.side_views[i];
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        t.at(i, y, x) = static_cast<T>(img.at(0, y, x));
  }
  return t;
}

}  // namespace lfhybrid
