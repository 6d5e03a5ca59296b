#include "lfhybrid/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lfhybrid/resample.hpp"

namespace lfhybrid {

template <typename T>
struct Graph<T>::Node {
  std::vector<int> ins;
  std::vector<int> outs;
  virtual ~Node() = default;
  virtual void backward(Graph<T>& g) = 0;
};

namespace {

// out[x] += w0*in[x-1] + w1*in[x] + w2*in[x+1], zero outside [0,n).
template <typename T>
inline void row_corr3(T* out, const T* in, int n, T w0, T w1, T w2) {
  if (n == 1) {
    out[0] += w1 * in[0];
    return;
  }
  out[0] += w1 * in[0] + w2 * in[1];
  for (int x = 1; x < n - 1; ++x)
    out[x] += w0 * in[x - 1] + w1 * in[x] + w2 * in[x + 1];
  out[n - 1] += w0 * in[n - 2] + w1 * in[n - 1];
}

// sum over x of a[x] * b[x + shift], indices kept inside [0,n).
template <typename T>
inline T row_dot_shift(const T* a, const T* b, int n, int shift) {
  const int x0 = std::max(0, -shift);
  const int x1 = std::min(n, n - shift);
  T acc = T(0);
  for (int x = x0; x < x1; ++x) acc += a[x] * b[x + shift];
  return acc;
}

inline int conv_out_dim(int in, int k, int pad, int stride) {
  return (in + 2 * pad - k) / stride + 1;
}

inline int reflect_index(int i, int n) { return i < n ? i : 2 * n - 2 - i; }

}  // namespace

// ---------------------------------------------------------------------------
// Slots / bookkeeping
// ---------------------------------------------------------------------------

template <typename T>
Graph<T>::Graph() = default;
template <typename T>
Graph<T>::~Graph() = default;

template <typename T>
int Graph<T>::add_slot_external(Tensor<T>& t, bool needs_grad) {
  Slot s;
  s.t = &t;
  s.needs_grad = needs_grad;
  slots_.push_back(std::move(s));
  return static_cast<int>(slots_.size()) - 1;
}

template <typename T>
int Graph<T>::add_slot_owned(Tensor<T> t, bool needs_grad, int producer) {
  Slot s;
  s.owned = std::make_unique<Tensor<T>>(std::move(t));
  s.t = s.owned.get();
  s.needs_grad = needs_grad;
  s.producer = producer;
  slots_.push_back(std::move(s));
  return static_cast<int>(slots_.size()) - 1;
}

template <typename T>
int Graph<T>::leaf(Tensor<T>& t) {
  return add_slot_external(t, true);
}

template <typename T>
int Graph<T>::constant(Tensor<T> t) {
  return add_slot_owned(std::move(t), false, -1);
}

template <typename T>
const Tensor<T>& Graph<T>::value(int id) const {
  return *slots_[id].t;
}

template <typename T>
bool Graph<T>::needs_grad(int id) const {
  return slots_[id].needs_grad;
}

template <typename T>
size_t Graph<T>::num_nodes() const {
  return nodes_.size();
}

template <typename T>
Tensor<T>& Graph<T>::grad_target(int id) {
  Tensor<T>& t = *slots_[id].t;
  t.ensure_grad();
  t.grad_touched = true;
  return t;
}

template <typename T>
void Graph<T>::backward(int output) {
  if (value(output).size() != 1)
    throw std::invalid_argument("backward requires a scalar output");
  for (Slot& s : slots_) {
    if (s.producer >= 0 && s.needs_grad) {
      s.t->ensure_grad();
      std::fill(s.t->g.begin(), s.t->g.end(), T(0));
      s.t->grad_touched = false;
    }
  }
  Tensor<T>& out = tensor(output);
  out.ensure_grad();
  out.g[0] = T(1);
  const int last = slots_[output].producer;
  for (int i = last; i >= 0; --i) nodes_[i]->backward(*this);
}

// ---------------------------------------------------------------------------
// conv2d
// ---------------------------------------------------------------------------

template <typename T>
struct Conv2dNode : Graph<T>::Node {
  int k, pad, stride;

  void backward(Graph<T>& g) override {
    const int x = this->ins[0], weight = this->ins[1], bias = this->ins[2];
    const Tensor<T>& xv = g.value(x);
    const Tensor<T>& wv = g.value(weight);
    const Tensor<T>& dy = g.value(this->outs[0]);
    const int in_c = xv.c, out_c = wv.c, H = xv.h, W = xv.w;
    const int oh = dy.h, ow = dy.w;

    if (g.needs_grad(bias)) {
      Tensor<T>& db = g.grad_target(bias);
      for (int oc = 0; oc < out_c; ++oc) {
        const T* dyc = dy.g.data() + static_cast<size_t>(oc) * oh * ow;
        T acc = T(0);
        for (size_t i = 0; i < static_cast<size_t>(oh) * ow; ++i) acc += dyc[i];
        db.g[oc] += acc;
      }
    }

    if (g.needs_grad(weight)) {
      Tensor<T>& dw = g.grad_target(weight);
      for (int oc = 0; oc < out_c; ++oc) {
        const T* dyc = dy.g.data() + static_cast<size_t>(oc) * oh * ow;
        for (int ic = 0; ic < in_c; ++ic) {
          const T* xc = xv.chan(ic);
          T* dwr = dw.g.data() + (static_cast<size_t>(oc) * in_c + ic) * (k * k);
          if (k == 1) {
            T acc = T(0);
            const size_t plane = static_cast<size_t>(H) * W;
            for (size_t i = 0; i < plane; ++i) acc += dyc[i] * xc[i];
            dwr[0] += acc;
          } else if (k == 3 && stride == 1) {
            for (int ky = 0; ky < 3; ++ky) {
              T a0 = T(0), a1 = T(0), a2 = T(0);
              for (int oy = 0; oy < oh; ++oy) {
                const int iy = oy + ky - 1;
                if (iy < 0 || iy >= H) continue;
                const T* dyr = dyc + static_cast<size_t>(oy) * ow;
                const T* xr = xc + static_cast<size_t>(iy) * W;
                a0 += row_dot_shift(dyr, xr, W, -1);
                a1 += row_dot_shift(dyr, xr, W, 0);
                a2 += row_dot_shift(dyr, xr, W, 1);
              }
              dwr[ky * 3] += a0;
              dwr[ky * 3 + 1] += a1;
              dwr[ky * 3 + 2] += a2;
            }
          } else {
            for (int ky = 0; ky < k; ++ky)
              for (int kx = 0; kx < k; ++kx) {
                T acc = T(0);
                for (int oy = 0; oy < oh; ++oy) {
                  const int iy = oy * stride + ky - pad;
                  if (iy < 0 || iy >= H) continue;
                  const T* dyr = dyc + static_cast<size_t>(oy) * ow;
                  const T* xr = xc + static_cast<size_t>(iy) * W;
                  for (int ox = 0; ox < ow; ++ox) {
                    const int ix = ox * stride + kx - pad;
                    if (ix < 0 || ix >= W) continue;
                    acc += dyr[ox] * xr[ix];
                  }
                }
                dwr[ky * k + kx] += acc;
              }
          }
        }
      }
    }

    if (g.needs_grad(x)) {
      Tensor<T>& dx = g.grad_target(x);
      if (k == 1) {
        const size_t plane = static_cast<size_t>(H) * W;
        for (int ic = 0; ic < in_c; ++ic) {
          T* dxc = dx.g.data() + static_cast<size_t>(ic) * plane;
          for (int oc = 0; oc < out_c; ++oc) {
            const T* dyc = dy.g.data() + static_cast<size_t>(oc) * plane;
            const T w = wv.v[static_cast<size_t>(oc) * in_c + ic];
            for (size_t i = 0; i < plane; ++i) dxc[i] += w * dyc[i];
          }
        }
      } else if (k == 3 && stride == 1) {
        // dx is the correlation of dy with the spatially flipped kernel,
        // channels transposed.
        for (int ic = 0; ic < in_c; ++ic) {
          T* dxc = dx.g.data() + static_cast<size_t>(ic) * H * W;
          for (int oc = 0; oc < out_c; ++oc) {
            const T* dyc = dy.g.data() + static_cast<size_t>(oc) * oh * ow;
            const T* wr = wv.v.data() + (static_cast<size_t>(oc) * in_c + ic) * 9;
            for (int ky = 0; ky < 3; ++ky) {
              const T w0 = wr[(2 - ky) * 3 + 2];
              const T w1 = wr[(2 - ky) * 3 + 1];
              const T w2 = wr[(2 - ky) * 3];
              for (int iy = 0; iy < H; ++iy) {
                const int oy = iy + ky - 1;
                if (oy < 0 || oy >= oh) continue;
                row_corr3(dxc + static_cast<size_t>(iy) * W,
                          dyc + static_cast<size_t>(oy) * ow, W, w0, w1, w2);
              }
            }
          }
        }
      } else {
        for (int oc = 0; oc < out_c; ++oc) {
          const T* dyc = dy.g.data() + static_cast<size_t>(oc) * oh * ow;
          for (int ic = 0; ic < in_c; ++ic) {
            T* dxc = dx.g.data() + static_cast<size_t>(ic) * H * W;
            const T* wr = wv.v.data() + (static_cast<size_t>(oc) * in_c + ic) * (k * k);
            for (int oy = 0; oy < oh; ++oy)
              for (int ox = 0; ox < ow; ++ox) {
                const T d = dyc[static_cast<size_t>(oy) * ow + ox];
                if (d == T(0)) continue;
                for (int ky = 0; ky < k; ++ky) {
                  const int iy = oy * stride + ky - pad;
                  if (iy < 0 || iy >= H) continue;
                  for (int kx = 0; kx < k; ++kx) {
                    const int ix = ox * stride + kx - pad;
                    if (ix < 0 || ix >= W) continue;
                    dxc[static_cast<size_t>(iy) * W + ix] += wr[ky * k + kx] * d;
                  }
                }
              }
          }
        }
      }
    }
  }
};

template <typename T>
int Graph<T>::conv2d(int x, int weight, int bias, int stride) {
  const Tensor<T>& xv = value(x);
  const Tensor<T>& wv = value(weight);
  const Tensor<T>& bv = value(bias);
  int k;
  if (wv.w == 9)
    k = 3;
  else if (wv.w == 1)
    k = 1;
  else
    throw std::invalid_argument("conv weight must be (out_c, in_c, 1) or (out_c, in_c, 9)");
  if (wv.h != xv.c) throw std::invalid_argument("conv channel mismatch");
  if (bv.c != wv.c || bv.h != 1 || bv.w != 1)
    throw std::invalid_argument("conv bias must be (out_c, 1, 1)");
  if (stride != 1 && stride != 2)
    throw std::invalid_argument("conv stride must be 1 or 2");
  if (k == 1 && stride != 1)
    throw std::invalid_argument("1x1 conv supports stride 1 only");
  const int pad = (k == 3) ? 1 : 0;
  const int oh = conv_out_dim(xv.h, k, pad, stride);
  const int ow = conv_out_dim(xv.w, k, pad, stride);
  if (oh < 1 || ow < 1) throw std::invalid_argument("conv output would be empty");

  Tensor<T> y(wv.c, oh, ow);
  const int in_c = xv.c, out_c = wv.c, W = xv.w, H = xv.h;
  for (int oc = 0; oc < out_c; ++oc) {
    T* yc = y.chan(oc);
    std::fill(yc, yc + static_cast<size_t>(oh) * ow, bv.v[oc]);
  }
  if (k == 3 && stride == 1) {
    for (int oc = 0; oc < out_c; ++oc) {
      T* yc = y.chan(oc);
      for (int ic = 0; ic < in_c; ++ic) {
        const T* xc = xv.chan(ic);
        const T* wr = wv.v.data() + (static_cast<size_t>(oc) * in_c + ic) * 9;
        for (int ky = 0; ky < 3; ++ky) {
          const T w0 = wr[ky * 3], w1 = wr[ky * 3 + 1], w2 = wr[ky * 3 + 2];
          for (int oy = 0; oy < H; ++oy) {
            const int iy = oy + ky - 1;
            if (iy < 0 || iy >= H) continue;
            row_corr3(yc + static_cast<size_t>(oy) * W,
                      xc + static_cast<size_t>(iy) * W, W, w0, w1, w2);
          }
        }
      }
    }
  } else if (k == 1) {
    const size_t plane = static_cast<size_t>(H) * W;
    for (int oc = 0; oc < out_c; ++oc) {
      T* yc = y.chan(oc);
      for (int ic = 0; ic < in_c; ++ic) {
        const T* xc = xv.chan(ic);
        const T w = wv.v[static_cast<size_t>(oc) * in_c + ic];
        for (size_t i = 0; i < plane; ++i) yc[i] += w * xc[i];
      }
    }
  } else {
    for (int oc = 0; oc < out_c; ++oc) {
      T* yc = y.chan(oc);
      for (int ic = 0; ic < in_c; ++ic) {
        const T* xc = xv.chan(ic);
        const T* wr = wv.v.data() + (static_cast<size_t>(oc) * in_c + ic) * (k * k);
        for (int oy = 0; oy < oh; ++oy) {
          for (int ox = 0; ox < ow; ++ox) {
            T acc = T(0);
            for (int ky = 0; ky < k; ++ky) {
              const int iy = oy * stride + ky - pad;
              if (iy < 0 || iy >= H) continue;
              for (int kx = 0; kx < k; ++kx) {
                const int ix = ox * stride + kx - pad;
                if (ix < 0 || ix >= W) continue;
                acc += wr[ky * k + kx] * xc[static_cast<size_t>(iy) * W + ix];
              }
            }
            yc[static_cast<size_t>(oy) * ow + ox] += acc;
          }
        }
      }
    }
  }

  auto node = std::make_unique<Conv2dNode<T>>();
  node->k = k;
  node->pad = pad;
  node->stride = stride;
  node->ins = {x, weight, bias};
  const int nid = static_cast<int>(nodes_.size());
  const bool ng = needs_grad(x) || needs_grad(weight) || needs_grad(bias);
  const int out = add_slot_owned(std::move(y), ng, nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

// ---------------------------------------------------------------------------
// concat / add / mul / leaky_relu
// ---------------------------------------------------------------------------

template <typename T>
struct ConcatNode : Graph<T>::Node {
  void backward(Graph<T>& g) override {
    const Tensor<T>& dy = g.value(this->outs[0]);
    int c0 = 0;
    for (int in : this->ins) {
      const int nc = g.value(in).c;
      if (g.needs_grad(in)) {
        Tensor<T>& dx = g.grad_target(in);
        const size_t n = static_cast<size_t>(nc) * dx.h * dx.w;
        const T* src = dy.g.data() + static_cast<size_t>(c0) * dx.h * dx.w;
        for (size_t i = 0; i < n; ++i) dx.g[i] += src[i];
      }
      c0 += nc;
    }
  }
};

template <typename T>
int Graph<T>::concat(const std::vector<int>& xs) {
  if (xs.empty()) throw std::invalid_argument("concat of zero tensors");
  const Tensor<T>& first = value(xs[0]);
  int total_c = 0;
  bool ng = false;
  for (int id : xs) {
    const Tensor<T>& t = value(id);
    if (t.h != first.h || t.w != first.w)
      throw std::invalid_argument("concat spatial shape mismatch");
    total_c += t.c;
    ng = ng || needs_grad(id);
  }
  Tensor<T> y(total_c, first.h, first.w);
  size_t off = 0;
  for (int id : xs) {
    const Tensor<T>& t = value(id);
    std::copy(t.v.begin(), t.v.end(), y.v.begin() + off);
    off += t.v.size();
  }
  auto node = std::make_unique<ConcatNode<T>>();
  node->ins = xs;
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), ng, nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template <typename T>
struct AddNode : Graph<T>::Node {
  void backward(Graph<T>& g) override {
    const Tensor<T>& dy = g.value(this->outs[0]);
    for (int in : this->ins) {
      if (!g.needs_grad(in)) continue;
      Tensor<T>& dx = g.grad_target(in);
      for (size_t i = 0; i < dx.g.size(); ++i) dx.g[i] += dy.g[i];
    }
  }
};

template <typename T>
int Graph<T>::add(int a, int b) {
  const Tensor<T>& av = value(a);
  const Tensor<T>& bv = value(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("add shape mismatch");
  Tensor<T> y(av.c, av.h, av.w);
  for (size_t i = 0; i < y.v.size(); ++i) y.v[i] = av.v[i] + bv.v[i];
  auto node = std::make_unique<AddNode<T>>();
  node->ins = {a, b};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(a) || needs_grad(b), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template <typename T>
struct MulNode : Graph<T>::Node {
  void backward(Graph<T>& g) override {
    const Tensor<T>& dy = g.value(this->outs[0]);
    const Tensor<T>& av = g.value(this->ins[0]);
    const Tensor<T>& bv = g.value(this->ins[1]);
    if (g.needs_grad(this->ins[0])) {
      Tensor<T>& da = g.grad_target(this->ins[0]);
      for (size_t i = 0; i < da.g.size(); ++i) da.g[i] += dy.g[i] * bv.v[i];
    }
    if (g.needs_grad(this->ins[1])) {
      Tensor<T>& db = g.grad_target(this->ins[1]);
      for (size_t i = 0; i < db.g.size(); ++i) db.g[i] += dy.g[i] * av.v[i];
    }
  }
};

template <typename T>
int Graph<T>::mul(int a, int b) {
  const Tensor<T>& av = value(a);
  const Tensor<T>& bv = value(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("mul shape mismatch");
  Tensor<T> y(av.c, av.h, av.w);
  for (size_t i = 0; i < y.v.size(); ++i) y.v[i] = av.v[i] * bv.v[i];
  auto node = std::make_unique<MulNode<T>>();
  node->ins = {a, b};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(a) || needs_grad(b), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template <typename T>
struct LeakyReluNode : Graph<T>::Node {
  T slope;
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    const Tensor<T>& xv = g.value(this->ins[0]);
    Tensor<T>& dx = g.grad_target(this->ins[0]);
    for (size_t i = 0; i < dx.g.size(); ++i)
      dx.g[i] += dy.g[i] * (xv.v[i] >= T(0) ? T(1) : slope);
  }
};

template <typename T>
int Graph<T>::leaky_relu(int x, double slope) {
  const Tensor<T>& xv = value(x);
  Tensor<T> y(xv.c, xv.h, xv.w);
  const T s = static_cast<T>(slope);
  for (size_t i = 0; i < y.v.size(); ++i)
    y.v[i] = xv.v[i] >= T(0) ? xv.v[i] : s * xv.v[i];
  auto node = std::make_unique<LeakyReluNode<T>>();
  node->slope = s;
  node->ins = {x};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(x), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

// ---------------------------------------------------------------------------
// pixel_shuffle
// ---------------------------------------------------------------------------

template <typename T>
struct PixelShuffleNode : Graph<T>::Node {
  int scale;
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    Tensor<T>& dx = g.grad_target(this->ins[0]);
    const int r = scale, oc = dy.c, h = dx.h, w = dx.w;
    for (int c = 0; c < oc; ++c)
      for (int sy = 0; sy < r; ++sy)
        for (int sx = 0; sx < r; ++sx) {
          const int ic = c * r * r + sy * r + sx;
          for (int y = 0; y < h; ++y) {
            const T* src = dy.g.data() +
                           (static_cast<size_t>(c) * dy.h + (y * r + sy)) * dy.w + sx;
            T* dst = dx.g.data() + (static_cast<size_t>(ic) * h + y) * w;
            for (int x = 0; x < w; ++x) dst[x] += src[static_cast<size_t>(x) * r];
          }
        }
  }
};

template <typename T>
int Graph<T>::pixel_shuffle(int x, int scale) {
  const Tensor<T>& xv = value(x);
  if (scale < 1) throw std::invalid_argument("pixel_shuffle scale must be >= 1");
  if (xv.c % (scale * scale) != 0)
    throw std::invalid_argument("channels not divisible by scale^2");
  const int oc = xv.c / (scale * scale);
  Tensor<T> y(oc, xv.h * scale, xv.w * scale);
  const int r = scale, h = xv.h, w = xv.w;
  for (int c = 0; c < oc; ++c)
    for (int sy = 0; sy < r; ++sy)
      for (int sx = 0; sx < r; ++sx) {
        const int ic = c * r * r + sy * r + sx;
        for (int yy = 0; yy < h; ++yy) {
          const T* src = xv.v.data() + (static_cast<size_t>(ic) * h + yy) * w;
          T* dst = y.v.data() +
                   (static_cast<size_t>(c) * y.h + (yy * r + sy)) * y.w + sx;
          for (int xx = 0; xx < w; ++xx) dst[static_cast<size_t>(xx) * r] = src[xx];
        }
      }
  auto node = std::make_unique<PixelShuffleNode<T>>();
  node->scale = scale;
  node->ins = {x};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(x), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

// ---------------------------------------------------------------------------
// upsample_bicubic
// ---------------------------------------------------------------------------

template <typename T>
struct UpsampleBicubicNode : Graph<T>::Node {
  std::vector<CubicTaps> row_taps, col_taps;
  T value_scale;
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    Tensor<T>& dx = g.grad_target(this->ins[0]);
    const int C = dx.c, iw = dx.w;
    for (int c = 0; c < C; ++c) {
      const T* dyc = dy.g.data() + static_cast<size_t>(c) * dy.h * dy.w;
      T* dxc = dx.g.data() + static_cast<size_t>(c) * dx.h * dx.w;
      for (int oy = 0; oy < dy.h; ++oy) {
        const CubicTaps& ty = row_taps[oy];
        for (int ox = 0; ox < dy.w; ++ox) {
          const CubicTaps& tx = col_taps[ox];
          const T d = dyc[static_cast<size_t>(oy) * dy.w + ox] * value_scale;
          if (d == T(0)) continue;
          for (int ky = 0; ky < 4; ++ky) {
            T* row = dxc + static_cast<size_t>(ty.idx[ky]) * iw;
            const T wy = static_cast<T>(ty.w[ky]) * d;
            for (int kx = 0; kx < 4; ++kx)
              row[tx.idx[kx]] += wy * static_cast<T>(tx.w[kx]);
          }
        }
      }
    }
  }
};

template <typename T>
int Graph<T>::upsample_bicubic(int x, int scale, bool scale_values) {
  if (scale < 1) throw std::invalid_argument("upsample scale must be >= 1");
  const Tensor<T>& xv = value(x);
  const int oh = xv.h * scale, ow = xv.w * scale;
  auto node = std::make_unique<UpsampleBicubicNode<T>>();
  node->value_scale = scale_values ? static_cast<T>(scale) : T(1);
  node->row_taps.resize(oh);
  node->col_taps.resize(ow);
  const double inv = 1.0 / scale;
  for (int oy = 0; oy < oh; ++oy)
    node->row_taps[oy] = cubic_taps((oy + 0.5) * inv - 0.5, xv.h);
  for (int ox = 0; ox < ow; ++ox)
    node->col_taps[ox] = cubic_taps((ox + 0.5) * inv - 0.5, xv.w);

  Tensor<T> y(xv.c, oh, ow);
  const double vs = static_cast<double>(node->value_scale);
  for (int c = 0; c < xv.c; ++c) {
    const T* xc = xv.chan(c);
    T* yc = y.chan(c);
    for (int oy = 0; oy < oh; ++oy) {
      const CubicTaps& ty = node->row_taps[oy];
      for (int ox = 0; ox < ow; ++ox) {
        const CubicTaps& tx = node->col_taps[ox];
        double acc = 0.0;
        for (int ky = 0; ky < 4; ++ky) {
          const T* row = xc + static_cast<size_t>(ty.idx[ky]) * xv.w;
          double racc = 0.0;
          for (int kx = 0; kx < 4; ++kx) racc += tx.w[kx] * row[tx.idx[kx]];
          acc += ty.w[ky] * racc;
        }
        yc[static_cast<size_t>(oy) * ow + ox] = static_cast<T>(acc * vs);
      }
    }
  }
  node->ins = {x};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(x), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

// ---------------------------------------------------------------------------
// warp_bicubic
// ---------------------------------------------------------------------------

template <typename T>
struct WarpBicubicNode : Graph<T>::Node {
  double du, dv;
  void backward(Graph<T>& g) override {
    const int img = this->ins[0], disp = this->ins[1];
    const Tensor<T>& dy = g.value(this->outs[0]);
    const Tensor<T>& iv = g.value(img);
    const Tensor<T>& dvp = g.value(disp);
    const bool want_img = g.needs_grad(img);
    const bool want_disp = g.needs_grad(disp);
    if (!want_img && !want_disp) return;
    Tensor<T>* di = want_img ? &g.grad_target(img) : nullptr;
    Tensor<T>* dd = want_disp ? &g.grad_target(disp) : nullptr;
    const int H = iv.h, W = iv.w, C = iv.c;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const double d = dvp.v[static_cast<size_t>(y) * W + x];
        const double pr = y + d * du;
        const double pc = x + d * dv;
        const CubicTaps ty = cubic_taps(pr, H);
        const CubicTaps tx = cubic_taps(pc, W);
        const CubicTaps gy = cubic_taps_deriv(pr, H);
        const CubicTaps gx = cubic_taps_deriv(pc, W);
        double disp_grad = 0.0;
        for (int c = 0; c < C; ++c) {
          const T dout = dy.g[(static_cast<size_t>(c) * H + y) * W + x];
          if (dout == T(0)) continue;
          const T* ic = iv.chan(c);
          if (want_img) {
            T* gc = di->g.data() + static_cast<size_t>(c) * H * W;
            for (int ky = 0; ky < 4; ++ky) {
              T* row = gc + static_cast<size_t>(ty.idx[ky]) * W;
              const T wy = static_cast<T>(ty.w[ky]) * dout;
              for (int kx = 0; kx < 4; ++kx)
                row[tx.idx[kx]] += wy * static_cast<T>(tx.w[kx]);
            }
          }
          if (want_disp) {
            double d_dr = 0.0, d_dc = 0.0;
            for (int ky = 0; ky < 4; ++ky) {
              const T* row = ic + static_cast<size_t>(ty.idx[ky]) * W;
              double s_w = 0.0, s_g = 0.0;
              for (int kx = 0; kx < 4; ++kx) {
                s_w += tx.w[kx] * row[tx.idx[kx]];
                s_g += gx.w[kx] * row[tx.idx[kx]];
              }
              d_dr += gy.w[ky] * s_w;
              d_dc += ty.w[ky] * s_g;
            }
            disp_grad += static_cast<double>(dout) * (d_dr * du + d_dc * dv);
          }
        }
        if (want_disp)
          dd->g[static_cast<size_t>(y) * W + x] += static_cast<T>(disp_grad);
      }
    }
  }
};

template <typename T>
int Graph<T>::warp_bicubic(int img, int disp, double du, double dv) {
  const Tensor<T>& iv = value(img);
  const Tensor<T>& dvp = value(disp);
  if (dvp.c != 1 || dvp.h != iv.h || dvp.w != iv.w)
    throw std::invalid_argument("disparity must be (1, h, w) matching the image");
  const int H = iv.h, W = iv.w, C = iv.c;
  Tensor<T> y(C, H, W);
  for (int yy = 0; yy < H; ++yy) {
    for (int xx = 0; xx < W; ++xx) {
      const double d = dvp.v[static_cast<size_t>(yy) * W + xx];
      const CubicTaps ty = cubic_taps(yy + d * du, H);
      const CubicTaps tx = cubic_taps(xx + d * dv, W);
      for (int c = 0; c < C; ++c) {
        const T* ic = iv.chan(c);
        double acc = 0.0;
        for (int ky = 0; ky < 4; ++ky) {
          const T* row = ic + static_cast<size_t>(ty.idx[ky]) * W;
          double racc = 0.0;
          for (int kx = 0; kx < 4; ++kx) racc += tx.w[kx] * row[tx.idx[kx]];
          acc += ty.w[ky] * racc;
        }
        y.v[(static_cast<size_t>(c) * H + yy) * W + xx] = static_cast<T>(acc);
      }
    }
  }
  auto node = std::make_unique<WarpBicubicNode<T>>();
  node->du = du;
  node->dv = dv;
  node->ins = {img, disp};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(img) || needs_grad(disp), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

// ---------------------------------------------------------------------------
// softmax_pair
// ---------------------------------------------------------------------------

template <typename T>
struct SoftmaxPairNode : Graph<T>::Node {
  void backward(Graph<T>& g) override {
    const Tensor<T>& pa = g.value(this->outs[0]);
    const Tensor<T>& pb = g.value(this->outs[1]);
    const bool wa = g.needs_grad(this->ins[0]);
    const bool wb = g.needs_grad(this->ins[1]);
    if (!wa && !wb) return;
    Tensor<T>* da = wa ? &g.grad_target(this->ins[0]) : nullptr;
    Tensor<T>* db = wb ? &g.grad_target(this->ins[1]) : nullptr;
    for (size_t i = 0; i < pa.v.size(); ++i) {
      const T jac = pa.v[i] * pb.v[i];  // d(pa)/d(a) = pa*pb = -d(pa)/d(b)
      const T diff = (pa.g[i] - pb.g[i]) * jac;
      if (wa) da->g[i] += diff;
      if (wb) db->g[i] -= diff;
    }
  }
};

template <typename T>
std::pair<int, int> Graph<T>::softmax_pair(int a, int b) {
  const Tensor<T>& av = value(a);
  const Tensor<T>& bv = value(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("softmax_pair shape mismatch");
  Tensor<T> pa(av.c, av.h, av.w), pb(av.c, av.h, av.w);
  for (size_t i = 0; i < av.v.size(); ++i) {
    const T m = std::max(av.v[i], bv.v[i]);
    const T ea = std::exp(av.v[i] - m);
    const T eb = std::exp(bv.v[i] - m);
    const T inv = T(1) / (ea + eb);
    pa.v[i] = ea * inv;
    pb.v[i] = eb * inv;
  }
  auto node = std::make_unique<SoftmaxPairNode<T>>();
  node->ins = {a, b};
  const int nid = static_cast<int>(nodes_.size());
  const bool ng = needs_grad(a) || needs_grad(b);
  const int oa = add_slot_owned(std::move(pa), ng, nid);
  const int ob = add_slot_owned(std::move(pb), ng, nid);
  node->outs = {oa, ob};
  nodes_.push_back(std::move(node));
  return {oa, ob};
}

// ---------------------------------------------------------------------------
// slice_channels / pad_reflect / crop
// ---------------------------------------------------------------------------

template <typename T>
struct SliceChannelsNode : Graph<T>::Node {
  int c_begin;
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    Tensor<T>& dx = g.grad_target(this->ins[0]);
    const size_t plane = static_cast<size_t>(dx.h) * dx.w;
    T* dst = dx.g.data() + static_cast<size_t>(c_begin) * plane;
    for (size_t i = 0; i < dy.g.size(); ++i) dst[i] += dy.g[i];
  }
};

template <typename T>
int Graph<T>::slice_channels(int x, int c_begin, int c_end) {
  const Tensor<T>& xv = value(x);
  if (c_begin < 0 || c_end > xv.c || c_begin >= c_end)
    throw std::invalid_argument("invalid channel slice");
  Tensor<T> y(c_end - c_begin, xv.h, xv.w);
  const size_t plane = static_cast<size_t>(xv.h) * xv.w;
  std::copy(xv.v.begin() + c_begin * plane, xv.v.begin() + c_end * plane,
            y.v.begin());
  auto node = std::make_unique<SliceChannelsNode<T>>();
  node->c_begin = c_begin;
  node->ins = {x};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(x), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template <typename T>
struct PadReflectNode : Graph<T>::Node {
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    Tensor<T>& dx = g.grad_target(this->ins[0]);
    for (int c = 0; c < dy.c; ++c)
      for (int y = 0; y < dy.h; ++y) {
        const int sy = reflect_index(y, dx.h);
        for (int x = 0; x < dy.w; ++x)
          dx.g[(static_cast<size_t>(c) * dx.h + sy) * dx.w + reflect_index(x, dx.w)] +=
              dy.g[(static_cast<size_t>(c) * dy.h + y) * dy.w + x];
      }
  }
};

template <typename T>
int Graph<T>::pad_reflect(int x, int pad_bottom, int pad_right) {
  const Tensor<T>& xv = value(x);
  if (pad_bottom < 0 || pad_right < 0 || pad_bottom >= xv.h || pad_right >= xv.w)
    throw std::invalid_argument("reflection padding must be < the padded dimension");
  Tensor<T> y(xv.c, xv.h + pad_bottom, xv.w + pad_right);
  for (int c = 0; c < xv.c; ++c)
    for (int yy = 0; yy < y.h; ++yy) {
      const int sy = reflect_index(yy, xv.h);
      for (int xx = 0; xx < y.w; ++xx)
        y.at(c, yy, xx) = xv.at(c, sy, reflect_index(xx, xv.w));
    }
  auto node = std::make_unique<PadReflectNode<T>>();
  node->ins = {x};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(x), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template <typename T>
struct CropNode : Graph<T>::Node {
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    Tensor<T>& dx = g.grad_target(this->ins[0]);
    for (int c = 0; c < dy.c; ++c)
      for (int y = 0; y < dy.h; ++y)
        for (int x = 0; x < dy.w; ++x)
          dx.g[(static_cast<size_t>(c) * dx.h + y) * dx.w + x] +=
              dy.g[(static_cast<size_t>(c) * dy.h + y) * dy.w + x];
  }
};

template <typename T>
int Graph<T>::crop_top_left(int x, int out_h, int out_w) {
  const Tensor<T>& xv = value(x);
  if (out_h < 1 || out_w < 1 || out_h > xv.h || out_w > xv.w)
    throw std::invalid_argument("invalid crop size");
  Tensor<T> y(xv.c, out_h, out_w);
  for (int c = 0; c < xv.c; ++c)
    for (int yy = 0; yy < out_h; ++yy)
      for (int xx = 0; xx < out_w; ++xx) y.at(c, yy, xx) = xv.at(c, yy, xx);
  auto node = std::make_unique<CropNode<T>>();
  node->ins = {x};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(x), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

// ---------------------------------------------------------------------------
// losses / reductions
// ---------------------------------------------------------------------------

template <typename T>
struct L1LossNode : Graph<T>::Node {
  void backward(Graph<T>& g) override {
    const Tensor<T>& dy = g.value(this->outs[0]);
    const Tensor<T>& pv = g.value(this->ins[0]);
    const Tensor<T>& tv = g.value(this->ins[1]);
    const T scale = dy.g[0] / static_cast<T>(pv.size());
    if (g.needs_grad(this->ins[0])) {
      Tensor<T>& dp = g.grad_target(this->ins[0]);
      for (size_t i = 0; i < dp.g.size(); ++i) {
        const T d = pv.v[i] - tv.v[i];
        dp.g[i] += d > T(0) ? scale : (d < T(0) ? -scale : T(0));
      }
    }
    if (g.needs_grad(this->ins[1])) {
      Tensor<T>& dt = g.grad_target(this->ins[1]);
      for (size_t i = 0; i < dt.g.size(); ++i) {
        const T d = pv.v[i] - tv.v[i];
        dt.g[i] -= d > T(0) ? scale : (d < T(0) ? -scale : T(0));
      }
    }
  }
};

template <typename T>
int Graph<T>::l1_loss(int pred, int target) {
  const Tensor<T>& pv = value(pred);
  const Tensor<T>& tv = value(target);
  if (!pv.same_shape(tv)) throw std::invalid_argument("l1_loss shape mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < pv.v.size(); ++i)
    acc += std::abs(static_cast<double>(pv.v[i]) - static_cast<double>(tv.v[i]));
  Tensor<T> y(1, 1, 1);
  y.v[0] = static_cast<T>(acc / pv.size());
  auto node = std::make_unique<L1LossNode<T>>();
  node->ins = {pred, target};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(pred) || needs_grad(target), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template <typename T>
struct SmoothnessLossNode : Graph<T>::Node {
  double lambda;
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    const Tensor<T>& dv = g.value(this->ins[0]);
    const Tensor<T>& ev = g.value(this->ins[1]);
    Tensor<T>& dd = g.grad_target(this->ins[0]);
    const int H = dv.h, W = dv.w;
    const T scale = dy.g[0] * static_cast<T>(0.5) / static_cast<T>(H * W);
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const size_t i = static_cast<size_t>(y) * W + x;
        if (x + 1 < W) {
          const T dgrad = dv.v[i + 1] - dv.v[i];
          if (dgrad != T(0)) {
            const T egrad = ev.v[i + 1] - ev.v[i];
            const T wgt = std::exp(static_cast<T>(-lambda) * std::abs(egrad));
            const T s = (dgrad > T(0) ? wgt : -wgt) * scale;
            dd.g[i + 1] += s;
            dd.g[i] -= s;
          }
        }
        if (y + 1 < H) {
          const T dgrad = dv.v[i + W] - dv.v[i];
          if (dgrad != T(0)) {
            const T egrad = ev.v[i + W] - ev.v[i];
            const T wgt = std::exp(static_cast<T>(-lambda) * std::abs(egrad));
            const T s = (dgrad > T(0) ? wgt : -wgt) * scale;
            dd.g[i + W] += s;
            dd.g[i] -= s;
          }
        }
      }
    }
  }
};

template <typename T>
int Graph<T>::smoothness_loss(int disp, int edge, double lambda) {
  const Tensor<T>& dv = value(disp);
  const Tensor<T>& ev = value(edge);
  if (dv.c != 1) throw std::invalid_argument("smoothness_loss expects a (1,h,w) map");
  if (ev.h != dv.h || ev.w != dv.w)
    throw std::invalid_argument("edge image dimensions must match the disparity map");
  if (needs_grad(edge))
    throw std::invalid_argument("smoothness edge image must be a constant");
  const int H = dv.h, W = dv.w;
  double acc = 0.0;
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const size_t i = static_cast<size_t>(y) * W + x;
      if (x + 1 < W) {
        const double ig = std::abs(static_cast<double>(ev.v[i + 1]) -
                                   static_cast<double>(ev.v[i]));
        acc += std::exp(-lambda * ig) *
               std::abs(static_cast<double>(dv.v[i + 1]) - static_cast<double>(dv.v[i]));
      }
      if (y + 1 < H) {
        const double ig = std::abs(static_cast<double>(ev.v[i + W]) -
                                   static_cast<double>(ev.v[i]));
        acc += std::exp(-lambda * ig) *
               std::abs(static_cast<double>(dv.v[i + W]) - static_cast<double>(dv.v[i]));
      }
    }
  }
  Tensor<T> y(1, 1, 1);
  y.v[0] = static_cast<T>(0.5 * acc / (static_cast<double>(H) * W));
  auto node = std::make_unique<SmoothnessLossNode<T>>();
  node->lambda = lambda;
  node->ins = {disp, edge};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(disp), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template <typename T>
struct SumNode : Graph<T>::Node {
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    Tensor<T>& dx = g.grad_target(this->ins[0]);
    for (size_t i = 0; i < dx.g.size(); ++i) dx.g[i] += dy.g[0];
  }
};

template <typename T>
int Graph<T>::sum(int x) {
  const Tensor<T>& xv = value(x);
  double acc = 0.0;
  for (T v : xv.v) acc += static_cast<double>(v);
  Tensor<T> y(1, 1, 1);
  y.v[0] = static_cast<T>(acc);
  auto node = std::make_unique<SumNode<T>>();
  node->ins = {x};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(x), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template <typename T>
struct ScaleNode : Graph<T>::Node {
  T s;
  void backward(Graph<T>& g) override {
    if (!g.needs_grad(this->ins[0])) return;
    const Tensor<T>& dy = g.value(this->outs[0]);
    Tensor<T>& dx = g.grad_target(this->ins[0]);
    for (size_t i = 0; i < dx.g.size(); ++i) dx.g[i] += dy.g[i] * s;
  }
};

template <typename T>
int Graph<T>::scale(int x, double s) {
  const Tensor<T>& xv = value(x);
  Tensor<T> y(xv.c, xv.h, xv.w);
  const T ts = static_cast<T>(s);
  for (size_t i = 0; i < y.v.size(); ++i) y.v[i] = xv.v[i] * ts;
  auto node = std::make_unique<ScaleNode<T>>();
  node->s = ts;
  node->ins = {x};
  const int nid = static_cast<int>(nodes_.size());
  const int out = add_slot_owned(std::move(y), needs_grad(x), nid);
  node->outs = {out};
  nodes_.push_back(std::move(node));
  return out;
}

template class Graph<float>;
template class Graph<double>;

}  // namespace lfhybrid
