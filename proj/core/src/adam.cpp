#include "lfhybrid/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace lfhybrid {

template <typename T>
AdamOptimizer<T>::AdamOptimizer(std::vector<Tensor<T>*> params, AdamConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (Tensor<T>* p : params_) {
    m_.emplace_back(p->size(), T(0));
    v_.emplace_back(p->size(), T(0));
  }
}

template <typename T>
void AdamOptimizer<T>::step(double lr) {
  ++t_;
  const double b1 = cfg_.beta1, b2 = cfg_.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Tensor<T>& p = *params_[i];
    p.ensure_grad();
    std::vector<T>& m = m_[i];
    std::vector<T>& v = v_[i];
    if (m.size() != p.size()) throw std::invalid_argument("optimizer/parameter shape mismatch");
    for (size_t j = 0; j < p.size(); ++j) {
      const double gr = static_cast<double>(p.g[j]);
      const double mj = b1 * m[j] + (1.0 - b1) * gr;
      const double vj = b2 * v[j] + (1.0 - b2) * gr * gr;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      const double m_hat = mj / corr1;
      const double v_hat = vj / corr2;
      p.v[j] = static_cast<T>(p.v[j] - lr * m_hat / (std::sqrt(v_hat) + cfg_.eps));
    }
  }
}

template <typename T>
void AdamOptimizer<T>::zero_grads() {
  for (Tensor<T>* p : params_) p->zero_grad();
}

template class AdamOptimizer<float>;
template class AdamOptimizer<double>;

}  // namespace lfhybrid
