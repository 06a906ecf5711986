#include "seqtag/train_config.h"

#include <cmath>
#include <numeric>
#include <utility>

#include "seqtag/error.h"

namespace seqtag {

void TrainConfig::validate() const {
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "learning rate must be finite and >= 0");
  }
  if (!std::isfinite(weight_decay) || weight_decay < 0.0) {
    throw Error(ErrorCode::kInvalidConfig, "weight decay must be finite and >= 0");
  }
  if (epochs < 1) throw Error(ErrorCode::kInvalidConfig, "epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidConfig, "batch size must be >= 1");
}

void AdaGrad::step(std::size_t slot, std::span<double> params, std::span<const double> grad) {
  if (slot >= accumulators_.size()) accumulators_.resize(slot + 1);
  auto& acc = accumulators_[slot];
  if (acc.size() != params.size()) acc.assign(params.size(), 0.0);
  if (learning_rate_ == 0.0) return;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    if (g == 0.0) continue;
    acc[i] += g * g;
    params[i] -= learning_rate_ * g / (std::sqrt(acc[i]) + epsilon_);
  }
}

EpochOrder::EpochOrder(std::uint64_t seed) : engine_(seed) {}

std::vector<std::size_t> EpochOrder::next(std::size_t n, bool shuffle) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!shuffle) return order;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(engine_() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace seqtag
