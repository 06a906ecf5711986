#ifndef SEQTAG_TRAIN_CONFIG_H_
#define SEQTAG_TRAIN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace seqtag {

inline constexpr double kDefaultWeightDecay = 0.005;
inline constexpr int kDefaultEpochs = 3;
inline constexpr double kDefaultCrfLearningRate = 0.1;
inline constexpr double kDefaultBiLstmLearningRate = 0.05;

struct TrainConfig {
  double learning_rate = kDefaultCrfLearningRate;
  double weight_decay = kDefaultWeightDecay;
  int epochs = kDefaultEpochs;
  std::uint64_t seed = 42;
  bool shuffle = true;
  std::size_t batch_size = 8;

  // Throws Error(kInvalidConfig). A zero learning rate is accepted and
  // leaves parameters untouched.
  void validate() const;
};

// Per-coordinate adaptive steps: w -= lr * g / (sqrt(sum of g^2) + eps).
// Each parameter block registered with the same slot keeps its own
// accumulator across steps.
class AdaGrad {
 public:
  explicit AdaGrad(double learning_rate, double epsilon = 1e-8)
      : learning_rate_(learning_rate), epsilon_(epsilon) {}

  void step(std::size_t slot, std::span<double> params, std::span<const double> grad);

 private:
  double learning_rate_;
  double epsilon_;
  std::vector<std::vector<double>> accumulators_;
};

// Deterministic Fisher-Yates shuffle of 0..n-1 driven by mt19937_64 draws.
class EpochOrder {
 public:
  explicit EpochOrder(std::uint64_t seed);
  std::vector<std::size_t> next(std::size_t n, bool shuffle);

 private:
  std::mt19937_64 engine_;
};

}  // namespace seqtag

#endif  // SEQTAG_TRAIN_CONFIG_H_
