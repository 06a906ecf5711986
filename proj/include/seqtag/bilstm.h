#ifndef SEQTAG_BILSTM_H_
#define SEQTAG_BILSTM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seqtag/corpus.h"
#include "seqtag/label_scheme.h"
#include "seqtag/lattice.h"
#include "seqtag/matrix.h"
#include "seqtag/train_config.h"

namespace seqtag {

struct BiLstmConfig {
  int min_frequency = 1;
  int embedding_dim = 16;
  int hidden_dim = 16;
  std::uint64_t seed = 42;

  // Dimensions must lie in [1, 128]; min_frequency >= 1.
  void validate() const;
};

// One recurrent direction. Gate rows are stacked as [input, forget,
// candidate, output], each `hidden` rows tall.
struct LstmParams {
  Matrix input;      // 4h x d
  Matrix recurrent;  // 4h x h
  std::vector<double> bias;  // 4h

  LstmParams() = default;
  LstmParams(std::size_t input_dim, std::size_t hidden_dim)
      : input(4 * hidden_dim, input_dim), recurrent(4 * hidden_dim, hidden_dim),
        bias(4 * hidden_dim, 0.0) {}

  std::size_t hidden_dim() const { return bias.size() / 4; }
  std::size_t input_dim() const { return input.cols(); }
  bool operator==(const LstmParams&) const = default;
};

struct LstmState {
  std::vector<double> hidden;
  std::vector<double> cell;
};

// i, f, o = sigmoid(.), g = tanh(.) over W x + U h_prev + b;
// cell = f * c_prev + i * g; hidden = o * tanh(cell).
LstmState recurrent_step(const LstmParams& params, std::span<const double> input,
                         std::span<const double> hidden, std::span<const double> cell);

// Every trainable block. Doubles as the gradient type.
struct BiLstmParams {
  Matrix embeddings;  // vocab x d, row 0 is <UNK>
  LstmParams forward;
  LstmParams backward;
  Matrix projection;  // labels x 2h, columns [forward | backward]
  std::vector<double> projection_bias;
  Transitions transitions;

  BiLstmParams() = default;
  BiLstmParams(std::size_t vocab, std::size_t embedding_dim, std::size_t hidden_dim,
               std::size_t labels);

  std::size_t labels() const { return projection_bias.size(); }
  bool operator==(const BiLstmParams&) const = default;
};

struct NamedBlock {
  std::string name;
  std::span<double> values;
};

// Views over every block, in a fixed order.
std::vector<NamedBlock> parameter_blocks(BiLstmParams& params);

class Vocabulary {
 public:
  static constexpr int kUnknown = 0;

  Vocabulary();
  // Words seen at least `min_frequency` times, in first-seen order.
  static Vocabulary fit(const std::vector<Document>& docs, int min_frequency);

  int add(std::string_view word);
  int id(std::string_view word) const;
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

struct BiLstmCrfModel {
  LabelScheme scheme = LabelScheme::wetlab();
  Vocabulary vocabulary;
  bool lowercase = false;
  BiLstmParams params;

  bool operator==(const BiLstmCrfModel&) const = default;
};

// Vocabulary from `train`, parameters uniform in (-0.1, 0.1) from the seed,
// forget-gate biases +1, transitions zero.
BiLstmCrfModel make_bilstm_model(const std::vector<Document>& train, const LabelScheme& scheme,
                                 const BiLstmConfig& config, bool lowercase = false);

struct BiLstmExample {
  std::vector<int> words;
  std::vector<int> labels;
};

std::vector<int> word_ids(const BiLstmCrfModel& model, const Sentence& sentence);
// Gold tags must be BIO-valid.
std::vector<BiLstmExample> bilstm_examples(const BiLstmCrfModel& model,
                                           const std::vector<Document>& docs);

// Emission scores (position x label) from the bidirectional encoder.
Matrix encode(const BiLstmParams& params, std::span<const int> words);

struct BiLstmLoss {
  double loss = 0.0;
  BiLstmParams gradient;
};

// CRF negative log-likelihood over encode() emissions plus
// (wd/2)*||every parameter||^2, with full backpropagation.
BiLstmLoss nll_and_gradient_bilstm(const BiLstmParams& params,
                                   std::span<const BiLstmExample> batch, double wd);

// Minibatch AdaGrad, same schedule and loss trace as train_crf.
std::vector<double> train_bilstm(BiLstmParams& params, std::span<const BiLstmExample> examples,
                                 const TrainConfig& config);

std::vector<int> decode_bilstm(const BiLstmCrfModel& model, const Sentence& sentence,
                               bool constrained = true);

inline constexpr const char* kBiLstmMagic = "seqtag-bilstm-v1";

void save_bilstm_model(const BiLstmCrfModel& model, std::ostream& out,
                       const std::string& comment = {});
BiLstmCrfModel load_bilstm_model(std::istream& in);
void save_bilstm_model(const BiLstmCrfModel& model, const std::filesystem::path& path,
                       const std::string& comment = {});
BiLstmCrfModel load_bilstm_model(const std::filesystem::path& path);

}  // namespace seqtag

#endif  // SEQTAG_BILSTM_H_
