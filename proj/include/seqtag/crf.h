#ifndef SEQTAG_CRF_H_
#define SEQTAG_CRF_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seqtag/corpus.h"
#include "seqtag/features.h"
#include "seqtag/label_scheme.h"
#include "seqtag/lattice.h"
#include "seqtag/train_config.h"

namespace seqtag {

// Unary (feature x label) weights stored densely, plus transitions.
// The same shape doubles as the gradient type.
struct CrfWeights {
  std::size_t num_features = 0;
  std::size_t num_labels = 0;
  std::vector<double> unary;
  Transitions transitions;

  CrfWeights() = default;
  CrfWeights(std::size_t features, std::size_t labels)
      : num_features(features), num_labels(labels), unary(features * labels, 0.0),
        transitions(labels) {}

  double& unary_at(FeatureId f, std::size_t label) { return unary[f * num_labels + label]; }
  double unary_at(FeatureId f, std::size_t label) const { return unary[f * num_labels + label]; }

  bool operator==(const CrfWeights&) const = default;
};

struct CrfExample {
  SentenceFeatures features;
  std::vector<int> labels;
};

// emission(t, y) = sum of unary(f, y) over the features firing at t.
Lattice score_lattice(const SentenceFeatures& features, const CrfWeights& weights);

struct CrfLoss {
  double loss = 0.0;
  CrfWeights gradient;
};

// Negative log-likelihood of the gold paths plus (wd/2)*||unary||^2.
// Transition weights are not decayed.
CrfLoss nll_and_gradient(const CrfWeights& weights, std::span<const CrfExample> batch, double wd);

// Minibatch AdaGrad over `examples`; each step decays by wd * |batch| / N so
// that one epoch covers the full objective once. Returns the per-epoch
// regularized loss divided by N. Throws Error(kNonFiniteLoss).
std::vector<double> train_crf(CrfWeights& weights, std::span<const CrfExample> examples,
                              const TrainConfig& config);

// Everything needed to tag raw text.
struct CrfModel {
  LabelScheme scheme = LabelScheme::wetlab();
  FeatureConfig feature_config;
  Gazetteer gazetteer;
  FeatureIndex index;
  CrfWeights weights;
  bool lowercase = false;

  bool operator==(const CrfModel&) const = default;
};

// Gazetteer and frozen feature index from `train` (plus an optional extra
// gazetteer), zero weights.
CrfModel make_crf_model(const std::vector<Document>& train, const LabelScheme& scheme,
                        const FeatureConfig& feature_config, bool lowercase = false,
                        const Gazetteer& extra_gazetteer = {});

// Gold examples of `docs` under the model's features. Gold tags must be
// BIO-valid.
std::vector<CrfExample> crf_examples(const CrfModel& model, const std::vector<Document>& docs);

SentenceFeatures crf_features(const CrfModel& model, const Sentence& sentence);

// Viterbi tag ids for one sentence; BIO-masked when `constrained`.
std::vector<int> crf_tag(const CrfModel& model, const Sentence& sentence, bool constrained = true);

inline constexpr const char* kCrfMagic = "seqtag-crf-v1";

// Text container: magic line, optional `#` comment lines, then sections.
// Reals are written as hexadecimal floats, so load(save(m)) is bit-exact.
void save_crf_model(const CrfModel& model, std::ostream& out, const std::string& comment = {});
CrfModel load_crf_model(std::istream& in);
void save_crf_model(const CrfModel& model, const std::filesystem::path& path,
                    const std::string& comment = {});
CrfModel load_crf_model(const std::filesystem::path& path);

}  // namespace seqtag

#endif  // SEQTAG_CRF_H_
