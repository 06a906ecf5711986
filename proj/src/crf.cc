#include "seqtag/crf.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "model_io.h"
#include "seqtag/bio.h"
#include "seqtag/error.h"
#include "seqtag/io.h"
#include "seqtag/unicode.h"

namespace seqtag {
namespace {

void check_example(const CrfWeights& weights, const CrfExample& example) {
  if (example.features.empty() || example.features.size() != example.labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "example has " +
                                                   std::to_string(example.features.size()) +
                                                   " positions and " +
                                                   std::to_string(example.labels.size()) + " labels");
  }
  for (int label : example.labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= weights.num_labels) {
      throw Error(ErrorCode::kDimensionMismatch, "label id " + std::to_string(label));
    }
  }
}

// Adds one sentence's negative log-likelihood gradient into `grad`.
double accumulate(const CrfWeights& weights, const CrfExample& example, CrfWeights& grad) {
  check_example(weights, example);
  const Lattice lattice = score_lattice(example.features, weights);
  const Marginals marginals = posterior_marginals(lattice);
  const double loss = marginals.log_partition - path_score(lattice, example.labels);
  const std::size_t n = lattice.length();
  const std::size_t labels = weights.num_labels;
  const auto& gold = example.labels;

  for (std::size_t t = 0; t < n; ++t) {
    for (FeatureId f : example.features[t]) {
      double* row = &grad.unary[f * labels];
      for (std::size_t y = 0; y < labels; ++y) row[y] += marginals.unary(t, y);
      row[gold[t]] -= 1.0;
    }
  }
  auto& tr = grad.transitions;
  for (std::size_t y = 0; y < labels; ++y) {
    tr.begin[y] += marginals.unary(0, y);
    tr.end[y] += marginals.unary(n - 1, y);
  }
  tr.begin[gold[0]] -= 1.0;
  tr.end[gold[n - 1]] -= 1.0;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const auto values = marginals.pairwise[t].values();
    auto out = tr.pair.values();
    for (std::size_t k = 0; k < values.size(); ++k) out[k] += values[k];
    tr.pair(gold[t], gold[t + 1]) -= 1.0;
  }
  return loss;
}

double decay(const CrfWeights& weights, double wd, CrfWeights& grad) {
  if (wd == 0.0) return 0.0;
  double squared = 0.0;
  for (std::size_t i = 0; i < weights.unary.size(); ++i) {
    squared += weights.unary[i] * weights.unary[i];
    grad.unary[i] += wd * weights.unary[i];
  }
  return 0.5 * wd * squared;
}

void reset(CrfWeights& grad) {
  std::fill(grad.unary.begin(), grad.unary.end(), 0.0);
  grad.transitions.pair.fill(0.0);
  std::fill(grad.transitions.begin.begin(), grad.transitions.begin.end(), 0.0);
  std::fill(grad.transitions.end.begin(), grad.transitions.end.end(), 0.0);
}

}  // namespace

Lattice score_lattice(const SentenceFeatures& features, const CrfWeights& weights) {
  if (weights.transitions.labels() != weights.num_labels ||
      weights.unary.size() != weights.num_features * weights.num_labels) {
    throw Error(ErrorCode::kDimensionMismatch, "inconsistent CRF weight shapes");
  }
  Lattice lattice;
  lattice.transitions = &weights.transitions;
  lattice.emissions = Matrix(features.size(), weights.num_labels);
  for (std::size_t t = 0; t < features.size(); ++t) {
    auto row = lattice.emissions.row(t);
    for (FeatureId f : features[t]) {
      if (f >= weights.num_features) {
        throw Error(ErrorCode::kDimensionMismatch, "feature id " + std::to_string(f));
      }
      const double* w = &weights.unary[f * weights.num_labels];
      for (std::size_t y = 0; y < weights.num_labels; ++y) row[y] += w[y];
    }
  }
  return lattice;
}

CrfLoss nll_and_gradient(const CrfWeights& weights, std::span<const CrfExample> batch, double wd) {
  CrfLoss out;
  out.gradient = CrfWeights(weights.num_features, weights.num_labels);
  for (const auto& example : batch) out.loss += accumulate(weights, example, out.gradient);
  out.loss += decay(weights, wd, out.gradient);
  if (!std::isfinite(out.loss)) throw Error(ErrorCode::kNonFiniteLoss, "CRF batch loss");
  return out;
}

std::vector<double> train_crf(CrfWeights& weights, std::span<const CrfExample> examples,
                              const TrainConfig& config) {
  config.validate();
  std::vector<double> trace;
  if (examples.empty()) throw Error(ErrorCode::kInvalidConfig, "no training examples");
  const double n = static_cast<double>(examples.size());
  AdaGrad optimizer(config.learning_rate);
  EpochOrder order_source(config.seed);
  CrfWeights grad(weights.num_features, weights.num_labels);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = order_source.next(examples.size(), config.shuffle);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      reset(grad);
      double loss = 0.0;
      for (std::size_t k = start; k < stop; ++k) loss += accumulate(weights, examples[order[k]], grad);
      loss += decay(weights, config.weight_decay * static_cast<double>(stop - start) / n, grad);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "epoch " << epoch + 1 << ", batch starting at " << start << ": loss " << loss
            << " (learning rate " << config.learning_rate << ")";
        throw Error(ErrorCode::kNonFiniteLoss, msg.str());
      }
      epoch_loss += loss;
      optimizer.step(0, weights.unary, grad.unary);
      optimizer.step(1, weights.transitions.pair.values(), grad.transitions.pair.values());
      optimizer.step(2, weights.transitions.begin, grad.transitions.begin);
      optimizer.step(3, weights.transitions.end, grad.transitions.end);
    }
    trace.push_back(epoch_loss / n);
  }
  return trace;
}

CrfModel make_crf_model(const std::vector<Document>& train, const LabelScheme& scheme,
                        const FeatureConfig& feature_config, bool lowercase,
                        const Gazetteer& extra_gazetteer) {
  feature_config.validate();
  CrfModel model;
  model.scheme = scheme;
  model.feature_config = feature_config;
  model.lowercase = lowercase;
  const auto docs = lowercase ? lowercase_corpus(train) : train;
  model.gazetteer = build_gazetteer(docs);
  model.gazetteer.merge(extra_gazetteer);
  model.index = fit_index(docs, feature_config, model.gazetteer);
  model.weights = CrfWeights(model.index.size(), scheme.num_tags());
  return model;
}

SentenceFeatures crf_features(const CrfModel& model, const Sentence& sentence) {
  if (!model.lowercase) {
    return featurize(sentence, model.index, model.feature_config, model.gazetteer);
  }
  Sentence lowered = sentence;
  for (auto& token : lowered.tokens) token.surface = unicode::to_lower(token.surface);
  return featurize(lowered, model.index, model.feature_config, model.gazetteer);
}

std::vector<CrfExample> crf_examples(const CrfModel& model, const std::vector<Document>& docs) {
  std::vector<CrfExample> examples;
  for (const auto& doc : docs) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      const auto& sentence = doc.sentences[s];
      const auto tags = sentence_tags(sentence, TagField::kGold);
      const auto violations = validate_bio(tags);
      if (!violations.empty()) {
        throw Error(ErrorCode::kInvalidBio, doc.id + " sentence " + std::to_string(s + 1) +
                                                " position " +
                                                std::to_string(violations[0].position + 1));
      }
      CrfExample example;
      example.features = crf_features(model, sentence);
      for (const auto& tag : tags) example.labels.push_back(model.scheme.require_tag(tag));
      examples.push_back(std::move(example));
    }
  }
  return examples;
}

std::vector<int> crf_tag(const CrfModel& model, const Sentence& sentence, bool constrained) {
  const Lattice lattice = score_lattice(crf_features(model, sentence), model.weights);
  if (!constrained) return viterbi_decode(lattice).tags;
  const TransitionMask mask = transition_mask(model.scheme);
  return viterbi_decode(lattice, &mask).tags;
}

void save_crf_model(const CrfModel& model, std::ostream& out, const std::string& comment) {
  using model_io::write_reals;
  out << kCrfMagic << '\n';
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "grammar " << kFeatureGrammarVersion << '\n';
  out << "lowercase " << (model.lowercase ? 1 : 0) << '\n';
  out << "window " << model.feature_config.window << '\n';
  out << "affix " << model.feature_config.affix_length << '\n';
  out << "shape " << (model.feature_config.use_shape ? 1 : 0) << '\n';
  out << "gazetteer-features " << (model.feature_config.use_gazetteer ? 1 : 0) << '\n';
  model_io::write_scheme(out, model.scheme);
  out << "gazetteer " << model.gazetteer.size() << '\n';
  for (const auto& [type, phrases] : model.gazetteer.entries()) {
    for (const auto& phrase : phrases) out << type << '\t' << phrase << '\n';
  }
  out << "features " << model.index.size() << '\n';
  for (const auto& feature : model.index.features()) out << feature << '\n';
  const auto& w = model.weights;
  out << "labels " << w.num_labels << '\n';
  out << "begin\n";
  write_reals(out, w.transitions.begin);
  out << "final\n";
  write_reals(out, w.transitions.end);
  out << "pair\n";
  for (std::size_t r = 0; r < w.num_labels; ++r) write_reals(out, w.transitions.pair.row(r));
  out << "unary\n";
  for (std::size_t f = 0; f < w.num_features; ++f) {
    write_reals(out, std::span<const double>(w.unary).subspan(f * w.num_labels, w.num_labels));
  }
  out << "end\n";
}

CrfModel load_crf_model(std::istream& in) {
  model_io::Reader reader(in, kCrfMagic);
  CrfModel model;
  const long grammar = reader.integer("grammar");
  if (grammar != kFeatureGrammarVersion) {
    throw Error(ErrorCode::kVersionMismatch, "feature grammar " + std::to_string(grammar) +
                                                 ", this build reads " +
                                                 std::to_string(kFeatureGrammarVersion));
  }
  model.lowercase = reader.integer("lowercase") != 0;
  model.feature_config.window = static_cast<int>(reader.integer("window"));
  model.feature_config.affix_length = static_cast<int>(reader.integer("affix"));
  model.feature_config.use_shape = reader.integer("shape") != 0;
  model.feature_config.use_gazetteer = reader.integer("gazetteer-features") != 0;
  try {
    model.feature_config.validate();
  } catch (const Error& e) {
    reader.fail(e.detail());
  }
  model.scheme = reader.scheme();

  const std::size_t phrases = reader.count("gazetteer");
  for (std::size_t i = 0; i < phrases; ++i) {
    const std::string text = reader.line();
    const auto tab = text.find('\t');
    if (tab == std::string::npos || !model.scheme.type_index(text.substr(0, tab))) {
      reader.fail("bad gazetteer entry");
    }
    model.gazetteer.add(text.substr(0, tab), text.substr(tab + 1));
  }
  const std::size_t features = reader.count("features");
  for (std::size_t i = 0; i < features; ++i) {
    if (model.index.add(reader.line()) != i) reader.fail("duplicate feature string");
  }
  model.index.freeze();

  const std::size_t labels = reader.count("labels");
  if (labels != model.scheme.num_tags()) reader.fail("label count does not match scheme");
  model.weights = CrfWeights(features, labels);
  auto& w = model.weights;
  if (reader.line() != "begin") reader.fail("expected 'begin'");
  reader.reals(w.transitions.begin);
  if (reader.line() != "final") reader.fail("expected 'final'");
  reader.reals(w.transitions.end);
  if (reader.line() != "pair") reader.fail("expected 'pair'");
  for (std::size_t r = 0; r < labels; ++r) reader.reals(w.transitions.pair.row(r));
  if (reader.line() != "unary") reader.fail("expected 'unary'");
  for (std::size_t f = 0; f < features; ++f) {
    reader.reals(std::span<double>(w.unary).subspan(f * labels, labels));
  }
  reader.expect_end();
  return model;
}

void save_crf_model(const CrfModel& model, const std::filesystem::path& path,
                    const std::string& comment) {
  std::ostringstream out;
  save_crf_model(model, out, comment);
  write_file_atomic(path, out.str());
}

CrfModel load_crf_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load_crf_model(in);
}

}  // namespace seqtag
