#include "seqtag/bilstm.h"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "model_io.h"
#include "seqtag/bio.h"
#include "seqtag/error.h"
#include "seqtag/io.h"
#include "seqtag/unicode.h"

namespace seqtag {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

template <typename Params, typename F>
void visit_blocks(Params& p, F&& f) {
  f("embeddings", p.embeddings.values());
  f("forward.input", p.forward.input.values());
  f("forward.recurrent", p.forward.recurrent.values());
  f("forward.bias", std::span(p.forward.bias));
  f("backward.input", p.backward.input.values());
  f("backward.recurrent", p.backward.recurrent.values());
  f("backward.bias", std::span(p.backward.bias));
  f("projection", p.projection.values());
  f("projection.bias", std::span(p.projection_bias));
  f("transitions.pair", p.transitions.pair.values());
  f("transitions.begin", std::span(p.transitions.begin));
  f("transitions.end", std::span(p.transitions.end));
}

// Activated gates [i, f, g, o] for one step.
std::vector<double> gates(const LstmParams& p, std::span<const double> x, std::span<const double> h) {
  const std::size_t rows = p.bias.size();
  std::vector<double> z(p.bias);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto wx = p.input.row(r);
    for (std::size_t k = 0; k < x.size(); ++k) z[r] += wx[k] * x[k];
    const auto uh = p.recurrent.row(r);
    for (std::size_t k = 0; k < h.size(); ++k) z[r] += uh[k] * h[k];
  }
  const std::size_t hd = rows / 4;
  for (std::size_t k = 0; k < hd; ++k) {
    z[k] = sigmoid(z[k]);
    z[hd + k] = sigmoid(z[hd + k]);
    z[2 * hd + k] = std::tanh(z[2 * hd + k]);
    z[3 * hd + k] = sigmoid(z[3 * hd + k]);
  }
  return z;
}

// States of one direction, indexed by processing step.
struct DirectionTrace {
  std::vector<std::vector<double>> gates;
  std::vector<std::vector<double>> cells;
  std::vector<std::vector<double>> hiddens;
};

DirectionTrace run_direction(const LstmParams& p, const std::vector<std::span<const double>>& inputs) {
  const std::size_t hd = p.hidden_dim();
  DirectionTrace trace;
  std::vector<double> h(hd, 0.0);
  std::vector<double> c(hd, 0.0);
  for (const auto& x : inputs) {
    auto g = gates(p, x, h);
    for (std::size_t k = 0; k < hd; ++k) {
      c[k] = g[hd + k] * c[k] + g[k] * g[2 * hd + k];
      h[k] = g[3 * hd + k] * std::tanh(c[k]);
    }
    trace.gates.push_back(std::move(g));
    trace.cells.push_back(c);
    trace.hiddens.push_back(h);
  }
  return trace;
}

// Backpropagation through time. `d_hidden` is indexed by processing step;
// input gradients are added into `d_inputs` (same indexing).
void backprop_direction(const LstmParams& p, const DirectionTrace& trace,
                        const std::vector<std::span<const double>>& inputs,
                        const std::vector<std::vector<double>>& d_hidden, LstmParams& grad,
                        std::vector<std::vector<double>>& d_inputs) {
  const std::size_t hd = p.hidden_dim();
  const std::size_t n = inputs.size();
  std::vector<double> dh_next(hd, 0.0);
  std::vector<double> dc_next(hd, 0.0);
  std::vector<double> dz(4 * hd);
  const std::vector<double> zeros(hd, 0.0);
  for (std::size_t step = n; step-- > 0;) {
    const auto& g = trace.gates[step];
    const auto& c = trace.cells[step];
    const auto& c_prev = step > 0 ? trace.cells[step - 1] : zeros;
    const auto& h_prev = step > 0 ? trace.hiddens[step - 1] : zeros;
    for (std::size_t k = 0; k < hd; ++k) {
      const double i = g[k];
      const double f = g[hd + k];
      const double cand = g[2 * hd + k];
      const double o = g[3 * hd + k];
      const double tc = std::tanh(c[k]);
      const double dh = d_hidden[step][k] + dh_next[k];
      const double dc = dh * o * (1.0 - tc * tc) + dc_next[k];
      dz[k] = dc * cand * i * (1.0 - i);
      dz[hd + k] = dc * c_prev[k] * f * (1.0 - f);
      dz[2 * hd + k] = dc * i * (1.0 - cand * cand);
      dz[3 * hd + k] = dh * tc * o * (1.0 - o);
      dc_next[k] = dc * f;
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    const auto& x = inputs[step];
    auto& dx = d_inputs[step];
    for (std::size_t r = 0; r < 4 * hd; ++r) {
      const double d = dz[r];
      grad.bias[r] += d;
      auto gw = grad.input.row(r);
      const auto w = p.input.row(r);
      for (std::size_t k = 0; k < x.size(); ++k) {
        gw[k] += d * x[k];
        dx[k] += d * w[k];
      }
      auto gu = grad.recurrent.row(r);
      const auto u = p.recurrent.row(r);
      for (std::size_t k = 0; k < hd; ++k) {
        gu[k] += d * h_prev[k];
        dh_next[k] += d * u[k];
      }
    }
  }
}

struct Encoding {
  std::vector<std::span<const double>> forward_inputs;
  std::vector<std::span<const double>> backward_inputs;
  DirectionTrace forward;
  DirectionTrace backward;
  Matrix emissions;
};

Encoding run_encoder(const BiLstmParams& params, std::span<const int> words) {
  const std::size_t n = words.size();
  if (n == 0) throw Error(ErrorCode::kDimensionMismatch, "empty sentence");
  Encoding enc;
  for (int w : words) {
    if (w < 0 || static_cast<std::size_t>(w) >= params.embeddings.rows()) {
      throw Error(ErrorCode::kDimensionMismatch, "word id " + std::to_string(w));
    }
    enc.forward_inputs.push_back(params.embeddings.row(static_cast<std::size_t>(w)));
  }
  enc.backward_inputs.assign(enc.forward_inputs.rbegin(), enc.forward_inputs.rend());
  enc.forward = run_direction(params.forward, enc.forward_inputs);
  enc.backward = run_direction(params.backward, enc.backward_inputs);

  const std::size_t hd = params.forward.hidden_dim();
  const std::size_t labels = params.labels();
  enc.emissions = Matrix(n, labels);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& hf = enc.forward.hiddens[t];
    const auto& hb = enc.backward.hiddens[n - 1 - t];
    for (std::size_t y = 0; y < labels; ++y) {
      const auto w = params.projection.row(y);
      double s = params.projection_bias[y];
      for (std::size_t k = 0; k < hd; ++k) s += w[k] * hf[k] + w[hd + k] * hb[k];
      enc.emissions(t, y) = s;
    }
  }
  return enc;
}

void check_labels(const BiLstmParams& params, const BiLstmExample& ex) {
  if (ex.words.size() != ex.labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "words and labels differ in length");
  }
  for (int y : ex.labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= params.labels()) {
      throw Error(ErrorCode::kDimensionMismatch, "label id " + std::to_string(y));
    }
  }
}

double accumulate(const BiLstmParams& params, const BiLstmExample& ex, BiLstmParams& grad) {
  check_labels(params, ex);
  const Encoding enc = run_encoder(params, ex.words);
  const Lattice lattice{enc.emissions, &params.transitions};
  const Marginals marginals = posterior_marginals(lattice);
  const double loss = marginals.log_partition - path_score(lattice, ex.labels);
  const std::size_t n = ex.words.size();
  const std::size_t labels = params.labels();
  const std::size_t hd = params.forward.hidden_dim();
  const auto& gold = ex.labels;

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

  // d loss / d emission(t, y) = p(y at t) - [y is gold].
  std::vector<std::vector<double>> d_forward(n, std::vector<double>(hd, 0.0));
  std::vector<std::vector<double>> d_backward(n, std::vector<double>(hd, 0.0));
  for (std::size_t t = 0; t < n; ++t) {
    const auto& hf = enc.forward.hiddens[t];
    const auto& hb = enc.backward.hiddens[n - 1 - t];
    for (std::size_t y = 0; y < labels; ++y) {
      const double d = marginals.unary(t, y) - (static_cast<int>(y) == gold[t] ? 1.0 : 0.0);
      grad.projection_bias[y] += d;
      auto gw = grad.projection.row(y);
      const auto w = params.projection.row(y);
      for (std::size_t k = 0; k < hd; ++k) {
        gw[k] += d * hf[k];
        gw[hd + k] += d * hb[k];
        d_forward[t][k] += d * w[k];
        d_backward[n - 1 - t][k] += d * w[hd + k];
      }
    }
  }

  const std::size_t dim = params.embeddings.cols();
  std::vector<std::vector<double>> dx_forward(n, std::vector<double>(dim, 0.0));
  std::vector<std::vector<double>> dx_backward(n, std::vector<double>(dim, 0.0));
  backprop_direction(params.forward, enc.forward, enc.forward_inputs, d_forward, grad.forward, dx_forward);
  backprop_direction(params.backward, enc.backward, enc.backward_inputs, d_backward, grad.backward,
                     dx_backward);
  for (std::size_t t = 0; t < n; ++t) {
    auto row = grad.embeddings.row(static_cast<std::size_t>(ex.words[t]));
    for (std::size_t k = 0; k < dim; ++k) row[k] += dx_forward[t][k] + dx_backward[n - 1 - t][k];
  }
  return loss;
}

double decay(const BiLstmParams& params, double wd, BiLstmParams& grad) {
  if (wd == 0.0) return 0.0;
  std::vector<std::span<const double>> values;
  visit_blocks(params, [&](const char*, std::span<const double> v) { values.push_back(v); });
  std::size_t block = 0;
  double squared = 0.0;
  visit_blocks(grad, [&](const char*, std::span<double> g) {
    const auto v = values[block++];
    for (std::size_t i = 0; i < v.size(); ++i) {
      squared += v[i] * v[i];
      g[i] += wd * v[i];
    }
  });
  return 0.5 * wd * squared;
}

BiLstmParams zeros_like(const BiLstmParams& p) {
  return BiLstmParams(p.embeddings.rows(), p.embeddings.cols(), p.forward.hidden_dim(), p.labels());
}

}  // namespace

void BiLstmConfig::validate() const {
  auto check_dim = [](int value, const char* name) {
    if (value < 1 || value > 128) {
      throw Error(ErrorCode::kInvalidConfig, std::string(name) + " must be in [1, 128]");
    }
  };
  check_dim(embedding_dim, "embedding dim");
  check_dim(hidden_dim, "hidden dim");
  if (min_frequency < 1) throw Error(ErrorCode::kInvalidConfig, "min frequency must be >= 1");
}

LstmState recurrent_step(const LstmParams& params, std::span<const double> input,
                         std::span<const double> hidden, std::span<const double> cell) {
  const std::size_t hd = params.hidden_dim();
  if (input.size() != params.input_dim() || hidden.size() != hd || cell.size() != hd) {
    throw Error(ErrorCode::kDimensionMismatch, "recurrent step shapes");
  }
  const auto g = gates(params, input, hidden);
  LstmState out{std::vector<double>(hd), std::vector<double>(hd)};
  for (std::size_t k = 0; k < hd; ++k) {
    out.cell[k] = g[hd + k] * cell[k] + g[k] * g[2 * hd + k];
    out.hidden[k] = g[3 * hd + k] * std::tanh(out.cell[k]);
  }
  return out;
}

BiLstmParams::BiLstmParams(std::size_t vocab, std::size_t embedding_dim, std::size_t hidden_dim,
                           std::size_t labels)
    : embeddings(vocab, embedding_dim),
      forward(embedding_dim, hidden_dim),
      backward(embedding_dim, hidden_dim),
      projection(labels, 2 * hidden_dim),
      projection_bias(labels, 0.0),
      transitions(labels) {}

std::vector<NamedBlock> parameter_blocks(BiLstmParams& params) {
  std::vector<NamedBlock> blocks;
  visit_blocks(params, [&](const char* name, std::span<double> v) { blocks.push_back({name, v}); });
  return blocks;
}

Vocabulary::Vocabulary() { add("<UNK>"); }

int Vocabulary::add(std::string_view word) {
  std::string key(word);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  ids_.emplace(key, id);
  words_.push_back(std::move(key));
  return id;
}

int Vocabulary::id(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnknown : it->second;
}

Vocabulary Vocabulary::fit(const std::vector<Document>& docs, int min_frequency) {
  std::vector<std::string> order;
  std::unordered_map<std::string, int> counts;
  for (const auto& doc : docs) {
    for (const auto& sentence : doc.sentences) {
      for (const auto& token : sentence.tokens) {
        if (counts[token.surface]++ == 0) order.push_back(token.surface);
      }
    }
  }
  Vocabulary vocab;
  for (const auto& word : order) {
    if (counts[word] >= min_frequency) vocab.add(word);
  }
  return vocab;
}

BiLstmCrfModel make_bilstm_model(const std::vector<Document>& train, const LabelScheme& scheme,
                                 const BiLstmConfig& config, bool lowercase) {
  config.validate();
  BiLstmCrfModel model;
  model.scheme = scheme;
  model.lowercase = lowercase;
  model.vocabulary = Vocabulary::fit(lowercase ? lowercase_corpus(train) : train, config.min_frequency);
  model.params = BiLstmParams(model.vocabulary.size(), static_cast<std::size_t>(config.embedding_dim),
                              static_cast<std::size_t>(config.hidden_dim), scheme.num_tags());
  std::mt19937_64 rng(config.seed);
  auto& p = model.params;
  visit_blocks(p, [&](const char* name, std::span<double> values) {
    if (std::string_view(name).rfind("transitions", 0) == 0) return;
    for (double& v : values) v = -0.1 + 0.2 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  });
  const std::size_t hd = static_cast<std::size_t>(config.hidden_dim);
  for (std::size_t k = 0; k < hd; ++k) {
    p.forward.bias[hd + k] = 1.0;
    p.backward.bias[hd + k] = 1.0;
  }
  return model;
}

std::vector<int> word_ids(const BiLstmCrfModel& model, const Sentence& sentence) {
  std::vector<int> ids;
  ids.reserve(sentence.size());
  for (const auto& token : sentence.tokens) {
    ids.push_back(model.vocabulary.id(model.lowercase ? unicode::to_lower(token.surface) : token.surface));
  }
  return ids;
}

std::vector<BiLstmExample> bilstm_examples(const BiLstmCrfModel& model,
                                           const std::vector<Document>& docs) {
  std::vector<BiLstmExample> examples;
  for (const auto& doc : docs) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      const auto tags = sentence_tags(doc.sentences[s], TagField::kGold);
      if (!validate_bio(tags).empty()) {
        throw Error(ErrorCode::kInvalidBio, doc.id + " sentence " + std::to_string(s + 1));
      }
      BiLstmExample ex;
      ex.words = word_ids(model, doc.sentences[s]);
      for (const auto& tag : tags) ex.labels.push_back(model.scheme.require_tag(tag));
      examples.push_back(std::move(ex));
    }
  }
  return examples;
}

Matrix encode(const BiLstmParams& params, std::span<const int> words) {
  return run_encoder(params, words).emissions;
}

BiLstmLoss nll_and_gradient_bilstm(const BiLstmParams& params,
                                   std::span<const BiLstmExample> batch, double wd) {
  BiLstmLoss out;
  out.gradient = zeros_like(params);
  for (const auto& ex : batch) out.loss += accumulate(params, ex, out.gradient);
  out.loss += decay(params, wd, out.gradient);
  if (!std::isfinite(out.loss)) throw Error(ErrorCode::kNonFiniteLoss, "BiLSTM-CRF batch loss");
  return out;
}

std::vector<double> train_bilstm(BiLstmParams& params, std::span<const BiLstmExample> examples,
                                 const TrainConfig& config) {
  config.validate();
  if (examples.empty()) throw Error(ErrorCode::kInvalidConfig, "no training examples");
  const double n = static_cast<double>(examples.size());
  AdaGrad optimizer(config.learning_rate);
  EpochOrder order_source(config.seed);
  std::vector<double> trace;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = order_source.next(examples.size(), config.shuffle);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      BiLstmParams grad = zeros_like(params);
      double loss = 0.0;
      for (std::size_t k = start; k < stop; ++k) loss += accumulate(params, examples[order[k]], grad);
      loss += decay(params, config.weight_decay * static_cast<double>(stop - start) / n, grad);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "epoch " << epoch + 1 << ", batch starting at " << start << ": loss " << loss
            << " (learning rate " << config.learning_rate << ")";
        throw Error(ErrorCode::kNonFiniteLoss, msg.str());
      }
      epoch_loss += loss;
      auto grads = parameter_blocks(grad);
      auto blocks = parameter_blocks(params);
      for (std::size_t b = 0; b < blocks.size(); ++b) optimizer.step(b, blocks[b].values, grads[b].values);
    }
    trace.push_back(epoch_loss / n);
  }
  return trace;
}

std::vector<int> decode_bilstm(const BiLstmCrfModel& model, const Sentence& sentence,
                               bool constrained) {
  const auto ids = word_ids(model, sentence);
  const Lattice lattice{encode(model.params, ids), &model.params.transitions};
  if (!constrained) return viterbi_decode(lattice).tags;
  const TransitionMask mask = transition_mask(model.scheme);
  return viterbi_decode(lattice, &mask).tags;
}

void save_bilstm_model(const BiLstmCrfModel& model, std::ostream& out, const std::string& comment) {
  out << kBiLstmMagic << '\n';
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "lowercase " << (model.lowercase ? 1 : 0) << '\n';
  model_io::write_scheme(out, model.scheme);
  out << "vocab " << model.vocabulary.size() << '\n';
  for (const auto& word : model.vocabulary.words()) out << word << '\n';
  const auto& p = model.params;
  out << "embedding-dim " << p.embeddings.cols() << '\n';
  out << "hidden-dim " << p.forward.hidden_dim() << '\n';
  out << "labels " << p.labels() << '\n';
  auto& mutable_params = const_cast<BiLstmParams&>(p);
  for (const auto& block : parameter_blocks(mutable_params)) {
    out << "block " << block.name << '\n';
    model_io::write_reals(out, block.values);
  }
  out << "end\n";
}

BiLstmCrfModel load_bilstm_model(std::istream& in) {
  model_io::Reader reader(in, kBiLstmMagic);
  BiLstmCrfModel model;
  model.lowercase = reader.integer("lowercase") != 0;
  model.scheme = reader.scheme();
  const std::size_t vocab = reader.count("vocab");
  if (vocab == 0) reader.fail("empty vocabulary");
  std::vector<std::string> words;
  for (std::size_t i = 0; i < vocab; ++i) words.push_back(reader.line());
  if (words[0] != "<UNK>") reader.fail("vocabulary must start with <UNK>");
  for (std::size_t i = 1; i < vocab; ++i) {
    if (model.vocabulary.add(words[i]) != static_cast<int>(i)) reader.fail("duplicate vocabulary word");
  }
  const std::size_t dim = reader.count("embedding-dim");
  const std::size_t hidden = reader.count("hidden-dim");
  const std::size_t labels = reader.count("labels");
  if (dim < 1 || dim > 128 || hidden < 1 || hidden > 128) reader.fail("dimensions out of range");
  if (labels != model.scheme.num_tags()) reader.fail("label count does not match scheme");
  model.params = BiLstmParams(vocab, dim, hidden, labels);
  for (const auto& block : parameter_blocks(model.params)) {
    if (reader.field("block") != block.name) reader.fail("expected block " + block.name);
    reader.reals(block.values);
  }
  reader.expect_end();
  return model;
}

void save_bilstm_model(const BiLstmCrfModel& model, const std::filesystem::path& path,
                       const std::string& comment) {
  std::ostringstream out;
  save_bilstm_model(model, out, comment);
  write_file_atomic(path, out.str());
}

BiLstmCrfModel load_bilstm_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return load_bilstm_model(in);
}

}  // namespace seqtag
