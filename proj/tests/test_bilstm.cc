#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "seqtag/bilstm.h"
#include "seqtag/bio.h"
#include "seqtag/error.h"
#include "seqtag/synthetic.h"

using namespace seqtag;

namespace {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Straight-line reference encoder.
Matrix reference_emissions(const BiLstmParams& p, const std::vector<int>& words) {
  const std::size_t n = words.size();
  const std::size_t h = p.forward.hidden_dim();
  const std::size_t d = p.embeddings.cols();
  auto run = [&](const LstmParams& lp, bool reverse) {
    std::vector<std::vector<double>> out(n);
    std::vector<double> hs(h, 0.0), cs(h, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      const std::size_t t = reverse ? n - 1 - s : s;
      std::vector<double> z(4 * h);
      for (std::size_t r = 0; r < 4 * h; ++r) {
        z[r] = lp.bias[r];
        for (std::size_t k = 0; k < d; ++k) z[r] += lp.input(r, k) * p.embeddings(words[t], k);
        for (std::size_t k = 0; k < h; ++k) z[r] += lp.recurrent(r, k) * hs[k];
      }
      for (std::size_t k = 0; k < h; ++k) {
        cs[k] = sig(z[h + k]) * cs[k] + sig(z[k]) * std::tanh(z[2 * h + k]);
        hs[k] = sig(z[3 * h + k]) * std::tanh(cs[k]);
      }
      out[t] = hs;
    }
    return out;
  };
  const auto fw = run(p.forward, false);
  const auto bw = run(p.backward, true);
  Matrix e(n, p.labels());
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t y = 0; y < p.labels(); ++y) {
      double s = p.projection_bias[y];
      for (std::size_t k = 0; k < h; ++k) s += p.projection(y, k) * fw[t][k] + p.projection(y, h + k) * bw[t][k];
      e(t, y) = s;
    }
  }
  return e;
}

double reference_loss(const BiLstmParams& p, const std::vector<BiLstmExample>& batch, double wd) {
  double loss = 0.0;
  for (const auto& ex : batch) {
    const Matrix e = reference_emissions(p, ex.words);
    loss += oracle::enumerate(e, p.transitions).log_z - oracle::score_path(e, p.transitions, ex.labels);
  }
  double sq = 0.0;
  for (const auto& b : parameter_blocks(const_cast<BiLstmParams&>(p))) {
    for (double v : b.values) sq += v * v;
  }
  return loss + 0.5 * wd * sq;
}

BiLstmParams random_params(std::mt19937_64& rng, std::size_t vocab, std::size_t d, std::size_t h,
                           std::size_t labels, double scale = 0.5) {
  BiLstmParams p(vocab, d, h, labels);
  for (auto& b : parameter_blocks(p)) {
    for (double& v : b.values) v = oracle::uniform(rng, -scale, scale);
  }
  return p;
}

std::vector<BiLstmExample> random_batch(std::mt19937_64& rng, std::size_t vocab, std::size_t labels,
                                        std::size_t count, std::size_t max_len) {
  std::vector<BiLstmExample> batch(count);
  for (auto& ex : batch) {
    const std::size_t n = 1 + rng() % max_len;
    for (std::size_t t = 0; t < n; ++t) {
      ex.words.push_back(static_cast<int>(rng() % vocab));
      ex.labels.push_back(static_cast<int>(rng() % labels));
    }
  }
  return batch;
}

}  // namespace

TEST_CASE("recurrent step with zero parameters") {
  LstmParams p(3, 2);
  const std::vector<double> x{1.0, -2.0, 0.5}, h{0.3, -0.3}, c{0.8, -0.4};
  const auto out = recurrent_step(p, x, h, c);
  // All gates are sigmoid(0) = 0.5 and the candidate is tanh(0) = 0.
  CHECK(out.cell[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(out.cell[1] == doctest::Approx(-0.2).epsilon(1e-15));
  CHECK(out.hidden[0] == doctest::Approx(0.5 * std::tanh(0.4)).epsilon(1e-15));
  CHECK(out.hidden[1] == doctest::Approx(0.5 * std::tanh(-0.2)).epsilon(1e-15));
}

TEST_CASE("recurrent step matches a scalar reference and stays in (-1, 1)") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    LstmParams p(2, 2);
    for (double& v : p.input.values()) v = oracle::uniform(rng, -5, 5);
    for (double& v : p.recurrent.values()) v = oracle::uniform(rng, -5, 5);
    for (double& v : p.bias) v = oracle::uniform(rng, -5, 5);
    const std::vector<double> x{oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3)};
    const std::vector<double> h{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1)};
    const std::vector<double> c{oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3)};
    const auto out = recurrent_step(p, x, h, c);
    for (std::size_t k = 0; k < 2; ++k) {
      auto z = [&](std::size_t gate) {
        const std::size_t r = gate * 2 + k;
        return p.bias[r] + p.input(r, 0) * x[0] + p.input(r, 1) * x[1] + p.recurrent(r, 0) * h[0] +
               p.recurrent(r, 1) * h[1];
      };
      const double cell = sig(z(1)) * c[k] + sig(z(0)) * std::tanh(z(2));
      CHECK(out.cell[k] == doctest::Approx(cell).epsilon(1e-12));
      CHECK(out.hidden[k] == doctest::Approx(sig(z(3)) * std::tanh(cell)).epsilon(1e-12));
      CHECK(std::abs(out.hidden[k]) < 1.0);
    }
  }
  CHECK_THROWS_AS(recurrent_step(LstmParams(2, 2), std::vector<double>{1.0}, std::vector<double>(2),
                                 std::vector<double>(2)),
                  Error);
}

TEST_CASE("encoder shape, zero projection and reference agreement") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng() % 4, h = 1 + rng() % 4, labels = 1 + rng() % 5;
    const auto p = random_params(rng, 6, d, h, labels);
    std::vector<int> words(1 + rng() % 6);
    for (int& w : words) w = static_cast<int>(rng() % 6);
    const Matrix e = encode(p, words);
    REQUIRE(e.rows() == words.size());
    REQUIRE(e.cols() == labels);
    const Matrix ref = reference_emissions(p, words);
    for (std::size_t i = 0; i < e.values().size(); ++i) {
      CHECK(e.values()[i] == doctest::Approx(ref.values()[i]).epsilon(1e-12));
    }
  }
  auto p = random_params(rng, 5, 3, 3, 4);
  p.projection.fill(0.0);
  const std::vector<int> words{1, 2, 3};
  const Matrix e = encode(p, words);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t y = 0; y < 4; ++y) CHECK(e(t, y) == p.projection_bias[y]);
  }
  CHECK_THROWS_AS(encode(p, std::vector<int>{}), Error);
  CHECK_THROWS_AS(encode(p, std::vector<int>{5}), Error);
}

TEST_CASE("reversing the input mirrors the directions") {
  std::mt19937_64 rng(13);
  const std::size_t h = 3;
  auto p = random_params(rng, 8, 2, h, 3);
  BiLstmParams q = p;
  std::swap(q.forward, q.backward);
  for (std::size_t y = 0; y < 3; ++y) {
    for (std::size_t k = 0; k < h; ++k) std::swap(q.projection(y, k), q.projection(y, h + k));
  }
  const std::vector<int> words{1, 5, 2, 7, 3};
  const std::vector<int> reversed(words.rbegin(), words.rend());
  const Matrix a = encode(p, words);
  const Matrix b = encode(q, reversed);
  for (std::size_t t = 0; t < words.size(); ++t) {
    for (std::size_t y = 0; y < 3; ++y) {
      CHECK(a(t, y) == doctest::Approx(b(words.size() - 1 - t, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("BiLSTM-CRF gradient matches finite differences of a reference loss") {
  std::mt19937_64 rng(17);
  const LabelScheme one({"X"});
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t d = 1 + rng() % 4, h = 1 + rng() % 4, labels = one.num_tags();
    auto p = random_params(rng, 5, d, h, labels);
    const auto batch = random_batch(rng, 5, labels, 2, 4);
    const double wd = trial % 2 == 0 ? 0.0 : 0.005;
    const auto result = nll_and_gradient_bilstm(p, batch, wd);
    CHECK(result.loss == doctest::Approx(reference_loss(p, batch, wd)).epsilon(1e-10));
    auto grad = result.gradient;
    auto blocks = parameter_blocks(p);
    auto grads = parameter_blocks(grad);
    REQUIRE(blocks.size() == 12);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (std::size_t i = 0; i < blocks[b].values.size(); ++i) {
        const double numeric = oracle::central_difference(
            [&] { return reference_loss(p, batch, wd); }, blocks[b].values[i], 1e-4);
        INFO(blocks[b].name << "[" << i << "]");
        CHECK(oracle::relative_error(grads[b].values[i], numeric, 1e-4) <= 1e-3);
      }
    }
  }
}

TEST_CASE("weight decay alone, unknown words and batch order") {
  std::mt19937_64 rng(19);
  auto p = random_params(rng, 4, 2, 2, 3);
  const auto empty = nll_and_gradient_bilstm(p, {}, 0.5);
  auto g = empty.gradient;
  auto gb = parameter_blocks(g);
  auto pb = parameter_blocks(p);
  for (std::size_t b = 0; b < pb.size(); ++b) {
    for (std::size_t i = 0; i < pb[b].values.size(); ++i) CHECK(gb[b].values[i] == 0.5 * pb[b].values[i]);
  }

  // Only embedding rows of words in the batch receive gradient.
  const std::vector<BiLstmExample> unk{{{0, 0}, {1, 2}}};
  const auto r = nll_and_gradient_bilstm(p, unk, 0.0);
  double row0 = 0.0;
  for (double v : r.gradient.embeddings.row(0)) row0 += std::abs(v);
  CHECK(row0 > 0.0);
  for (std::size_t w = 1; w < 4; ++w) {
    for (double v : r.gradient.embeddings.row(w)) CHECK(v == 0.0);
  }

  auto batch = random_batch(rng, 4, 3, 5, 4);
  const auto a = nll_and_gradient_bilstm(p, batch, 0.01);
  std::reverse(batch.begin(), batch.end());
  const auto b = nll_and_gradient_bilstm(p, batch, 0.01);
  CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-12));
  auto ga = a.gradient;
  auto gbb = b.gradient;
  auto la = parameter_blocks(ga);
  auto lb = parameter_blocks(gbb);
  for (std::size_t k = 0; k < la.size(); ++k) {
    for (std::size_t i = 0; i < la[k].values.size(); ++i) {
      CHECK(la[k].values[i] == doctest::Approx(lb[k].values[i]).epsilon(1e-10).scale(1e-12));
    }
  }
}

TEST_CASE("vocabulary fitting") {
  const auto docs = generate_synthetic(3, 4, LabelScheme::wetlab());
  const auto all = Vocabulary::fit(docs, 1);
  const auto frequent = Vocabulary::fit(docs, 3);
  CHECK(all.words()[0] == "<UNK>");
  CHECK(frequent.size() < all.size());
  CHECK(all.id("never-seen-word") == Vocabulary::kUnknown);
  CHECK(all.id(docs[0].sentences[0].tokens[0].surface) != Vocabulary::kUnknown);
  CHECK_THROWS_AS((BiLstmConfig{.embedding_dim = 0}).validate(), Error);
  CHECK_THROWS_AS((BiLstmConfig{.hidden_dim = 129}).validate(), Error);
}

TEST_CASE("BiLSTM training descends and is deterministic") {
  const auto scheme = LabelScheme::wetlab();
  auto docs = generate_synthetic(5, 6, scheme);
  std::vector<Document> small;
  std::size_t sentences = 0;
  for (auto& doc : docs) {
    Document part{doc.id, {}, {}};
    for (auto& s : doc.sentences) {
      if (sentences == 20) break;
      part.sentences.push_back(s);
      ++sentences;
    }
    if (!part.sentences.empty()) small.push_back(part);
  }
  REQUIRE(sentences == 20);
  auto model = make_bilstm_model(small, scheme, BiLstmConfig{});
  const auto examples = bilstm_examples(model, small);
  TrainConfig config{.learning_rate = kDefaultBiLstmLearningRate, .weight_decay = kDefaultWeightDecay,
                     .epochs = 3};
  auto params = model.params;
  const auto trace = train_bilstm(params, examples, config);
  REQUIRE(trace.size() == 3);
  CHECK(trace[1] < trace[0]);
  CHECK(trace[2] < trace[1]);

  auto again = model.params;
  CHECK(train_bilstm(again, examples, config) == trace);
  CHECK(again == params);

  auto frozen = model.params;
  config.learning_rate = 0.0;
  train_bilstm(frozen, examples, config);
  CHECK(frozen == model.params);

  CHECK(make_bilstm_model(small, scheme, BiLstmConfig{}) == model);
  const auto& f = model.params.forward;
  for (std::size_t k = 0; k < f.hidden_dim(); ++k) CHECK(f.bias[f.hidden_dim() + k] == 1.0);
  for (double v : model.params.embeddings.values()) CHECK(std::abs(v) < 0.1);
}

TEST_CASE("BiLSTM decoding is BIO-valid and matches brute force") {
  std::mt19937_64 rng(23);
  const LabelScheme scheme({"A", "B"});
  const auto mask = transition_mask(scheme);
  for (int trial = 0; trial < 100; ++trial) {
    BiLstmCrfModel model;
    model.scheme = scheme;
    for (int w = 0; w < 5; ++w) model.vocabulary.add("w" + std::to_string(w));
    model.params = random_params(rng, model.vocabulary.size(), 3, 3, scheme.num_tags(), 2.0);
    Sentence s;
    const std::size_t n = 1 + rng() % 5;
    for (std::size_t t = 0; t < n; ++t) s.tokens.push_back(Token{"w" + std::to_string(rng() % 6)});
    const auto tags = decode_bilstm(model, s);
    std::vector<std::string> names;
    for (int y : tags) names.push_back(scheme.tag(y));
    CHECK(validate_bio(names).empty());
    const Matrix e = reference_emissions(model.params, word_ids(model, s));
    CHECK(tags == oracle::enumerate(e, model.params.transitions, &mask).best);
    CHECK(decode_bilstm(model, s, false) == oracle::enumerate(e, model.params.transitions).best);
  }
}

TEST_CASE("BiLSTM model files round-trip bit-exactly") {
  const auto scheme = LabelScheme::wetlab();
  const auto docs = generate_synthetic(9, 2, scheme);
  auto model = make_bilstm_model(docs, scheme, BiLstmConfig{.embedding_dim = 4, .hidden_dim = 3}, true);
  model.params.transitions.pair(0, 1) = -0.0;
  model.params.projection_bias[2] = 1e-300;
  std::stringstream buffer;
  save_bilstm_model(model, buffer, "test header");
  const std::string text = buffer.str();
  CHECK(text.rfind(std::string(kBiLstmMagic) + "\n# test header\n", 0) == 0);
  const auto loaded = load_bilstm_model(buffer);
  CHECK(loaded == model);
  CHECK(std::signbit(loaded.params.transitions.pair(0, 1)));
  std::stringstream again;
  save_bilstm_model(loaded, again, "test header");
  CHECK(again.str() == text);

  std::istringstream crf("seqtag-crf-v1\n");
  CHECK_THROWS_AS(load_bilstm_model(crf), Error);
  std::istringstream truncated(text.substr(0, text.size() / 2));
  try {
    load_bilstm_model(truncated);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCorruptFile);
  }
}
