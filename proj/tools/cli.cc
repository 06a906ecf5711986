#include "seqtag/cli.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "CLI11.hpp"
#include "seqtag/bilstm.h"
#include "seqtag/bio.h"
#include "seqtag/brat.h"
#include "seqtag/conll.h"
#include "seqtag/crf.h"
#include "seqtag/error.h"
#include "seqtag/eval.h"
#include "seqtag/io.h"
#include "seqtag/synthetic.h"

namespace seqtag {
namespace {

namespace fs = std::filesystem;

std::string shortest(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string fixed4(double value) {
  if (std::isnan(value)) return "NaN";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

struct Settings {
  std::string model_kind = "crf";
  std::optional<double> learning_rate;
  double weight_decay = kDefaultWeightDecay;
  int epochs = kDefaultEpochs;
  std::uint64_t seed = 42;
  int batch_size = 8;
  bool lowercase = false;
  bool no_constrain = false;
  std::string gazetteer;
  FeatureConfig features;
  BiLstmConfig bilstm;

  double rate() const {
    if (learning_rate) return *learning_rate;
    return model_kind == "bilstm" ? kDefaultBiLstmLearningRate : kDefaultCrfLearningRate;
  }

  TrainConfig train_config(double lr, double wd) const {
    TrainConfig config;
    config.learning_rate = lr;
    config.weight_decay = wd;
    config.epochs = epochs;
    config.seed = seed;
    config.batch_size = static_cast<std::size_t>(batch_size);
    return config;
  }

  // Rejects out-of-range values before any work starts.
  void validate() const {
    if (!(rate() > 0.0)) throw Error(ErrorCode::kInvalidConfig, "learning rate must be > 0");
    if (!(weight_decay >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "weight decay must be >= 0");
    if (epochs < 1) throw Error(ErrorCode::kInvalidConfig, "epochs must be >= 1");
    if (batch_size < 1) throw Error(ErrorCode::kInvalidConfig, "batch size must be >= 1");
    features.validate();
    bilstm.validate();
  }

  std::string canonical() const {
    std::ostringstream out;
    out << "model=" << model_kind << ";lr=" << shortest(rate()) << ";wd=" << shortest(weight_decay)
        << ";epochs=" << epochs << ";seed=" << seed << ";batch=" << batch_size
        << ";lowercase=" << lowercase << ";constrain=" << !no_constrain;
    if (model_kind == "crf") {
      out << ";window=" << features.window << ";affix=" << features.affix_length
          << ";shape=" << features.use_shape << ";gazetteer-features=" << features.use_gazetteer
          << ";gazetteer=" << gazetteer;
    } else {
      out << ";embedding-dim=" << bilstm.embedding_dim << ";hidden-dim=" << bilstm.hidden_dim
          << ";min-frequency=" << bilstm.min_frequency;
    }
    return out.str();
  }

  std::string header(std::string_view command) const {
    return header_comment(canonical(), "seed=" + std::to_string(seed) + " command=" + std::string(command));
  }
};

void add_training_options(CLI::App* cmd, Settings& s) {
  cmd->add_option("--model", s.model_kind, "Model kind")->check(CLI::IsMember({"crf", "bilstm"}));
  cmd->add_option("--lr", s.learning_rate, "Learning rate (default 0.1 crf, 0.05 bilstm)");
  cmd->add_option("--weight-decay", s.weight_decay, "L2 weight decay")->capture_default_str();
  cmd->add_option("--epochs", s.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  cmd->add_option("--batch-size", s.batch_size, "Minibatch size")->capture_default_str();
  cmd->add_flag("--lowercase", s.lowercase, "Lowercase tokens before featurizing");
  cmd->add_flag("--no-constrain", s.no_constrain, "Decode without the BIO transition mask");
  cmd->add_option("--gazetteer", s.gazetteer, "External gazetteer (Type<TAB>phrase lines)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--window", s.features.window, "CRF context window")->capture_default_str();
  cmd->add_option("--affix-length", s.features.affix_length, "CRF prefix/suffix length")
      ->capture_default_str();
  cmd->add_flag("!--no-shape", s.features.use_shape, "Disable word-shape features");
  cmd->add_flag("!--no-gazetteer-features", s.features.use_gazetteer, "Disable gazetteer features");
  cmd->add_option("--embedding-dim", s.bilstm.embedding_dim, "BiLSTM embedding size")->capture_default_str();
  cmd->add_option("--hidden-dim", s.bilstm.hidden_dim, "BiLSTM hidden size")->capture_default_str();
  cmd->add_option("--min-frequency", s.bilstm.min_frequency, "BiLSTM vocabulary cutoff")
      ->capture_default_str();
  cmd->add_option("--config", "key=value file; command-line flags take precedence");
}

using AnyModel = std::variant<CrfModel, BiLstmCrfModel>;

const LabelScheme& scheme_of(const AnyModel& model) {
  return std::visit([](const auto& m) -> const LabelScheme& { return m.scheme; }, model);
}

struct TrainResult {
  AnyModel model;
  std::vector<double> trace;
};

TrainResult train_model(const Settings& s, const std::vector<Document>& train, double lr, double wd) {
  const auto scheme = LabelScheme::wetlab();
  const TrainConfig config = s.train_config(lr, wd);
  if (s.model_kind == "bilstm") {
    BiLstmConfig bc = s.bilstm;
    bc.seed = s.seed;
    auto model = make_bilstm_model(train, scheme, bc, s.lowercase);
    const auto examples = bilstm_examples(model, train);
    auto trace = train_bilstm(model.params, examples, config);
    return {std::move(model), std::move(trace)};
  }
  Gazetteer extra;
  if (!s.gazetteer.empty()) extra = read_gazetteer(read_file(s.gazetteer), scheme);
  auto model = make_crf_model(train, scheme, s.features, s.lowercase, extra);
  const auto examples = crf_examples(model, train);
  auto trace = train_crf(model.weights, examples, config);
  return {std::move(model), std::move(trace)};
}

// Fills pred_tag on every token; returns the number of BIO violations.
std::size_t tag_documents(const AnyModel& model, std::vector<Document>& docs, bool constrained) {
  const auto& scheme = scheme_of(model);
  std::size_t violations = 0;
  for (auto& doc : docs) {
    for (auto& sentence : doc.sentences) {
      const auto ids = std::visit(
          [&](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, CrfModel>) {
              return crf_tag(m, sentence, constrained);
            } else {
              return decode_bilstm(m, sentence, constrained);
            }
          },
          model);
      std::vector<std::string> tags;
      for (std::size_t t = 0; t < ids.size(); ++t) {
        tags.push_back(scheme.tag(ids[t]));
        sentence.tokens[t].pred_tag = tags.back();
      }
      violations += validate_bio(tags).size();
    }
  }
  return violations;
}

void save_model(const AnyModel& model, const fs::path& path, const std::string& header) {
  std::visit(
      [&](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, CrfModel>) {
          save_crf_model(m, path, header);
        } else {
          save_bilstm_model(m, path, header);
        }
      },
      model);
}

AnyModel load_model(const fs::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  const auto first = text.substr(0, text.find('\n'));
  if (first == kBiLstmMagic) return load_bilstm_model(in);
  return load_crf_model(in);
}

std::string with_header(const std::string& header, const std::string& body) {
  return "# " + header + "\n" + body;
}

// Rewrites `--config FILE` into `--key=value` tokens placed before the other
// arguments so that explicit flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.empty()) return args;
  std::vector<std::string> rest;
  std::vector<std::string> from_file;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::kInvalidConfig, path + ":" + std::to_string(number) + ": expected key=value");
      }
      auto trim = [](std::string v) {
        const auto a = v.find_first_not_of(" \t");
        const auto b = v.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
      };
      from_file.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
    }
  }
  std::vector<std::string> out{args[0]};
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<fs::path> conll_files(const fs::path& path) {
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".conll") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_train(const Settings& s, const std::string& train_path, const std::string& dev_path,
              const std::string& test_path, const std::string& out_path, std::string trace_path,
              std::ostream& out) {
  const auto scheme = LabelScheme::wetlab();
  const auto train = read_conll_path(train_path, scheme, true);
  std::vector<Document> dev, test;
  if (!dev_path.empty()) dev = read_conll_path(dev_path, scheme, true);
  if (!test_path.empty()) test = read_conll_path(test_path, scheme, true);
  const auto result = train_model(s, train, s.rate(), s.weight_decay);
  const std::string header = s.header("train");
  save_model(result.model, out_path, header);
  if (trace_path.empty()) trace_path = out_path + ".trace";
  std::ostringstream trace;
  trace << "epoch\tloss\n";
  for (std::size_t e = 0; e < result.trace.size(); ++e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu\t%.10g\n", e + 1, result.trace[e]);
    trace << buf;
  }
  write_file_atomic(trace_path, with_header(header, trace.str()));
  out << trace.str();
  for (const auto& [name, split] : {std::pair{"dev", &dev}, std::pair{"test", &test}}) {
    if (split->empty()) continue;
    auto predicted = *split;
    tag_documents(result.model, predicted, !s.no_constrain);
    out << name << " F1=" << fixed4(evaluate(*split, predicted, scheme).micro.f1) << '\n';
  }
  out << "model written to " << out_path << '\n';
  return kExitOk;
}

int cmd_tag(const std::string& model_path, const std::string& input, const std::string& output,
            bool no_constrain, std::ostream& out, std::ostream& err) {
  const AnyModel model = load_model(model_path);
  auto docs = read_conll_path(input, scheme_of(model), false);
  const std::size_t violations = tag_documents(model, docs, !no_constrain);
  const std::string header = header_comment("tag;model=" + model_path + ";constrain=" + std::to_string(!no_constrain),
                                            "command=tag");
  const std::string text = with_header(header, serialize_conll(docs, TagField::kPred));
  if (output.empty()) {
    out << text;
  } else {
    write_file_atomic(output, text);
  }
  if (no_constrain) err << violations << " BIO violations in unconstrained output\n";
  return kExitOk;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path, const std::string& report_path,
             const std::string& tsv_path, std::ostream& out) {
  const auto scheme = LabelScheme::wetlab();
  const auto gold = read_conll_path(gold_path, scheme, true);
  const auto pred = read_conll_path(pred_path, scheme, true);
  EvalReport report = evaluate(gold, pred, scheme);
  report.display_aliases = wetlab_display_aliases();
  const std::string header = header_comment("eval;gold=" + gold_path + ";pred=" + pred_path, "command=eval");
  const std::string table = render_report(report);
  if (!report_path.empty()) write_file_atomic(report_path, with_header(header, table));
  if (!tsv_path.empty()) write_file_atomic(tsv_path, with_header(header, render_report_tsv(report)));
  out << table << "F1=" << fixed4(report.micro.f1) << '\n';
  return kExitOk;
}

int cmd_validate(const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
  const auto scheme = LabelScheme::wetlab();
  std::size_t total = 0;
  for (const auto& root : paths) {
    for (const auto& file : conll_files(root)) {
      const auto docs = read_conll_path(file, scheme, true);
      std::size_t sentence_number = 0;
      for (const auto& doc : docs) {
        for (const auto& sentence : doc.sentences) {
          ++sentence_number;
          for (const auto& v : validate_bio(sentence_tags(sentence, TagField::kGold))) {
            out << file.string() << ':' << sentence_number << ':' << v.position + 1 << ' ' << v.previous
                << ' ' << v.tag << '\n';
            ++total;
          }
        }
      }
    }
  }
  err << total << " BIO violations\n";
  return total == 0 ? kExitOk : kExitViolations;
}

int cmd_convert(const std::string& brat_dir, const std::string& out_dir, std::ostream& out,
                std::ostream& err) {
  std::map<std::string, std::pair<bool, bool>> stems;
  for (const auto& entry : fs::directory_iterator(brat_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".txt") stems[entry.path().stem().string()].first = true;
    if (ext == ".ann") stems[entry.path().stem().string()].second = true;
  }
  std::size_t unpaired = 0;
  for (const auto& [stem, present] : stems) {
    if (!present.first || !present.second) {
      err << "unpaired file: " << stem << (present.first ? ".txt" : ".ann") << '\n';
      ++unpaired;
    }
  }
  if (unpaired > 0) return kExitInputError;
  fs::create_directories(out_dir);
  const auto scheme = LabelScheme::wetlab();
  std::size_t dropped = 0, overlaps = 0, ignored = 0;
  for (const auto& [stem, present] : stems) {
    const fs::path base = fs::path(brat_dir) / stem;
    BratOptions options;
    options.id = stem;
    options.strict = false;
    BratConversion conversion;
    try {
      conversion = parse_brat(read_file(base.string() + ".txt"), read_file(base.string() + ".ann"), scheme,
                              protocol_tokenize, options);
    } catch (const Error& e) {
      throw Error(e.code(), stem + ".ann: " + e.detail());
    }
    for (const auto& d : conversion.diagnostics) {
      err << stem << ": " << d.annotation_id << ": " << d.message << '\n';
      switch (d.kind) {
        case BratDiagnostic::Kind::kDropped: ++dropped; break;
        case BratDiagnostic::Kind::kOverlapDiscarded: ++overlaps; break;
        case BratDiagnostic::Kind::kIgnoredLine: ++ignored; break;
      }
    }
    const std::string header = header_comment("convert;source=" + stem, "command=convert");
    write_file_atomic(fs::path(out_dir) / (stem + ".conll"),
                      with_header(header, serialize_conll({conversion.document}, TagField::kGold)));
  }
  out << "converted " << stems.size() << " files; dropped " << dropped << " annotations, discarded "
      << overlaps << " overlaps, ignored " << ignored << " lines\n";
  return kExitOk;
}

struct Cell {
  double f1 = std::numeric_limits<double>::quiet_NaN();
  double precision = std::numeric_limits<double>::quiet_NaN();
  double recall = std::numeric_limits<double>::quiet_NaN();
  std::string failure;
};

int cmd_sweep(const Settings& s, const std::string& train_path, const std::string& dev_path,
              std::vector<double> rates, std::vector<double> decays, const std::string& out_path,
              int jobs, std::ostream& out, std::ostream& err) {
  if (rates.empty()) {
    rates = s.model_kind == "bilstm" ? std::vector<double>{0.02, 0.05, 0.1} : std::vector<double>{0.05, 0.1, 0.2};
  }
  if (decays.empty()) decays = {0.001, kDefaultWeightDecay, 0.009};
  for (double r : rates) {
    if (!(r > 0.0)) throw Error(ErrorCode::kInvalidConfig, "sweep learning rates must be > 0");
  }
  for (double w : decays) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "sweep weight decays must be >= 0");
  }
  if (jobs < 1) throw Error(ErrorCode::kInvalidConfig, "jobs must be >= 1");
  const auto scheme = LabelScheme::wetlab();
  const auto train = read_conll_path(train_path, scheme, true);
  const auto dev = read_conll_path(dev_path, scheme, true);

  std::vector<Cell> cells(rates.size() * decays.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const double wd = decays[i / rates.size()];
      const double lr = rates[i % rates.size()];
      try {
        const auto result = train_model(s, train, lr, wd);
        auto predicted = dev;
        tag_documents(result.model, predicted, !s.no_constrain);
        const auto report = evaluate(dev, predicted, scheme);
        cells[i] = {report.micro.f1, report.micro.precision, report.micro.recall, {}};
      } catch (const std::exception& e) {
        cells[i].failure = e.what();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream table;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s", "wd\\lr");
  table << buf;
  for (double r : rates) {
    std::snprintf(buf, sizeof buf, " %10s", shortest(r).c_str());
    table << buf;
  }
  table << '\n';
  std::optional<std::size_t> best;
  std::size_t failures = 0;
  for (std::size_t row = 0; row < decays.size(); ++row) {
    std::snprintf(buf, sizeof buf, "%-10s", shortest(decays[row]).c_str());
    table << buf;
    for (std::size_t col = 0; col < rates.size(); ++col) {
      const std::size_t i = row * rates.size() + col;
      std::snprintf(buf, sizeof buf, " %10s", fixed4(cells[i].f1).c_str());
      table << buf;
      if (!cells[i].failure.empty()) {
        ++failures;
        err << "warning: lr=" << shortest(rates[col]) << " wd=" << shortest(decays[row]) << " failed: "
            << cells[i].failure << '\n';
      } else if (!best || cells[i].f1 > cells[*best].f1) {
        best = i;
      }
    }
    table << '\n';
  }
  if (best) {
    table << "best: lr=" << shortest(rates[*best % rates.size()]) << " wd="
          << shortest(decays[*best / rates.size()]) << " F1=" << fixed4(cells[*best].f1)
          << " P=" << fixed4(cells[*best].precision) << " R=" << fixed4(cells[*best].recall) << '\n';
  } else {
    table << "best: none\n";
  }
  Settings canonical = s;
  canonical.learning_rate.reset();
  std::string grid = canonical.canonical() + ";rates=";
  for (double r : rates) grid += shortest(r) + ",";
  grid += ";decays=";
  for (double w : decays) grid += shortest(w) + ",";
  const std::string text =
      with_header(header_comment(grid, "seed=" + std::to_string(s.seed) + " command=sweep"), table.str());
  if (!out_path.empty()) write_file_atomic(out_path, text);
  out << table.str();
  if (failures > 0) err << failures << " warnings\n";
  return kExitOk;
}

int cmd_gen_synthetic(std::size_t docs, std::uint64_t seed, const std::string& output, std::ostream& out) {
  const auto corpus = generate_synthetic(seed, docs, LabelScheme::wetlab());
  const std::string header = header_comment("gen-synthetic;docs=" + std::to_string(docs) + ";seed=" +
                                                std::to_string(seed),
                                            "seed=" + std::to_string(seed) + " command=gen-synthetic");
  const std::string text = with_header(header, serialize_conll(corpus, TagField::kGold));
  if (output.empty()) {
    out << text;
  } else {
    write_file_atomic(output, text);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequence labeling toolkit for wet-lab protocol NER", "seqtag"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Settings s;
  std::string train_path, dev_path, test_path, out_path, trace_path;
  std::string model_path, input_path, gold_path, pred_path, report_path, tsv_path;
  std::string brat_dir, out_dir;
  std::vector<std::string> validate_paths;
  std::vector<double> rates, decays;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::size_t n_docs = 370;

  auto* train = app.add_subcommand("train", "Train a CRF or BiLSTM-CRF model");
  add_training_options(train, s);
  train->add_option("--train", train_path, "Training CoNLL file or directory")->required()->check(CLI::ExistingPath);
  train->add_option("--dev", dev_path, "Optional dev split to score after training")->check(CLI::ExistingPath);
  train->add_option("--test", test_path, "Optional test split to score after training")->check(CLI::ExistingPath);
  train->add_option("--out", out_path, "Model file to write")->required();
  train->add_option("--trace", trace_path, "Loss trace file (default <out>.trace)");

  auto* tag = app.add_subcommand("tag", "Tag CoNLL input with a trained model");
  tag->add_option("--model-file", model_path, "Trained model")->required()->check(CLI::ExistingFile);
  tag->add_option("--input", input_path, "CoNLL file or directory; tags optional")->required()->check(CLI::ExistingPath);
  tag->add_option("--out", out_path, "Output CoNLL (default stdout)");
  tag->add_flag("--no-constrain", s.no_constrain, "Decode without the BIO transition mask");

  auto* eval = app.add_subcommand("eval", "Entity-level evaluation of predictions");
  eval->add_option("--gold", gold_path, "Gold CoNLL")->required()->check(CLI::ExistingPath);
  eval->add_option("--pred", pred_path, "Predicted CoNLL")->required()->check(CLI::ExistingPath);
  eval->add_option("--report", report_path, "Also write the table to this file");
  eval->add_option("--tsv", tsv_path, "Also write a TSV report");

  auto* validate = app.add_subcommand("validate", "List BIO violations");
  validate->add_option("paths", validate_paths, "CoNLL files or directories")->required()->check(CLI::ExistingPath);

  auto* convert = app.add_subcommand("convert", "Convert BRAT .txt/.ann pairs to CoNLL");
  convert->add_option("--brat-dir", brat_dir, "Directory of .txt/.ann pairs")->required()->check(CLI::ExistingDirectory);
  convert->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Learning-rate x weight-decay grid");
  add_training_options(sweep, s);
  sweep->add_option("--train", train_path, "Training split")->required()->check(CLI::ExistingPath);
  sweep->add_option("--dev", dev_path, "Dev split")->required()->check(CLI::ExistingPath);
  sweep->add_option("--lrs", rates, "Learning rates (columns)")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep->add_option("--wds", decays, "Weight decays (rows)")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sweep->add_option("--out", out_path, "Sweep table file");
  sweep->add_option("--jobs", jobs, "Concurrent cells");

  auto* gen = app.add_subcommand("gen-synthetic", "Write the deterministic synthetic corpus");
  gen->add_option("--docs", n_docs, "Number of documents")->capture_default_str();
  gen->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", out_path, "Output CoNLL (default stdout)");

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitInputError;
    }
    if (*train) {
      s.validate();
      return cmd_train(s, train_path, dev_path, test_path, out_path, trace_path, out);
    }
    if (*tag) return cmd_tag(model_path, input_path, out_path, s.no_constrain, out, err);
    if (*eval) return cmd_eval(gold_path, pred_path, report_path, tsv_path, out);
    if (*validate) return cmd_validate(validate_paths, out, err);
    if (*convert) return cmd_convert(brat_dir, out_dir, out, err);
    if (*sweep) {
      s.validate();
      return cmd_sweep(s, train_path, dev_path, rates, decays, out_path, jobs, out, err);
    }
    if (*gen) return cmd_gen_synthetic(n_docs, s.seed, out_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kTokenizationMismatch ? kExitEvalMismatch : kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace seqtag
