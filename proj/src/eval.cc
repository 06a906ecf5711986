#include "seqtag/eval.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "seqtag/bio.h"
#include "seqtag/error.h"

namespace seqtag {
namespace {

std::string fixed4(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::string display(const std::unordered_map<std::string, std::string>& aliases,
                    const std::string& type) {
  auto it = aliases.find(type);
  return it == aliases.end() ? type : it->second;
}

std::vector<std::string> tags_of(const Sentence& sentence, bool prediction) {
  std::vector<std::string> tags;
  tags.reserve(sentence.tokens.size());
  for (const auto& token : sentence.tokens) {
    const auto& tag = prediction && token.pred_tag ? token.pred_tag : token.gold_tag;
    if (!tag) throw Error(ErrorCode::kMissingTag, "token '" + token.surface + "' has no tag");
    tags.push_back(*tag);
  }
  return tags;
}

std::size_t width_for(const std::vector<std::string>& names) {
  std::size_t width = 13;
  for (const auto& name : names) width = std::max(width, name.size());
  return width + 2;
}

}  // namespace

EvalRow EvalRow::from_counts(std::string type, std::size_t tp, std::size_t pred, std::size_t gold) {
  EvalRow row;
  row.type = std::move(type);
  row.tp = tp;
  row.pred = pred;
  row.gold = gold;
  row.precision = pred == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred);
  row.recall = gold == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold);
  row.f1 = pred + gold == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(pred + gold);
  return row;
}

EvalRow EvalRow::from_scores(std::string type, double precision, double recall, double f1) {
  EvalRow row;
  row.type = std::move(type);
  row.precision = precision;
  row.recall = recall;
  row.f1 = f1;
  return row;
}

EvalReport evaluate(const std::vector<Document>& gold, const std::vector<Document>& pred,
                    const LabelScheme& scheme) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kTokenizationMismatch,
                std::to_string(gold.size()) + " gold documents vs " + std::to_string(pred.size()) +
                    " predicted");
  }
  const std::size_t types = scheme.num_types();
  std::vector<std::size_t> tp(types), n_pred(types), n_gold(types);
  EvalReport report;
  for (std::size_t d = 0; d < gold.size(); ++d) {
    const auto& gs = gold[d].sentences;
    const auto& ps = pred[d].sentences;
    if (gs.size() != ps.size()) {
      throw Error(ErrorCode::kTokenizationMismatch,
                  "document " + gold[d].id + ": " + std::to_string(gs.size()) + " vs " +
                      std::to_string(ps.size()) + " sentences");
    }
    for (std::size_t s = 0; s < gs.size(); ++s) {
      if (gs[s].size() != ps[s].size()) {
        throw Error(ErrorCode::kTokenizationMismatch,
                    "document " + gold[d].id + " sentence " + std::to_string(s + 1) + ": " +
                        std::to_string(gs[s].size()) + " vs " + std::to_string(ps[s].size()) +
                        " tokens");
      }
      const auto gold_tags = tags_of(gs[s], false);
      const auto pred_tags = tags_of(ps[s], true);
      for (const auto& tag : gold_tags) scheme.require_tag(tag);
      for (const auto& tag : pred_tags) scheme.require_tag(tag);
      if (!validate_bio(pred_tags).empty()) ++report.repaired_sequences;

      std::set<std::tuple<std::size_t, std::size_t, int>> gold_spans;
      for (const auto& e : tags_to_spans(gold_tags, BioMode::kRepair, s)) {
        const int t = *scheme.type_index(e.type_name);
        gold_spans.emplace(e.start, e.end, t);
        ++n_gold[t];
      }
      for (const auto& e : tags_to_spans(pred_tags, BioMode::kRepair, s)) {
        const int t = *scheme.type_index(e.type_name);
        ++n_pred[t];
        if (gold_spans.count({e.start, e.end, t})) ++tp[t];
      }
    }
  }
  std::size_t all_tp = 0, all_pred = 0, all_gold = 0;
  for (std::size_t t = 0; t < types; ++t) {
    report.rows.push_back(EvalRow::from_counts(scheme.entity_types()[t], tp[t], n_pred[t], n_gold[t]));
    all_tp += tp[t];
    all_pred += n_pred[t];
    all_gold += n_gold[t];
  }
  report.micro = EvalRow::from_counts("avg", all_tp, all_pred, all_gold);
  return report;
}

std::string render_report(const EvalReport& report) {
  std::vector<std::string> names;
  for (const auto& row : report.rows) names.push_back(display(report.display_aliases, row.type));
  const int width = static_cast<int>(width_for(names));
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s %10s %10s %10s %8s\n", width, "", "precision", "recall", "F1",
                "support");
  out << buf;
  auto line = [&](const std::string& name, const EvalRow& row) {
    std::snprintf(buf, sizeof buf, "%-*s %10s %10s %10s %8zu\n", width, name.c_str(),
                  fixed4(row.precision).c_str(), fixed4(row.recall).c_str(), fixed4(row.f1).c_str(),
                  row.gold);
    out << buf;
  };
  for (std::size_t i = 0; i < report.rows.size(); ++i) line(names[i], report.rows[i]);
  line("avg", report.micro);
  if (report.repaired_sequences > 0) {
    out << "repaired " << report.repaired_sequences << " predicted sequences with invalid BIO\n";
  }
  return out.str();
}

std::string render_report_tsv(const EvalReport& report) {
  std::ostringstream out;
  out << "type\ttp\tpred\tgold\tP\tR\tF1\n";
  auto line = [&](const std::string& name, const EvalRow& row) {
    out << name << '\t' << row.tp << '\t' << row.pred << '\t' << row.gold << '\t'
        << fixed4(row.precision) << '\t' << fixed4(row.recall) << '\t' << fixed4(row.f1) << '\n';
  };
  for (const auto& row : report.rows) line(row.type, row);
  line("avg", report.micro);
  return out.str();
}

ReportDelta compare_reports(const EvalReport& a, const EvalReport& b) {
  if (a.rows.size() != b.rows.size()) {
    throw Error(ErrorCode::kSchemeMismatch, "reports have different type counts");
  }
  auto diff = [](const EvalRow& x, const EvalRow& y) {
    return DeltaRow{y.type, y.precision - x.precision, y.recall - x.recall, y.f1 - x.f1};
  };
  ReportDelta delta;
  delta.display_aliases = b.display_aliases;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].type != b.rows[i].type) {
      throw Error(ErrorCode::kSchemeMismatch, "type '" + a.rows[i].type + "' vs '" + b.rows[i].type + "'");
    }
    delta.rows.push_back(diff(a.rows[i], b.rows[i]));
  }
  delta.micro = diff(a.micro, b.micro);
  delta.micro.type = "avg";
  return delta;
}

std::string format_delta(double value, DeltaStyle style) {
  const double scaled = style == DeltaStyle::kPercent ? value * 100.0 : value;
  char buf[32];
  std::snprintf(buf, sizeof buf, style == DeltaStyle::kPercent ? "%.2f" : "%.4f", std::abs(scaled));
  const bool zero = std::string_view(buf).find_first_not_of("0.") == std::string_view::npos;
  std::string out = (scaled < 0 && !zero) ? "-" : "+";
  out += buf;
  if (style == DeltaStyle::kPercent) out += '%';
  return out;
}

std::string render_delta(const ReportDelta& delta, DeltaStyle style) {
  std::vector<std::string> names;
  for (const auto& row : delta.rows) names.push_back(display(delta.display_aliases, row.type));
  const int width = static_cast<int>(width_for(names));
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s %10s %10s %10s\n", width, "", "precision", "recall", "F1");
  out << buf;
  auto line = [&](const std::string& name, const DeltaRow& row) {
    std::snprintf(buf, sizeof buf, "%-*s %10s %10s %10s\n", width, name.c_str(),
                  format_delta(row.precision, style).c_str(), format_delta(row.recall, style).c_str(),
                  format_delta(row.f1, style).c_str());
    out << buf;
  };
  for (std::size_t i = 0; i < delta.rows.size(); ++i) line(names[i], delta.rows[i]);
  line("avg", delta.micro);
  return out.str();
}

}  // namespace seqtag
