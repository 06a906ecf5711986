#ifndef SEQTAG_EVAL_H_
#define SEQTAG_EVAL_H_

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqtag/corpus.h"
#include "seqtag/label_scheme.h"

namespace seqtag {

struct EvalRow {
  std::string type;
  std::size_t tp = 0;
  std::size_t pred = 0;
  std::size_t gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // P = tp/pred, R = tp/gold (0 on empty denominators), F1 harmonic mean.
  static EvalRow from_counts(std::string type, std::size_t tp, std::size_t pred, std::size_t gold);
  // Scores without counts, e.g. for rendering reference figures.
  static EvalRow from_scores(std::string type, double precision, double recall, double f1);

  bool operator==(const EvalRow&) const = default;
};

struct EvalReport {
  std::vector<EvalRow> rows;  // scheme type order
  EvalRow micro{"avg"};
  std::size_t repaired_sequences = 0;  // predicted sentences with invalid BIO
  std::unordered_map<std::string, std::string> display_aliases;

  bool operator==(const EvalReport&) const = default;
};

// Exact (document, sentence, start, end, type) matching, micro-averaged.
// Documents and sentences are paired by position; counts and lengths must
// agree (kTokenizationMismatch). Predictions come from pred_tag where
// present, else gold_tag. Invalid BIO on either side is repaired.
EvalReport evaluate(const std::vector<Document>& gold, const std::vector<Document>& pred,
                    const LabelScheme& scheme);

// Fixed-width table: one row per type, then avg; 4 decimals.
std::string render_report(const EvalReport& report);

// type<TAB>tp<TAB>pred<TAB>gold<TAB>P<TAB>R<TAB>F1 per row, avg last.
std::string render_report_tsv(const EvalReport& report);

struct DeltaRow {
  std::string type;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ReportDelta {
  std::vector<DeltaRow> rows;
  DeltaRow micro{"avg"};
  std::unordered_map<std::string, std::string> display_aliases;
};

// b - a per cell. Throws kSchemeMismatch when the type rows differ.
ReportDelta compare_reports(const EvalReport& a, const EvalReport& b);

enum class DeltaStyle { kAbsolute, kPercent };

// "+0.0012" or "+0.12%"; zero is always "+".
std::string format_delta(double value, DeltaStyle style);
std::string render_delta(const ReportDelta& delta, DeltaStyle style = DeltaStyle::kAbsolute);

}  // namespace seqtag

#endif  // SEQTAG_EVAL_H_
