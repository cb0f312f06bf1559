#ifndef MEDMINE_METRICS_HPP
#define MEDMINE_METRICS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "medmine/matcher.hpp"

namespace medmine {

/// Precision/recall/F1 with gold support. zero_division is set when a
/// denominator was zero and the score was pinned to 0.
struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
  bool zero_division = false;
};

PRF prf_from_counts(const MatchCounts& counts, MatchMode mode);

/// F1 = 2PR/(P+R), or 0 when P+R is 0.
double harmonic_f1(double precision, double recall);

using LabelRows = std::map<Label, PRF>;

struct Aggregates {
  std::optional<PRF> micro;  // only computable from raw counts
  PRF macro;
  PRF weighted;
};

/// micro = PRF over the summed counts; macro = unweighted mean of per-label
/// P, R and F1; weighted = support-weighted mean. Throws EmptyReport when
/// there is nothing to aggregate.
Aggregates aggregate(const LabelCounts& cells, MatchMode mode);

/// Aggregation from already-computed per-label rows (e.g. a published table).
/// micro needs raw counts, so it is absent here.
Aggregates aggregate(const LabelRows& rows);

struct EvaluationReport {
  MatchMode mode = MatchMode::Type;
  LabelCounts counts;  // empty when the report was built from rows only
  LabelRows per_label;
  std::optional<PRF> micro;
  PRF macro;
  PRF weighted;
  std::optional<double> token_accuracy;
  long total_support = 0;
  std::vector<std::string> notes;  // e.g. unknown labels encountered
};

EvaluationReport build_report(const LabelCounts& cells, MatchMode mode,
                              std::optional<double> token_accuracy = std::nullopt);
EvaluationReport report_from_rows(const LabelRows& rows, MatchMode mode = MatchMode::Type);

/// Removes the excluded labels (their gold spans leave POSSIBLE, their
/// predicted spans leave ACTUAL) and re-aggregates. Labels not present are
/// ignored; removing everything is an error.
EvaluationReport filter_and_reaggregate(const EvaluationReport& report,
                                        const std::set<Label>& excluded);

/// Fraction of positions whose tags are string-equal, O included.
double token_accuracy(const std::vector<std::string>& gold_tags,
                      const std::vector<std::string>& pred_tags);

enum class ReportFormat { Tsv, Json, Markdown };
enum class NumberStyle { Fraction4, Percent2 };

/// Deterministic rendering, labels in canonical order. Fraction4 prints
/// 0.9239-style values, Percent2 prints 92.39%.
std::string render_report(const EvaluationReport& report, ReportFormat format,
                          NumberStyle style = NumberStyle::Fraction4);

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& json_text);

}  // namespace medmine

#endif
