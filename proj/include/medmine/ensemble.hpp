#ifndef MEDMINE_ENSEMBLE_HPP
#define MEDMINE_ENSEMBLE_HPP

#include <map>
#include <string>
#include <vector>

#include "medmine/metrics.hpp"

namespace medmine {

/// How to combine prediction sets from several models into one.
struct MergeStrategy {
  enum class Kind { Union, Intersection, PerLabelBest, Priority };

  Kind kind = Kind::Union;
  /// COR criterion for Intersection ("same entity" is mode-dependent).
  MatchMode mode = MatchMode::Type;
  /// Union/PerLabelBest: drop overlapping spans with conflicting labels,
  /// keeping the higher-priority one. Off means predictions are only added.
  bool resolve_conflicts = true;
  /// Source priority; defaults to input order when empty.
  std::vector<std::string> priority;
  /// Per-source dev reports, required by PerLabelBest.
  std::map<std::string, EvaluationReport> dev_reports;

  static MergeStrategy union_all(bool resolve = true);
  static MergeStrategy intersection(MatchMode mode = MatchMode::Type);
  static MergeStrategy per_label_best(std::map<std::string, EvaluationReport> dev_reports);
  static MergeStrategy priority_order(std::vector<std::string> sources);
};

struct MergeResult {
  AnnotationSet merged;
  std::map<std::string, std::string> provenance;  // merged span id -> source
  int dropped_conflicts = 0;
};

/// Merges prediction sets over one document. Inputs carry their source name
/// in AnnotationSet::source; all must share a doc_id.
///   Union        - all spans, identical duplicates collapsed; optional
///                  conflict resolution for overlapping different-label spans.
///   Intersection - spans of source 1 confirmed by every other source under
///                  the chosen mode's COR criterion.
///   PerLabelBest - each label taken only from the source with the best dev
///                  F1 for it; cross-label overlaps resolved by dev F1.
///   Priority     - walk sources in priority order, keep spans that do not
///                  overlap anything already kept.
MergeResult merge(const std::vector<AnnotationSet>& inputs, const MergeStrategy& strategy);

/// argmax of per-label dev F1 across sources; ties go to the earlier source.
/// Reports must share one label set.
std::map<Label, std::string> per_label_table(
    const std::vector<std::pair<std::string, EvaluationReport>>& dev_reports);

}  // namespace medmine

#endif
