#include "medmine/ensemble.hpp"

#include <algorithm>

namespace medmine {

MergeStrategy MergeStrategy::union_all(bool resolve) {
  MergeStrategy s;
  s.kind = Kind::Union;
  s.resolve_conflicts = resolve;
  return s;
}

MergeStrategy MergeStrategy::intersection(MatchMode mode) {
  MergeStrategy s;
  s.kind = Kind::Intersection;
  s.mode = mode;
  return s;
}

MergeStrategy MergeStrategy::per_label_best(std::map<std::string, EvaluationReport> dev_reports) {
  MergeStrategy s;
  s.kind = Kind::PerLabelBest;
  s.dev_reports = std::move(dev_reports);
  return s;
}

MergeStrategy MergeStrategy::priority_order(std::vector<std::string> sources) {
  MergeStrategy s;
  s.kind = Kind::Priority;
  s.priority = std::move(sources);
  return s;
}

std::map<Label, std::string> per_label_table(
    const std::vector<std::pair<std::string, EvaluationReport>>& dev_reports) {
  if (dev_reports.empty()) {
    throw Error(ErrorCode::MissingDevReport, "per-label selection needs at least one report");
  }
  const LabelRows& reference = dev_reports.front().second.per_label;
  for (const auto& [source, report] : dev_reports) {
    for (const auto& [label, row] : reference) {
      if (!report.per_label.contains(label)) {
        throw Error(ErrorCode::MissingLabel,
                    "report for " + source + " lacks label " + label.name());
      }
    }
    if (report.per_label.size() != reference.size()) {
      throw Error(ErrorCode::MissingLabel, "reports do not share one label set");
    }
  }

  std::map<Label, std::string> winners;
  for (const auto& [label, row] : reference) {
    double best = -1.0;
    for (const auto& [source, report] : dev_reports) {
      const double f1 = report.per_label.at(label).f1;
      if (f1 > best) {
        best = f1;
        winners[label] = source;
      }
    }
  }
  return winners;
}

namespace {

struct Candidate {
  const EntitySpan* span;
  std::string source;
  std::size_t source_rank;
  double score = 0.0;  // dev F1 for PerLabelBest
};

/// Source order used for priority: explicit list first, then input order.
std::vector<std::string> resolve_priority(const std::vector<AnnotationSet>& inputs,
                                          const std::vector<std::string>& requested) {
  std::vector<std::string> order = requested;
  for (const AnnotationSet& set : inputs) {
    if (std::find(order.begin(), order.end(), set.source) == order.end()) {
      order.push_back(set.source);
    }
  }
  return order;
}

std::size_t rank_of(const std::vector<std::string>& order, const std::string& source) {
  const auto it = std::find(order.begin(), order.end(), source);
  return static_cast<std::size_t>(it - order.begin());
}

bool spans_identical(const EntitySpan& a, const EntitySpan& b) {
  return a.label == b.label && a.fragments == b.fragments;
}

bool cor_criterion(MatchMode mode, const EntitySpan& a, const EntitySpan& b) {
  const bool boundaries = a.fragments == b.fragments;
  const bool labels = a.label == b.label;
  switch (mode) {
    case MatchMode::Strict: return boundaries && labels;
    case MatchMode::Exact: return boundaries;
    case MatchMode::Partial: return boundaries;
    case MatchMode::Type: return labels && overlap_size(a, b) > 0;
  }
  return false;
}

void append_span(MergeResult& result, const EntitySpan& span, const std::string& source,
                 std::map<std::string, int>& used_ids) {
  EntitySpan copy = span;
  if (++used_ids[copy.id] > 1) {
    copy.id += "." + std::to_string(used_ids[copy.id]);
  }
  result.provenance[copy.id] = source;
  result.merged.spans.push_back(std::move(copy));
}

/// Stable candidate order: priority rank, then document position, then id.
void sort_candidates(std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.source_rank != b.source_rank) return a.source_rank < b.source_rank;
    const Fragment ea = a.span->extent();
    const Fragment eb = b.span->extent();
    if (ea.start != eb.start) return ea.start < eb.start;
    if (ea.end != eb.end) return ea.end < eb.end;
    return a.span->id < b.span->id;
  });
}

}  // namespace

MergeResult merge(const std::vector<AnnotationSet>& inputs, const MergeStrategy& strategy) {
  if (inputs.empty()) throw Error(ErrorCode::EmptyCorpus, "nothing to merge");
  for (const AnnotationSet& set : inputs) {
    if (set.doc_id != inputs.front().doc_id) {
      throw Error(ErrorCode::DocMismatch,
                  "merge inputs span documents " + inputs.front().doc_id + " and " + set.doc_id);
    }
  }

  const std::vector<std::string> priority = resolve_priority(inputs, strategy.priority);
  MergeResult result;
  result.merged.doc_id = inputs.front().doc_id;
  result.merged.source = "merged";
  std::map<std::string, int> used_ids;

  if (strategy.kind == MergeStrategy::Kind::Intersection) {
    const AnnotationSet& base = inputs.front();
    for (const EntitySpan& span : base.spans) {
      bool confirmed = true;
      for (std::size_t s = 1; s < inputs.size(); ++s) {
        const auto& others = inputs[s].spans;
        confirmed = std::any_of(others.begin(), others.end(), [&](const EntitySpan& other) {
          return cor_criterion(strategy.mode, span, other);
        });
        if (!confirmed) break;
      }
      if (confirmed) append_span(result, span, base.source, used_ids);
    }
    return result;
  }

  std::vector<Candidate> candidates;
  if (strategy.kind == MergeStrategy::Kind::PerLabelBest) {
    for (const AnnotationSet& set : inputs) {
      if (!strategy.dev_reports.contains(set.source)) {
        throw Error(ErrorCode::MissingDevReport, "no dev report for source " + set.source);
      }
    }
    std::vector<std::pair<std::string, EvaluationReport>> ordered_reports;
    for (const std::string& source : priority) {
      if (auto it = strategy.dev_reports.find(source); it != strategy.dev_reports.end()) {
        ordered_reports.emplace_back(source, it->second);
      }
    }
    const std::map<Label, std::string> winners = per_label_table(ordered_reports);
    for (const AnnotationSet& set : inputs) {
      for (const EntitySpan& span : set.spans) {
        auto winner = winners.find(span.label);
        if (winner == winners.end()) {
          throw Error(ErrorCode::MissingLabel,
                      "dev reports lack label " + span.label.name() + " found in predictions");
        }
        if (winner->second != set.source) continue;
        const double f1 = strategy.dev_reports.at(set.source).per_label.at(span.label).f1;
        candidates.push_back({&span, set.source, rank_of(priority, set.source), f1});
      }
    }
    // Cross-label overlaps resolve by dev F1 of the span's label.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.source_rank != b.source_rank) return a.source_rank < b.source_rank;
      const Fragment ea = a.span->extent();
      const Fragment eb = b.span->extent();
      if (ea.start != eb.start) return ea.start < eb.start;
      return a.span->id < b.span->id;
    });
  } else {
    for (const AnnotationSet& set : inputs) {
      for (const EntitySpan& span : set.spans) {
        candidates.push_back({&span, set.source, rank_of(priority, set.source)});
      }
    }
    sort_candidates(candidates);
  }

  std::vector<const EntitySpan*> kept;
  std::vector<std::size_t> kept_candidate;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const EntitySpan& span = *candidates[c].span;
    bool drop = false;
    for (std::size_t k = 0; k < kept.size() && !drop; ++k) {
      const EntitySpan& existing = *kept[k];
      if (spans_identical(existing, span)) {
        drop = true;  // duplicate across sources, keep the first copy
      } else if (strategy.kind == MergeStrategy::Kind::Priority) {
        drop = overlap_size(existing, span) > 0;
        if (drop) ++result.dropped_conflicts;
      } else if (strategy.resolve_conflicts && !(existing.label == span.label) &&
                 overlap_size(existing, span) > 0) {
        drop = true;  // conflicting label on overlapping text, earlier wins
        ++result.dropped_conflicts;
      }
    }
    if (!drop) {
      kept.push_back(candidates[c].span);
      kept_candidate.push_back(c);
    }
  }

  // Emit in document order for stable output files.
  std::vector<std::size_t> emit(kept.size());
  for (std::size_t i = 0; i < emit.size(); ++i) emit[i] = i;
  std::sort(emit.begin(), emit.end(), [&](std::size_t a, std::size_t b) {
    const Fragment ea = kept[a]->extent();
    const Fragment eb = kept[b]->extent();
    if (ea.start != eb.start) return ea.start < eb.start;
    if (ea.end != eb.end) return ea.end < eb.end;
    if (kept[a]->id != kept[b]->id) return kept[a]->id < kept[b]->id;
    return candidates[kept_candidate[a]].source_rank < candidates[kept_candidate[b]].source_rank;
  });
  for (std::size_t i : emit) {
    append_span(result, *kept[i], candidates[kept_candidate[i]].source, used_ids);
  }
  return result;
}

}  // namespace medmine
