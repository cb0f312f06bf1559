#include "medmine/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <thread>

namespace medmine {

const char* to_string(MatchMode mode) {
  switch (mode) {
    case MatchMode::Strict: return "strict";
    case MatchMode::Exact: return "exact";
    case MatchMode::Partial: return "partial";
    case MatchMode::Type: return "type";
  }
  return "?";
}

MatchMode parse_match_mode(std::string_view text) {
  std::string lowered(text);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lowered == "strict") return MatchMode::Strict;
  if (lowered == "exact") return MatchMode::Exact;
  if (lowered == "partial") return MatchMode::Partial;
  if (lowered == "type") return MatchMode::Type;
  throw Error(ErrorCode::BadConfig,
              "unknown mode \"" + std::string(text) + "\" (strict|exact|partial|type)");
}

LabelCounts& operator+=(LabelCounts& into, const LabelCounts& other) {
  for (const auto& [label, counts] : other) into[label] += counts;
  return into;
}

std::size_t overlap_size(const EntitySpan& a, const EntitySpan& b) {
  std::size_t total = 0;
  for (const Fragment& fa : a.fragments) {
    for (const Fragment& fb : b.fragments) {
      const std::size_t lo = std::max(fa.start, fb.start);
      const std::size_t hi = std::min(fa.end, fb.end);
      if (lo < hi) total += hi - lo;
    }
  }
  return total;
}

Alignment align(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred) {
  struct Candidate {
    std::size_t overlap;
    bool label_equal;
    std::size_t gold_start;
    std::size_t pred_start;
    std::size_t gold_index;
    std::size_t pred_index;
  };

  std::vector<Candidate> candidates;
  for (std::size_t g = 0; g < gold.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) {
      const std::size_t shared = overlap_size(gold[g], pred[p]);
      if (shared == 0) continue;
      candidates.push_back({shared, gold[g].label == pred[p].label, gold[g].extent().start,
                            pred[p].extent().start, g, p});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (a.label_equal != b.label_equal) return a.label_equal;
    if (a.gold_start != b.gold_start) return a.gold_start < b.gold_start;
    if (a.pred_start != b.pred_start) return a.pred_start < b.pred_start;
    if (a.gold_index != b.gold_index) return a.gold_index < b.gold_index;
    return a.pred_index < b.pred_index;
  });

  Alignment alignment;
  std::vector<bool> gold_used(gold.size(), false);
  std::vector<bool> pred_used(pred.size(), false);
  for (const Candidate& c : candidates) {
    if (gold_used[c.gold_index] || pred_used[c.pred_index]) continue;
    gold_used[c.gold_index] = true;
    pred_used[c.pred_index] = true;
    alignment.pairs.push_back({c.gold_index, c.pred_index, c.overlap});
  }
  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (!gold_used[g]) alignment.unmatched_gold.push_back(g);
  }
  for (std::size_t p = 0; p < pred.size(); ++p) {
    if (!pred_used[p]) alignment.unmatched_pred.push_back(p);
  }
  return alignment;
}

ClassifiedCounts classify(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred,
                          const Alignment& alignment, MatchMode mode) {
  ClassifiedCounts out;
  for (const Alignment::Pair& pair : alignment.pairs) {
    const EntitySpan& g = gold[pair.gold_index];
    const EntitySpan& p = pred[pair.pred_index];
    const bool boundaries_equal = g.fragments == p.fragments;
    const bool labels_equal = g.label == p.label;

    bool correct = false;
    bool partial = false;
    switch (mode) {
      case MatchMode::Strict: correct = boundaries_equal && labels_equal; break;
      case MatchMode::Exact: correct = boundaries_equal; break;
      case MatchMode::Partial:
        correct = boundaries_equal;
        partial = !boundaries_equal;
        break;
      case MatchMode::Type: correct = labels_equal; break;
    }

    MatchCounts& cell = out.per_label[g.label];
    if (correct) {
      ++cell.cor;
      ++out.overall.cor;
    } else if (partial) {
      ++cell.par;
      ++out.overall.par;
    } else {
      ++cell.inc;
      ++out.overall.inc;
    }
  }
  for (std::size_t g : alignment.unmatched_gold) {
    ++out.per_label[gold[g].label].mis;
    ++out.overall.mis;
  }
  for (std::size_t p : alignment.unmatched_pred) {
    ++out.per_label[pred[p].label].spu;
    ++out.overall.spu;
  }
  return out;
}

ClassifiedCounts evaluate_document(const AnnotationSet& gold, const AnnotationSet& pred,
                                   MatchMode mode) {
  if (gold.doc_id != pred.doc_id) {
    throw Error(ErrorCode::DocMismatch,
                "cannot score " + pred.doc_id + " against gold " + gold.doc_id);
  }
  return classify(gold.spans, pred.spans, align(gold.spans, pred.spans), mode);
}

LabelCounts evaluate_corpus(const Corpus& corpus, const std::string& source, MatchMode mode,
                            int parallel) {
  auto predictions = corpus.predictions.find(source);
  if (predictions == corpus.predictions.end()) {
    throw Error(ErrorCode::DocMismatch, "no predictions from source \"" + source + "\"");
  }

  static const AnnotationSet kEmpty;
  struct Job {
    const AnnotationSet* gold;
    const AnnotationSet* pred;
  };
  std::vector<Job> jobs;
  for (const Document& doc : corpus.documents) {
    auto gold_it = corpus.gold.find(doc.doc_id());
    auto pred_it = predictions->second.find(doc.doc_id());
    const AnnotationSet* gold = gold_it == corpus.gold.end() ? &kEmpty : &gold_it->second;
    const AnnotationSet* pred = pred_it == predictions->second.end() ? &kEmpty : &pred_it->second;
    jobs.push_back({gold, pred});
  }

  const int workers = std::max(1, std::min<int>(parallel, static_cast<int>(jobs.size())));
  std::vector<LabelCounts> partial(static_cast<std::size_t>(workers));
  auto run = [&](int worker) {
    for (std::size_t i = static_cast<std::size_t>(worker); i < jobs.size();
         i += static_cast<std::size_t>(workers)) {
      ClassifiedCounts counts =
          classify(jobs[i].gold->spans, jobs[i].pred->spans,
                   align(jobs[i].gold->spans, jobs[i].pred->spans), mode);
      partial[static_cast<std::size_t>(worker)] += counts.per_label;
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (std::thread& t : threads) t.join();
  }

  LabelCounts total;
  for (const LabelCounts& counts : partial) total += counts;
  return total;
}

}  // namespace medmine
