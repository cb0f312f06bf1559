#ifndef MEDMINE_MATCHER_HPP
#define MEDMINE_MATCHER_HPP

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "medmine/core.hpp"

namespace medmine {

/// The four SemEval-2013 evaluation strategies.
/// Strict  - boundaries and label must both match.
/// Exact   - boundaries must match, label ignored.
/// Partial - boundary match scores full credit, any overlap scores half.
/// Type    - label must match, any overlap suffices (lenient matching).
enum class MatchMode { Strict, Exact, Partial, Type };

const char* to_string(MatchMode mode);
MatchMode parse_match_mode(std::string_view text);  // throws BadConfig
inline const MatchMode kAllModes[] = {MatchMode::Strict, MatchMode::Exact, MatchMode::Partial,
                                      MatchMode::Type};

/// COR/INC/PAR/MIS/SPU tallies for one (label, mode) cell. POSSIBLE and
/// ACTUAL are derived, never stored.
struct MatchCounts {
  long cor = 0;
  long inc = 0;
  long par = 0;
  long mis = 0;
  long spu = 0;

  long possible() const { return cor + inc + par + mis; }
  long actual() const { return cor + inc + par + spu; }

  MatchCounts& operator+=(const MatchCounts& other) {
    cor += other.cor;
    inc += other.inc;
    par += other.par;
    mis += other.mis;
    spu += other.spu;
    return *this;
  }
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

using LabelCounts = std::map<Label, MatchCounts>;

LabelCounts& operator+=(LabelCounts& into, const LabelCounts& other);

/// One-to-one pairing of gold and predicted spans; indices refer to the input
/// span vectors. Every pair overlaps by at least one character.
struct Alignment {
  struct Pair {
    std::size_t gold_index;
    std::size_t pred_index;
    std::size_t overlap;
  };
  std::vector<Pair> pairs;
  std::vector<std::size_t> unmatched_gold;
  std::vector<std::size_t> unmatched_pred;
};

/// Character overlap of the fragment unions of two spans.
std::size_t overlap_size(const EntitySpan& a, const EntitySpan& b);

/// Greedy one-to-one matching over candidate pairs with overlap > 0, ordered
/// by overlap size desc, then label-equality, then gold start, then pred
/// start. Deterministic and near-optimal.
Alignment align(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred);

struct ClassifiedCounts {
  LabelCounts per_label;
  MatchCounts overall;
};

/// Classifies every aligned pair and leftover span under one strategy.
/// Pairs and misses are attributed to the gold label, spurious spans to the
/// predicted label, so per-label POSSIBLE equals gold support.
ClassifiedCounts classify(const std::vector<EntitySpan>& gold, const std::vector<EntitySpan>& pred,
                          const Alignment& alignment, MatchMode mode);

ClassifiedCounts evaluate_document(const AnnotationSet& gold, const AnnotationSet& pred,
                                   MatchMode mode);

/// Sums per-label counts for one prediction source over the whole corpus.
/// Documents are scored independently (optionally on `parallel` threads);
/// per-label sums are associative, so the result does not depend on order.
LabelCounts evaluate_corpus(const Corpus& corpus, const std::string& source, MatchMode mode,
                            int parallel = 1);

}  // namespace medmine

#endif
