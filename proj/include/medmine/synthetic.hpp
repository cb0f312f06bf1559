#ifndef MEDMINE_SYNTHETIC_HPP
#define MEDMINE_SYNTHETIC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medmine/core.hpp"

namespace medmine {

/// One sentence pattern with labeled slots, e.g.
/// "The patient was started on {Drug} last week."
struct SlotTemplate {
  struct Part {
    std::string literal;        // used when slot is absent
    std::optional<Label> slot;  // filled from the lexicon when present
  };
  std::vector<Part> parts;

  static SlotTemplate parse(std::string_view pattern);
  std::vector<Label> slot_labels() const;
};

struct GenSpec {
  std::uint64_t seed = 0;
  int n_docs = 10;
  /// Target gold-span count per label; empty selects the default
  /// corpus-shaped distribution (see default_targets()).
  std::map<Label, long> targets;
  std::vector<SlotTemplate> templates;               // empty selects the built-in bank
  std::map<Label, std::vector<std::string>> lexicon;  // empty selects the built-in bank
};

/// The default per-label distribution, shaped like the 76-letter reference
/// test set: Drug 3954, Form 1696, Strength 1639, Frequency 1564, Route 1341,
/// Dosage 1039, Reason 927, ADE 242, Duration 139.
std::map<Label, long> default_targets();

struct GenerationLedger {
  std::uint64_t seed = 0;
  long total = 0;
  std::map<Label, long> label_counts;
  std::map<std::string, std::map<Label, long>> per_doc;
};

struct GeneratedCorpus {
  Corpus corpus;
  GenerationLedger ledger;
};

/// Deterministic synthetic corpus with exactly the requested per-label span
/// counts; the ledger is ground truth by construction. Throws
/// TemplateMissingLabel when a targeted label has no template or lexicon.
GeneratedCorpus generate(const GenSpec& spec);

/// Controlled corruption of gold annotations into a simulated prediction.
struct NoiseSpec {
  std::uint64_t seed = 0;
  double default_deletion_p = 0.0;
  std::map<Label, double> deletion_p;  // overrides the default per label
  double jitter_p = 0.0;
  int max_jitter = 2;  // characters
  /// Row-stochastic label confusion; labels without a row keep their label.
  std::map<Label, std::map<Label, double>> confusion;
  double spurious_rate = 0.0;  // expected spurious spans per document
};

/// What happened to one gold span.
struct SpanAction {
  std::string gold_id;
  bool deleted = false;
  bool boundary_changed = false;
  bool label_changed = false;
  Label gold_label;
  Label pred_label;
  std::vector<Fragment> gold_fragments;
  std::vector<Fragment> pred_fragments;  // empty when deleted
};

struct PerturbationLedger {
  std::uint64_t seed = 0;
  std::vector<SpanAction> actions;
  std::vector<EntitySpan> spurious;
};

struct Perturbed {
  AnnotationSet prediction;
  PerturbationLedger ledger;
};

/// Applies deletion / boundary jitter / label confusion per gold span and
/// injects spurious spans in unannotated text only. Jitter is clamped so a
/// span never collapses and never loses all overlap with its original, and
/// never reaches into a neighboring gold span; spurious spans keep
/// max_jitter characters clear of every gold span. Together this makes the
/// ledger an exact predictor of the evaluation outcome.
Perturbed perturb(const Document& doc, const AnnotationSet& gold, const NoiseSpec& noise);

}  // namespace medmine

#endif
