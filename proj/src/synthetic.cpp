#include "medmine/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "medmine/rng.hpp"

namespace medmine {

SlotTemplate SlotTemplate::parse(std::string_view pattern) {
  SlotTemplate out;
  std::string literal;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      const std::size_t close = pattern.find('}', i);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::BadConfig, "unclosed { in template: " + std::string(pattern));
      }
      if (!literal.empty()) {
        out.parts.push_back({literal, std::nullopt});
        literal.clear();
      }
      const Label label = parse_label(pattern.substr(i + 1, close - i - 1));
      if (!label.known() || label.is_outside()) {
        throw Error(ErrorCode::BadConfig,
                    "template slot must be an entity label: " + std::string(pattern));
      }
      out.parts.push_back({"", label});
      i = close + 1;
    } else {
      literal += pattern[i++];
    }
  }
  if (!literal.empty()) out.parts.push_back({literal, std::nullopt});
  return out;
}

std::vector<Label> SlotTemplate::slot_labels() const {
  std::vector<Label> labels;
  for (const Part& part : parts) {
    if (part.slot) labels.push_back(*part.slot);
  }
  return labels;
}

std::map<Label, long> default_targets() {
  using Tag = Label::Tag;
  return {
      {Label(Tag::Drug), 3954},  {Label(Tag::Form), 1696},     {Label(Tag::Strength), 1639},
      {Label(Tag::Frequency), 1564}, {Label(Tag::Route), 1341}, {Label(Tag::Dosage), 1039},
      {Label(Tag::Reason), 927}, {Label(Tag::ADE), 242},       {Label(Tag::Duration), 139},
  };
}

namespace {

std::vector<SlotTemplate> default_templates() {
  static const char* kPatterns[] = {
      "The patient was started on {Drug} last week.",
      "She has been taking {Drug} since the last visit.",
      "We will continue {Drug} at the current dose.",
      "The dose was increased to {Strength} this morning.",
      "Pharmacy dispensed tablets of {Strength} strength.",
      "It is supplied as a {Form} for home use.",
      "Switched the preparation to a {Form} formulation.",
      "Instructions were to take it {Frequency} with food.",
      "The regimen stays at {Frequency} until review.",
      "The medication is given {Route} before breakfast.",
      "Administration remains {Route} for now.",
      "Advised to take {Dosage} at bedtime.",
      "The order reads {Dosage} per administration.",
      "Treatment should continue {Duration} unless advised.",
      "The course runs {Duration} in total.",
      "It was prescribed {Reason} after assessment.",
      "Given mainly {Reason} per the clinic note.",
      "The patient reported {ADE} after the first dose.",
      "Stopped because of {ADE} documented yesterday.",
  };
  std::vector<SlotTemplate> out;
  for (const char* pattern : kPatterns) out.push_back(SlotTemplate::parse(pattern));
  return out;
}

std::map<Label, std::vector<std::string>> default_lexicon() {
  using Tag = Label::Tag;
  return {
      {Label(Tag::Drug),
       {"aspirin", "metformin", "lisinopril", "warfarin", "atorvastatin", "amoxicillin",
        "prednisone", "omeprazole", "furosemide", "insulin glargine"}},
      {Label(Tag::Strength), {"81 mg", "500 mg", "10 mg", "20 mEq", "2.5 mg", "40 units"}},
      {Label(Tag::Form), {"tablet", "capsule", "cream", "solution", "inhaler", "patch"}},
      {Label(Tag::Frequency),
       {"twice daily", "once daily", "every 6 hours", "at bedtime as needed", "weekly"}},
      {Label(Tag::Route), {"by mouth", "orally", "intravenously", "topically", "subcutaneously"}},
      {Label(Tag::Dosage), {"one tablet", "two puffs", "1-2 tablets", "half a tablet", "30 units"}},
      {Label(Tag::Duration), {"for 5 days", "for two weeks", "for 10 days", "for three months"}},
      {Label(Tag::Reason),
       {"for pain", "for hypertension", "for high cholesterol", "for infection", "for anxiety"}},
      {Label(Tag::ADE), {"a mild rash", "nausea", "dizziness", "dry cough", "swelling of the ankles"}},
  };
}

std::size_t codepoint_length(const std::string& text) {
  std::size_t count = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

}  // namespace

GeneratedCorpus generate(const GenSpec& spec) {
  if (spec.n_docs <= 0) throw Error(ErrorCode::BadConfig, "n_docs must be positive");

  const std::map<Label, long> targets = spec.targets.empty() ? default_targets() : spec.targets;
  const std::vector<SlotTemplate> templates =
      spec.templates.empty() ? default_templates() : spec.templates;
  const std::map<Label, std::vector<std::string>> lexicon =
      spec.lexicon.empty() ? default_lexicon() : spec.lexicon;

  for (const auto& [label, count] : targets) {
    if (count < 0) throw Error(ErrorCode::BadConfig, "negative target for " + label.name());
    if (count == 0) continue;
    const bool templated = std::any_of(templates.begin(), templates.end(), [&](const auto& t) {
      const auto slots = t.slot_labels();
      return std::find(slots.begin(), slots.end(), label) != slots.end();
    });
    if (!templated) {
      throw Error(ErrorCode::TemplateMissingLabel, "no template covers " + label.name());
    }
    if (auto it = lexicon.find(label); it == lexicon.end() || it->second.empty()) {
      throw Error(ErrorCode::TemplateMissingLabel, "no lexicon entries for " + label.name());
    }
  }

  Rng rng(spec.seed);

  // Plan sentences so the per-label counts land exactly on the targets: a
  // template stays eligible while every one of its slots still has deficit.
  std::map<Label, long> deficit = targets;
  std::vector<std::size_t> plan;
  while (true) {
    std::vector<std::size_t> eligible;
    for (std::size_t t = 0; t < templates.size(); ++t) {
      std::map<Label, long> need;
      for (const Label& label : templates[t].slot_labels()) ++need[label];
      if (need.empty()) continue;
      bool fits = true;
      for (const auto& [label, count] : need) {
        auto it = deficit.find(label);
        if (it == deficit.end() || it->second < count) {
          fits = false;
          break;
        }
      }
      if (fits) eligible.push_back(t);
    }
    if (eligible.empty()) break;
    const std::size_t chosen = eligible[rng.below(eligible.size())];
    plan.push_back(chosen);
    for (const Label& label : templates[chosen].slot_labels()) --deficit[label];
  }
  for (const auto& [label, remaining] : deficit) {
    if (remaining > 0) {
      throw Error(ErrorCode::TemplateMissingLabel,
                  "templates cannot reach the exact target for " + label.name());
    }
  }
  rng.shuffle(plan);

  // Deal sentences round-robin, then assemble each document.
  struct Sentence {
    std::string text;
    std::vector<std::pair<Label, Fragment>> slots;  // sentence-local offsets
  };
  std::vector<std::vector<Sentence>> per_doc(static_cast<std::size_t>(spec.n_docs));
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const SlotTemplate& tmpl = templates[plan[i]];
    Sentence sentence;
    std::size_t cp = 0;
    for (const SlotTemplate::Part& part : tmpl.parts) {
      if (part.slot) {
        const auto& words = lexicon.at(*part.slot);
        const std::string& filled = words[rng.below(words.size())];
        const std::size_t len = codepoint_length(filled);
        sentence.slots.emplace_back(*part.slot, Fragment{cp, cp + len});
        sentence.text += filled;
        cp += len;
      } else {
        sentence.text += part.literal;
        cp += codepoint_length(part.literal);
      }
    }
    per_doc[i % static_cast<std::size_t>(spec.n_docs)].push_back(std::move(sentence));
  }

  GeneratedCorpus out;
  out.ledger.seed = spec.seed;
  char doc_name[32];
  for (std::size_t d = 0; d < per_doc.size(); ++d) {
    std::snprintf(doc_name, sizeof doc_name, "synth-%04zu", d + 1);
    std::string text;
    AnnotationSet gold;
    gold.doc_id = doc_name;
    gold.source = kGoldSource;
    std::size_t cp = 0;
    for (const Sentence& sentence : per_doc[d]) {
      if (!text.empty()) {
        text += ' ';
        ++cp;
      }
      for (const auto& [label, fragment] : sentence.slots) {
        EntitySpan span;
        span.id = "T" + std::to_string(gold.spans.size() + 1);
        span.label = label;
        span.fragments.push_back({cp + fragment.start, cp + fragment.end});
        gold.spans.push_back(std::move(span));
        ++out.ledger.label_counts[label];
        ++out.ledger.per_doc[doc_name][label];
        ++out.ledger.total;
      }
      text += sentence.text;
      cp += codepoint_length(sentence.text);
    }
    Document doc(doc_name, std::move(text));
    gold = validate_annotation_set(doc, gold, Validation::Strict);
    out.corpus.documents.push_back(std::move(doc));
    out.corpus.gold.emplace(doc_name, std::move(gold));
  }
  return out;
}

namespace {

void check_noise(const NoiseSpec& noise) {
  auto check_p = [](double p, const char* what) {
    if (p < 0.0 || p > 1.0) {
      throw Error(ErrorCode::BadConfig, std::string(what) + " must be in [0,1]");
    }
  };
  check_p(noise.default_deletion_p, "deletion probability");
  check_p(noise.jitter_p, "jitter probability");
  for (const auto& [label, p] : noise.deletion_p) check_p(p, "deletion probability");
  for (const auto& [label, row] : noise.confusion) {
    double sum = 0.0;
    for (const auto& [target, p] : row) {
      check_p(p, "confusion probability");
      sum += p;
    }
    if (sum > 1.0 + 1e-9) {
      throw Error(ErrorCode::BadConfig, "confusion row for " + label.name() + " sums above 1");
    }
  }
  if (noise.spurious_rate < 0.0) {
    throw Error(ErrorCode::BadConfig, "spurious rate must be non-negative");
  }
}

double deletion_probability(const NoiseSpec& noise, const Label& label) {
  if (auto it = noise.deletion_p.find(label); it != noise.deletion_p.end()) return it->second;
  return noise.default_deletion_p;
}

Label draw_confused_label(const NoiseSpec& noise, const Label& label, Rng& rng) {
  auto row = noise.confusion.find(label);
  if (row == noise.confusion.end()) return label;
  double u = rng.uniform();
  for (const auto& [target, p] : row->second) {
    if (u < p) return target;
    u -= p;
  }
  return label;  // leftover probability mass keeps the label
}

}  // namespace

Perturbed perturb(const Document& doc, const AnnotationSet& gold, const NoiseSpec& noise) {
  check_noise(noise);
  Perturbed out;
  out.prediction.doc_id = gold.doc_id;
  out.prediction.source = "perturbed";
  out.ledger.seed = noise.seed;

  // Stream derived from seed and doc id: reproducible per document, but
  // independent across the documents of one corpus.
  std::uint64_t stream = noise.seed ^ 0xcbf29ce484222325ULL;
  for (const char ch : gold.doc_id) {
    stream ^= static_cast<unsigned char>(ch);
    stream *= 0x100000001b3ULL;
  }

  // Neighbor bounds per span: jitter may not reach into an adjacent gold span.
  std::vector<std::size_t> order(gold.spans.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Fragment ea = gold.spans[a].extent();
    const Fragment eb = gold.spans[b].extent();
    if (ea.start != eb.start) return ea.start < eb.start;
    if (ea.end != eb.end) return ea.end < eb.end;
    return gold.spans[a].id < gold.spans[b].id;
  });
  std::vector<std::size_t> low(gold.spans.size(), 0);
  std::vector<std::size_t> high(gold.spans.size(), doc.length());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (rank > 0) low[order[rank]] = gold.spans[order[rank - 1]].extent().end;
    if (rank + 1 < order.size()) high[order[rank]] = gold.spans[order[rank + 1]].extent().start;
  }

  Rng rng(stream);
  for (std::size_t i = 0; i < gold.spans.size(); ++i) {
    const EntitySpan& span = gold.spans[i];
    SpanAction action;
    action.gold_id = span.id;
    action.gold_label = span.label;
    action.pred_label = span.label;
    action.gold_fragments = span.fragments;

    if (rng.bernoulli(deletion_probability(noise, span.label))) {
      action.deleted = true;
      out.ledger.actions.push_back(std::move(action));
      continue;
    }

    EntitySpan pred = span;
    if (noise.jitter_p > 0.0 && rng.bernoulli(noise.jitter_p)) {
      const std::size_t first_end = pred.fragments.front().end;
      const std::size_t last_start = pred.fragments.back().start;
      const auto orig_start = static_cast<std::int64_t>(pred.fragments.front().start);
      const auto orig_end = static_cast<std::int64_t>(pred.fragments.back().end);
      const std::int64_t j = noise.max_jitter;
      const auto lo_bound = static_cast<std::int64_t>(low[i]);
      const auto hi_bound = static_cast<std::int64_t>(high[i]);
      for (int attempt = 0; attempt < 16; ++attempt) {
        std::int64_t ns = orig_start + rng.range(-j, j);
        std::int64_t ne = orig_end + rng.range(-j, j);
        // Keep the span non-empty, overlapping its original extent, and out
        // of the neighboring gold spans.
        if (lo_bound > static_cast<std::int64_t>(first_end) - 1 ||
            static_cast<std::int64_t>(last_start) + 1 > hi_bound) {
          break;  // no room to move (overlapping gold); leave it unjittered
        }
        ns = std::clamp(ns, lo_bound, static_cast<std::int64_t>(first_end) - 1);
        ne = std::clamp(ne, static_cast<std::int64_t>(last_start) + 1, hi_bound);
        if (ns >= ne) continue;
        if (ns == orig_start && ne == orig_end) continue;
        pred.fragments.front().start = static_cast<std::size_t>(ns);
        pred.fragments.back().end = static_cast<std::size_t>(ne);
        action.boundary_changed = true;
        break;
      }
    }

    const Label confused = draw_confused_label(noise, span.label, rng);
    if (!(confused == span.label)) {
      pred.label = confused;
      action.label_changed = true;
      action.pred_label = confused;
    }

    pred.surface.clear();
    pred = validate_span(doc, pred);
    action.pred_fragments = pred.fragments;
    out.ledger.actions.push_back(std::move(action));
    out.prediction.spans.push_back(std::move(pred));
  }

  // Spurious spans live strictly in unannotated text and additionally keep
  // max_jitter characters clear of every gold span, so they can never touch
  // a jittered prediction, not even one from another perturbation run.
  long n_spurious = static_cast<long>(noise.spurious_rate);
  if (rng.bernoulli(noise.spurious_rate - static_cast<double>(n_spurious))) ++n_spurious;
  if (n_spurious > 0) {
    const auto margin = static_cast<std::size_t>(std::max(noise.max_jitter, 0));
    std::vector<Fragment> gaps;
    std::size_t cursor = 0;
    bool after_span = false;
    auto add_gap = [&](std::size_t from, std::size_t to, bool pad_left, bool pad_right) {
      if (pad_left) from += margin;
      if (pad_right) to = to > margin ? to - margin : 0;
      if (from < to) gaps.push_back({from, to});
    };
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const Fragment extent = gold.spans[order[rank]].extent();
      if (extent.start > cursor) add_gap(cursor, extent.start, after_span, true);
      cursor = std::max(cursor, extent.end);
      after_span = true;
    }
    if (cursor < doc.length()) add_gap(cursor, doc.length(), after_span, false);

    const std::size_t min_len = 3;
    for (long s = 0; s < n_spurious; ++s) {
      std::vector<std::size_t> roomy;
      for (std::size_t g = 0; g < gaps.size(); ++g) {
        if (gaps[g].length() >= min_len) roomy.push_back(g);
      }
      if (roomy.empty()) break;
      const std::size_t g = roomy[rng.below(roomy.size())];
      const std::size_t max_len = std::min<std::size_t>(8, gaps[g].length());
      const std::size_t len = min_len + rng.below(max_len - min_len + 1);
      const std::size_t start = gaps[g].start + rng.below(gaps[g].length() - len + 1);

      EntitySpan spurious;
      spurious.id = "S" + std::to_string(out.ledger.spurious.size() + 1);
      const auto& labels = Label::entity_labels();
      spurious.label = labels[rng.below(labels.size())];
      spurious.fragments.push_back({start, start + len});
      spurious = validate_span(doc, spurious);

      // Split the gap so spurious spans stay disjoint from each other.
      const Fragment used{start, start + len};
      const Fragment old = gaps[g];
      gaps.erase(gaps.begin() + static_cast<long>(g));
      if (used.start > old.start) gaps.push_back({old.start, used.start});
      if (used.end < old.end) gaps.push_back({used.end, old.end});

      out.ledger.spurious.push_back(spurious);
      out.prediction.spans.push_back(std::move(spurious));
    }
  }
  return out;
}

}  // namespace medmine
