// Seeded input generators for property-style tests.

#ifndef MEDMINE_TESTS_GENERATORS_HPP
#define MEDMINE_TESTS_GENERATORS_HPP

#include <string>
#include <vector>

#include "medmine/core.hpp"
#include "medmine/corpus_tools.hpp"
#include "medmine/rng.hpp"

namespace gen {

inline medmine::Label random_entity_label(medmine::Rng& rng) {
  const auto& labels = medmine::Label::entity_labels();
  return labels[rng.below(labels.size())];
}

/// Plain ASCII word soup, length >= min_len code points.
inline medmine::Document random_document(medmine::Rng& rng, const std::string& doc_id,
                                         std::size_t min_len = 40) {
  static const char* kWords[] = {"take",  "daily", "oral",   "dose",  "note", "stop",
                                 "renal", "pain",  "review", "chart", "week", "clinic"};
  std::string text;
  while (text.size() < min_len) {
    if (!text.empty()) text += ' ';
    text += kWords[rng.below(std::size(kWords))];
  }
  return medmine::Document(doc_id, text);
}

/// Valid spans over the document; roughly one in four is discontinuous.
/// Spans may overlap each other (annotation sets allow that).
inline std::vector<medmine::EntitySpan> random_spans(medmine::Rng& rng,
                                                     const medmine::Document& doc,
                                                     std::size_t count) {
  std::vector<medmine::EntitySpan> spans;
  const std::size_t len = doc.length();
  for (std::size_t i = 0; i < count && len >= 2; ++i) {
    medmine::EntitySpan span;
    span.id = "T" + std::to_string(i + 1);
    span.label = random_entity_label(rng);
    const std::size_t start = rng.below(len - 1);
    const std::size_t end = start + 1 + rng.below(std::min<std::size_t>(len - start - 1, 8) + 1);
    if (rng.below(4) == 0 && end + 2 < len) {
      const std::size_t start2 = end + 1 + rng.below(std::min<std::size_t>(len - end - 2, 5) + 1);
      const std::size_t end2 =
          start2 + 1 + rng.below(std::min<std::size_t>(len - start2 - 1, 5) + 1);
      span.fragments = {{start, end}, {start2, std::min(end2, len)}};
    } else {
      span.fragments = {{start, end}};
    }
    spans.push_back(medmine::validate_span(doc, span));
  }
  return spans;
}

/// Non-overlapping token-aligned spans, the class that BIO round-trips.
inline std::vector<medmine::EntitySpan> token_aligned_spans(medmine::Rng& rng,
                                                            const medmine::Document& doc,
                                                            std::size_t max_spans) {
  const std::vector<medmine::Token> tokens = medmine::tokenize(doc);
  std::vector<medmine::EntitySpan> spans;
  std::size_t t = 0;
  while (t < tokens.size() && spans.size() < max_spans) {
    if (rng.below(3) == 0) {
      const std::size_t span_tokens = 1 + rng.below(std::min<std::size_t>(tokens.size() - t, 3));
      medmine::EntitySpan span;
      span.id = "T" + std::to_string(spans.size() + 1);
      span.label = random_entity_label(rng);
      span.fragments = {{tokens[t].start, tokens[t + span_tokens - 1].end}};
      spans.push_back(medmine::validate_span(doc, span));
      t += span_tokens + 1;  // leave a gap so spans stay non-adjacent
    } else {
      ++t;
    }
  }
  return spans;
}

}  // namespace gen

#endif
