#ifndef MEDMINE_CORPUS_TOOLS_HPP
#define MEDMINE_CORPUS_TOOLS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "medmine/core.hpp"

namespace medmine {

struct SplitSpec {
  std::array<double, 3> ratios{0.70, 0.15, 0.15};  // train, dev, test; sum to 1
  std::uint64_t seed = 0;
};

struct SplitResult {
  Corpus train;
  Corpus dev;
  Corpus test;
};

/// Seeded uniform shuffle, then train = floor(n * r_train) documents and the
/// remainder divided between dev and test with dev taking the first surplus
/// document. 505 documents at 70/15/15 come out as (353, 76, 76). Gold and
/// predictions follow their documents.
SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec);

struct Token {
  std::string text;
  std::size_t start = 0;  // code points
  std::size_t end = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Rule tokenizer: maximal runs of letters/digits (any non-ASCII code point
/// counts as a letter) or single punctuation marks. "x-ray" -> [x][-][ray].
std::vector<Token> tokenize_text(const std::string& utf8_text);
std::vector<Token> tokenize(const Document& doc);

/// A token window over a parent document. Token offsets inside the chunk are
/// local; adding char_offset_base recovers parent offsets exactly.
struct Chunk {
  std::string doc_id;
  int index = 0;
  std::size_t first_token = 0;        // index of the first token in the parent
  std::size_t char_offset_base = 0;   // parent offset of the chunk text start
  std::size_t char_end = 0;           // parent offset one past the last token
  std::string text;                   // parent slice [char_offset_base, char_end)
  std::vector<Token> tokens;          // local offsets

  std::string chunk_id() const { return doc_id + ".c" + std::to_string(index); }
  std::size_t to_parent(std::size_t local_offset) const { return local_offset + char_offset_base; }
};

/// Sliding token windows of at most max_tokens tokens; consecutive chunks
/// share exactly `overlap` tokens. With overlap = 0 the chunks partition the
/// tokens. Requires max_tokens > overlap >= 0.
std::vector<Chunk> chunk_document(const Document& doc, int max_tokens = 512, int overlap = 0);

struct ChunkAnnotations {
  AnnotationSet set;          // local offsets, validated against the chunk text
  int dropped_crossing = 0;   // spans not fully inside the chunk window
};

ChunkAnnotations annotations_for_chunk(const Chunk& chunk, const AnnotationSet& set);

/// A token is tagged B-X/I-X iff it overlaps a fragment of a span labeled X;
/// the first token of each claimed run gets B-. When spans compete for a
/// token the longest span wins (ties: earliest start, then label name), with
/// one warning per losing span.
std::vector<std::string> spans_to_bio(const std::vector<Token>& tokens,
                                      const std::vector<EntitySpan>& spans,
                                      std::vector<std::string>* warnings = nullptr);

/// Maximal B/I runs become single-fragment spans from the first token start
/// to the last token end. Expects IOB2-repaired tags; orphan I-X is treated
/// as B-X.
std::vector<EntitySpan> bio_to_spans(const std::vector<Token>& tokens,
                                     const std::vector<std::string>& tags);

struct LabelStats {
  std::map<Label, long> span_counts;
  std::map<Label, long> doc_frequency;
  long total = 0;
};

LabelStats label_stats(const Corpus& corpus);

/// Duplicates documents that contain the label (fresh ids suffixed .dupN,
/// sampling with replacement under the seed) until the label's gold count
/// reaches factor times the original. Gold follows the duplicates.
Corpus oversample(const Corpus& corpus, const Label& label, double factor, std::uint64_t seed);

}  // namespace medmine

#endif
