#include "medmine/corpus_tools.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "medmine/rng.hpp"

namespace medmine {

namespace {

void check_ratios(const SplitSpec& spec) {
  double sum = 0;
  for (double r : spec.ratios) {
    if (r < 0) throw Error(ErrorCode::BadConfig, "split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::BadConfig, "split ratios must sum to 1");
  }
}

Corpus take_documents(const Corpus& corpus, const std::vector<std::size_t>& indices) {
  Corpus out;
  for (std::size_t i : indices) {
    const Document& doc = corpus.documents[i];
    out.documents.push_back(doc);
    if (auto it = corpus.gold.find(doc.doc_id()); it != corpus.gold.end()) {
      out.gold.emplace(doc.doc_id(), it->second);
    }
    for (const auto& [source, sets] : corpus.predictions) {
      if (auto it = sets.find(doc.doc_id()); it != sets.end()) {
        out.predictions[source].emplace(doc.doc_id(), it->second);
      }
    }
  }
  return out;
}

}  // namespace

SplitResult split_corpus(const Corpus& corpus, const SplitSpec& spec) {
  check_ratios(spec);
  const std::size_t n = corpus.documents.size();
  if (n == 0) throw Error(ErrorCode::EmptyCorpus, "cannot split an empty corpus");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.shuffle(order);

  // floor() the train size; the fractional surplus lands in the later splits.
  // The epsilon keeps exact products like 10 * 0.7 from flooring down.
  const auto n_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.ratios[0] + 1e-9));
  const std::size_t remaining = n - n_train;
  const double dev_share = spec.ratios[1] + spec.ratios[2] > 0
                               ? spec.ratios[1] / (spec.ratios[1] + spec.ratios[2])
                               : 0.0;
  std::size_t n_dev =
      static_cast<std::size_t>(std::floor(static_cast<double>(remaining) * dev_share + 1e-9));
  const auto n_test_floor = static_cast<std::size_t>(
      std::floor(static_cast<double>(remaining) * (1.0 - dev_share) + 1e-9));
  // Dev gets the first surplus document when the two floors do not cover.
  n_dev += remaining - n_dev - n_test_floor;

  SplitResult result;
  result.train = take_documents(
      corpus, std::vector<std::size_t>(order.begin(), order.begin() + static_cast<long>(n_train)));
  result.dev = take_documents(
      corpus, std::vector<std::size_t>(order.begin() + static_cast<long>(n_train),
                                       order.begin() + static_cast<long>(n_train + n_dev)));
  result.test = take_documents(
      corpus, std::vector<std::size_t>(order.begin() + static_cast<long>(n_train + n_dev),
                                       order.end()));
  return result;
}

namespace {

bool is_space_cp(const std::string& cp) {
  if (cp.size() != 1) return false;
  switch (cp[0]) {
    case ' ': case '\t': case '\n': case '\r': case '\f': case '\v': return true;
    default: return false;
  }
}

bool is_word_cp(const std::string& cp) {
  if (cp.size() != 1) return true;  // treat non-ASCII as word characters
  const unsigned char c = static_cast<unsigned char>(cp[0]);
  return std::isalnum(c) != 0;
}

}  // namespace

std::vector<Token> tokenize_text(const std::string& utf8_text) {
  const Document doc("", utf8_text);
  std::vector<Token> tokens;
  const std::size_t n = doc.length();
  std::size_t i = 0;
  while (i < n) {
    const std::string cp = doc.slice(i, i + 1);
    if (is_space_cp(cp)) {
      ++i;
      continue;
    }
    if (is_word_cp(cp)) {
      std::size_t j = i + 1;
      while (j < n) {
        const std::string next = doc.slice(j, j + 1);
        if (is_space_cp(next) || !is_word_cp(next)) break;
        ++j;
      }
      tokens.push_back({doc.slice(i, j), i, j});
      i = j;
    } else {
      tokens.push_back({cp, i, i + 1});
      ++i;
    }
  }
  return tokens;
}

std::vector<Token> tokenize(const Document& doc) { return tokenize_text(doc.text()); }

std::vector<Chunk> chunk_document(const Document& doc, int max_tokens, int overlap) {
  if (max_tokens <= 0 || overlap < 0 || overlap >= max_tokens) {
    throw Error(ErrorCode::BadChunkParams,
                "need max_tokens > overlap >= 0, got max_tokens=" + std::to_string(max_tokens) +
                    " overlap=" + std::to_string(overlap));
  }

  const std::vector<Token> tokens = tokenize(doc);
  std::vector<Chunk> chunks;
  if (tokens.empty()) return chunks;

  const std::size_t n = tokens.size();
  const std::size_t window = static_cast<std::size_t>(max_tokens);
  const std::size_t stride = static_cast<std::size_t>(max_tokens - overlap);
  for (std::size_t start = 0;; start += stride) {
    const std::size_t end = std::min(start + window, n);
    Chunk chunk;
    chunk.doc_id = doc.doc_id();
    chunk.index = static_cast<int>(chunks.size());
    chunk.first_token = start;
    chunk.char_offset_base = tokens[start].start;
    chunk.char_end = tokens[end - 1].end;
    chunk.text = doc.slice(chunk.char_offset_base, chunk.char_end);
    chunk.tokens.reserve(end - start);
    for (std::size_t t = start; t < end; ++t) {
      chunk.tokens.push_back({tokens[t].text, tokens[t].start - chunk.char_offset_base,
                              tokens[t].end - chunk.char_offset_base});
    }
    chunks.push_back(std::move(chunk));
    if (end == n) break;
  }
  return chunks;
}

ChunkAnnotations annotations_for_chunk(const Chunk& chunk, const AnnotationSet& set) {
  ChunkAnnotations out;
  out.set.doc_id = chunk.chunk_id();
  out.set.source = set.source;
  for (const EntitySpan& span : set.spans) {
    const Fragment extent = span.extent();
    if (extent.start < chunk.char_offset_base || extent.end > chunk.char_end) {
      ++out.dropped_crossing;
      continue;
    }
    EntitySpan local = span;
    for (Fragment& f : local.fragments) {
      f.start -= chunk.char_offset_base;
      f.end -= chunk.char_offset_base;
    }
    out.set.spans.push_back(std::move(local));
  }
  return out;
}

std::vector<std::string> spans_to_bio(const std::vector<Token>& tokens,
                                      const std::vector<EntitySpan>& spans,
                                      std::vector<std::string>* warnings) {
  // Claim tokens span by span, longest first so nested/overlapping gold
  // resolves deterministically.
  std::vector<std::size_t> order(spans.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::size_t la = spans[a].total_length();
    const std::size_t lb = spans[b].total_length();
    if (la != lb) return la > lb;
    const std::size_t sa = spans[a].extent().start;
    const std::size_t sb = spans[b].extent().start;
    if (sa != sb) return sa < sb;
    if (spans[a].label.name() != spans[b].label.name()) {
      return spans[a].label.name() < spans[b].label.name();
    }
    return spans[a].id < spans[b].id;
  });

  constexpr std::size_t kUnclaimed = static_cast<std::size_t>(-1);
  std::vector<std::size_t> claimed(tokens.size(), kUnclaimed);
  for (std::size_t rank : order) {
    const EntitySpan& span = spans[rank];
    bool lost_any = false;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      bool overlaps = false;
      for (const Fragment& f : span.fragments) {
        if (std::max(f.start, tokens[t].start) < std::min(f.end, tokens[t].end)) {
          overlaps = true;
          break;
        }
      }
      if (!overlaps) continue;
      if (claimed[t] != kUnclaimed) {
        lost_any = true;
        continue;
      }
      claimed[t] = rank;
    }
    if (lost_any && warnings) {
      warnings->push_back("span " + span.id + " (" + span.label.name() +
                          ") overlaps a longer span; tokens went to the longer one");
    }
  }

  std::vector<std::string> tags(tokens.size(), "O");
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (claimed[t] == kUnclaimed) continue;
    const bool continues = t > 0 && claimed[t - 1] == claimed[t];
    tags[t] = (continues ? "I-" : "B-") + spans[claimed[t]].label.name();
  }
  return tags;
}

std::vector<EntitySpan> bio_to_spans(const std::vector<Token>& tokens,
                                     const std::vector<std::string>& tags) {
  if (tokens.size() != tags.size()) {
    throw Error(ErrorCode::LengthMismatch, "token/tag sequences differ in length");
  }

  std::vector<EntitySpan> spans;
  std::string current_suffix;
  std::size_t run_start = 0;

  auto flush = [&](std::size_t end_index) {
    if (current_suffix.empty()) return;
    EntitySpan span;
    span.id = "T" + std::to_string(spans.size() + 1);
    span.label = parse_label(current_suffix);
    span.fragments.push_back({tokens[run_start].start, tokens[end_index - 1].end});
    for (std::size_t t = run_start; t < end_index; ++t) {
      if (t > run_start) span.surface += ' ';
      span.surface += tokens[t].text;
    }
    spans.push_back(std::move(span));
    current_suffix.clear();
  };

  for (std::size_t t = 0; t < tags.size(); ++t) {
    const std::string& tag = tags[t];
    if (tag == "O" || tag.size() < 3) {
      flush(t);
      continue;
    }
    const std::string suffix = tag.substr(2);
    if (tag[0] == 'B' || suffix != current_suffix) {
      flush(t);
      current_suffix = suffix;
      run_start = t;
    }
  }
  flush(tags.size());
  return spans;
}

LabelStats label_stats(const Corpus& corpus) {
  LabelStats stats;
  for (const auto& [doc_id, set] : corpus.gold) {
    std::set<Label> seen;
    for (const EntitySpan& span : set.spans) {
      ++stats.span_counts[span.label];
      ++stats.total;
      seen.insert(span.label);
    }
    for (const Label& label : seen) ++stats.doc_frequency[label];
  }
  return stats;
}

Corpus oversample(const Corpus& corpus, const Label& label, double factor, std::uint64_t seed) {
  if (factor < 1.0) throw Error(ErrorCode::BadConfig, "oversampling factor must be >= 1");

  std::vector<std::string> carriers;  // doc ids containing the label
  long original = 0;
  std::map<std::string, long> per_doc;
  for (const auto& [doc_id, set] : corpus.gold) {
    long count = 0;
    for (const EntitySpan& span : set.spans) {
      if (span.label == label) ++count;
    }
    if (count > 0) {
      carriers.push_back(doc_id);
      per_doc[doc_id] = count;
      original += count;
    }
  }
  if (carriers.empty()) {
    throw Error(ErrorCode::LabelAbsent, "no document contains label " + label.name());
  }

  Corpus out = corpus;
  Rng rng(seed);
  long current = original;
  const double target = factor * static_cast<double>(original);
  std::map<std::string, int> dup_counter;
  while (static_cast<double>(current) + 1e-9 < target) {
    const std::string& picked = carriers[rng.below(carriers.size())];
    const std::string new_id = picked + ".dup" + std::to_string(++dup_counter[picked]);
    const Document* doc = corpus.find_document(picked);
    out.documents.emplace_back(new_id, doc->text());
    AnnotationSet gold_copy = corpus.gold.at(picked);
    gold_copy.doc_id = new_id;
    out.gold.emplace(new_id, std::move(gold_copy));
    current += per_doc[picked];
  }
  return out;
}

}  // namespace medmine
