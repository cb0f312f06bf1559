#include <doctest.h>

#include <set>

#include "medmine/corpus_tools.hpp"
#include "medmine/synthetic.hpp"

#include "generators.hpp"

using namespace medmine;

namespace {

Corpus numbered_corpus(int n) {
  Corpus corpus;
  for (int i = 0; i < n; ++i) {
    corpus.documents.emplace_back("doc-" + std::to_string(i), "body " + std::to_string(i));
  }
  return corpus;
}

std::set<std::string> ids_of(const Corpus& corpus) {
  std::set<std::string> ids;
  for (const Document& doc : corpus.documents) ids.insert(doc.doc_id());
  return ids;
}

}  // namespace

TEST_CASE("505 documents at 70/15/15 split into 353/76/76") {
  const Corpus corpus = numbered_corpus(505);
  const SplitResult result = split_corpus(corpus, SplitSpec{{0.70, 0.15, 0.15}, 99});
  CHECK(result.train.documents.size() == 353);
  CHECK(result.dev.documents.size() == 76);
  CHECK(result.test.documents.size() == 76);
}

TEST_CASE("degenerate ratios put everything in train") {
  const SplitResult result = split_corpus(numbered_corpus(10), SplitSpec{{1.0, 0.0, 0.0}, 1});
  CHECK(result.train.documents.size() == 10);
  CHECK(result.dev.documents.size() == 0);
  CHECK(result.test.documents.size() == 0);
}

TEST_CASE("same seed gives identical membership, splits are a disjoint cover") {
  const Corpus corpus = numbered_corpus(20);
  const SplitSpec spec{{0.70, 0.15, 0.15}, 7};
  const SplitResult a = split_corpus(corpus, spec);
  const SplitResult b = split_corpus(corpus, spec);
  CHECK(ids_of(a.train) == ids_of(b.train));
  CHECK(ids_of(a.dev) == ids_of(b.dev));
  CHECK(ids_of(a.test) == ids_of(b.test));

  std::set<std::string> all = ids_of(a.train);
  for (const std::string& id : ids_of(a.dev)) CHECK(all.insert(id).second);
  for (const std::string& id : ids_of(a.test)) CHECK(all.insert(id).second);
  CHECK(all == ids_of(corpus));
}

TEST_CASE("odd remainders hand the surplus document to dev first") {
  // 15 docs at 70/15/15: train 10, remainder 5 -> dev 3 (takes the surplus), test 2.
  const SplitResult a = split_corpus(numbered_corpus(15), SplitSpec{{0.70, 0.15, 0.15}, 3});
  CHECK(a.train.documents.size() == 10);
  CHECK(a.dev.documents.size() == 3);
  CHECK(a.test.documents.size() == 2);
  // Even remainder: no surplus to hand out.
  const SplitResult b = split_corpus(numbered_corpus(13), SplitSpec{{0.70, 0.15, 0.15}, 3});
  CHECK(b.train.documents.size() == 9);
  CHECK(b.dev.documents.size() == 2);
  CHECK(b.test.documents.size() == 2);
}

TEST_CASE("splitting an empty corpus fails") {
  try {
    split_corpus(Corpus{}, SplitSpec{});
    FAIL("expected EmptyCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCorpus);
  }
}

TEST_CASE("split ratios must be non-negative and sum to one") {
  const Corpus corpus = numbered_corpus(4);
  CHECK_THROWS_AS(split_corpus(corpus, SplitSpec{{0.5, 0.4, 0.2}, 1}), Error);
  CHECK_THROWS_AS(split_corpus(corpus, SplitSpec{{1.2, -0.1, -0.1}, 1}), Error);
}

TEST_CASE("gold and predictions follow their documents through a split") {
  GenSpec spec;
  spec.seed = 5;
  spec.n_docs = 12;
  spec.targets = {{parse_label("Drug"), 24}, {parse_label("ADE"), 6}};
  GeneratedCorpus generated = generate(spec);
  for (const auto& [doc_id, set] : generated.corpus.gold) {
    AnnotationSet pred = set;
    pred.source = "m";
    generated.corpus.predictions["m"].emplace(doc_id, std::move(pred));
  }

  const SplitResult result = split_corpus(generated.corpus, SplitSpec{{0.5, 0.25, 0.25}, 2});
  for (const Corpus* part : {&result.train, &result.dev, &result.test}) {
    part->check();
    for (const Document& doc : part->documents) {
      CHECK(part->gold.count(doc.doc_id()) == 1);
      CHECK(part->predictions.at("m").count(doc.doc_id()) == 1);
    }
  }
}

TEST_CASE("tokenizer splits words, numbers and punctuation") {
  const std::vector<Token> tokens = tokenize_text("Aspirin 81 mg PO daily.");
  REQUIRE(tokens.size() == 6);
  CHECK(tokens[0].text == "Aspirin");
  CHECK(tokens[1].text == "81");
  CHECK(tokens[2].text == "mg");
  CHECK(tokens[3].text == "PO");
  CHECK(tokens[4].text == "daily");
  CHECK(tokens[5].text == ".");
  CHECK(tokens[5].start == 22);
  CHECK(tokens[5].end == 23);

  CHECK(tokenize_text("").empty());

  const std::vector<Token> hyphen = tokenize_text("x-ray");
  REQUIRE(hyphen.size() == 3);
  CHECK(hyphen[0].text == "x");
  CHECK(hyphen[1].text == "-");
  CHECK(hyphen[2].text == "ray");
}

namespace {

Document long_document(std::size_t n_tokens) {
  std::string text;
  for (std::size_t i = 0; i < n_tokens; ++i) {
    if (!text.empty()) text += ' ';
    text += "w" + std::to_string(i);
  }
  return Document("long", text);
}

}  // namespace

TEST_CASE("1300 tokens chunk into 512+512+276") {
  const Document doc = long_document(1300);
  const std::vector<Chunk> chunks = chunk_document(doc, 512, 0);
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[0].tokens.size() == 512);
  CHECK(chunks[1].tokens.size() == 512);
  CHECK(chunks[2].tokens.size() == 276);
  CHECK(chunks[0].first_token == 0);
  CHECK(chunks[1].first_token == 512);
  CHECK(chunks[2].first_token == 1024);
}

TEST_CASE("short documents come back as one chunk") {
  const std::vector<Chunk> chunks = chunk_document(long_document(100), 512, 0);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].tokens.size() == 100);
}

TEST_CASE("overlapping windows start every max-overlap tokens") {
  const std::vector<Chunk> chunks = chunk_document(long_document(1300), 512, 64);
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[0].first_token == 0);
  CHECK(chunks[1].first_token == 448);
  CHECK(chunks[2].first_token == 896);
  CHECK(chunks[0].tokens.size() == 512);
  CHECK(chunks[1].tokens.size() == 512);
  CHECK(chunks[2].tokens.size() == 404);
}

TEST_CASE("a window covering everything yields a single chunk even with overlap") {
  const std::vector<Chunk> chunks = chunk_document(long_document(512), 512, 64);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0].tokens.size() == 512);
}

TEST_CASE("bad chunk parameters are rejected") {
  const Document doc = long_document(10);
  CHECK_THROWS_AS(chunk_document(doc, 0, 0), Error);
  CHECK_THROWS_AS(chunk_document(doc, 8, 8), Error);
  CHECK_THROWS_AS(chunk_document(doc, 8, -1), Error);
}

TEST_CASE("chunks partition tokens and offsets remap exactly") {
  Rng rng(17);
  for (int round = 0; round < 20; ++round) {
    const Document doc = gen::random_document(rng, "d", 200 + rng.below(400));
    const std::vector<Token> tokens = tokenize(doc);
    const int max_tokens = 16 + static_cast<int>(rng.below(32));
    const std::vector<Chunk> chunks = chunk_document(doc, max_tokens, 0);

    std::size_t covered = 0;
    for (const Chunk& chunk : chunks) {
      CHECK(chunk.first_token == covered);
      for (std::size_t t = 0; t < chunk.tokens.size(); ++t) {
        const Token& local = chunk.tokens[t];
        const Token& parent = tokens[chunk.first_token + t];
        CHECK(chunk.to_parent(local.start) == parent.start);
        CHECK(chunk.to_parent(local.end) == parent.end);
        CHECK(local.text == parent.text);
      }
      covered += chunk.tokens.size();
    }
    CHECK(covered == tokens.size());
  }
}

TEST_CASE("chunk annotations stay valid locally and remap to the parent") {
  GenSpec spec;
  spec.seed = 9;
  spec.n_docs = 1;
  spec.targets = {{parse_label("Drug"), 40}, {parse_label("Route"), 20}};
  const GeneratedCorpus generated = generate(spec);
  const Document& doc = generated.corpus.documents[0];
  const AnnotationSet& gold = generated.corpus.gold.at(doc.doc_id());

  int kept = 0;
  for (const Chunk& chunk : chunk_document(doc, 64, 0)) {
    const Document chunk_doc(chunk.chunk_id(), chunk.text);
    const ChunkAnnotations local = annotations_for_chunk(chunk, gold);
    for (const EntitySpan& span : local.set.spans) {
      const EntitySpan checked = validate_span(chunk_doc, span, Validation::Strict);
      EntitySpan remapped = checked;
      for (Fragment& f : remapped.fragments) {
        f.start = chunk.to_parent(f.start);
        f.end = chunk.to_parent(f.end);
      }
      remapped.surface.clear();
      const EntitySpan against_parent = validate_span(doc, remapped, Validation::Strict);
      CHECK(against_parent.surface == checked.surface);
      ++kept;
    }
  }
  CHECK(kept > 0);
}

TEST_CASE("spans_to_bio tags overlapping tokens") {
  const Document doc("d", "Aspirin 81 mg");
  const std::vector<Token> tokens = tokenize(doc);
  EntitySpan drug;
  drug.id = "T1";
  drug.label = parse_label("Drug");
  drug.fragments = {{0, 7}};
  EntitySpan strength;
  strength.id = "T2";
  strength.label = parse_label("Strength");
  strength.fragments = {{8, 13}};

  const std::vector<std::string> tags = spans_to_bio(tokens, {drug, strength});
  CHECK(tags == std::vector<std::string>{"B-Drug", "B-Strength", "I-Strength"});

  CHECK(spans_to_bio(tokens, {}) == std::vector<std::string>{"O", "O", "O"});
}

TEST_CASE("nested spans: the longer one wins every token") {
  const Document doc("d", "aspirin works");
  const std::vector<Token> tokens = tokenize(doc);
  EntitySpan drug;
  drug.id = "T1";
  drug.label = parse_label("Drug");
  drug.fragments = {{0, 7}};
  EntitySpan reason;
  reason.id = "T2";
  reason.label = parse_label("Reason");
  reason.fragments = {{0, 13}};

  std::vector<std::string> warnings;
  const std::vector<std::string> tags = spans_to_bio(tokens, {drug, reason}, &warnings);
  CHECK(tags == std::vector<std::string>{"B-Reason", "I-Reason"});
  CHECK(warnings.size() == 1);
}

TEST_CASE("bio_to_spans rebuilds runs") {
  const Document doc("d", "aspirin sulfate daily");
  const std::vector<Token> tokens = tokenize(doc);
  const std::vector<EntitySpan> spans =
      bio_to_spans(tokens, {"B-Drug", "I-Drug", "O"});
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].label.name() == "Drug");
  CHECK(spans[0].fragments == std::vector<Fragment>{{0, 15}});
  CHECK(spans[0].surface == "aspirin sulfate");

  CHECK(bio_to_spans(tokens, {"O", "O", "O"}).empty());
}

TEST_CASE("bio round-trip preserves label and extent") {
  Rng rng(41);
  for (int round = 0; round < 200; ++round) {
    const Document doc = gen::random_document(rng, "d", 80);
    const std::vector<Token> tokens = tokenize(doc);
    const std::vector<EntitySpan> spans = gen::token_aligned_spans(rng, doc, 6);

    const std::vector<EntitySpan> rebuilt = bio_to_spans(tokens, spans_to_bio(tokens, spans));
    REQUIRE(rebuilt.size() == spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
      CHECK(rebuilt[i].label == spans[i].label);
      CHECK(rebuilt[i].extent() == spans[i].extent());
    }
  }
}

TEST_CASE("label_stats counts spans and document frequency") {
  CHECK(label_stats(Corpus{}).total == 0);

  GenSpec spec;
  spec.seed = 13;
  spec.n_docs = 6;
  spec.targets = {{parse_label("Drug"), 30}, {parse_label("Duration"), 4}};
  const GeneratedCorpus generated = generate(spec);
  const LabelStats stats = label_stats(generated.corpus);
  CHECK(stats.total == 34);
  CHECK(stats.span_counts.at(parse_label("Drug")) == 30);
  CHECK(stats.span_counts.at(parse_label("Duration")) == 4);
  CHECK(stats.span_counts == generated.ledger.label_counts);
  CHECK(stats.doc_frequency.at(parse_label("Drug")) <= 6);
}

TEST_CASE("oversample raises the label count to the requested factor") {
  GenSpec spec;
  spec.seed = 21;
  spec.n_docs = 8;
  spec.targets = {{parse_label("Duration"), 10}, {parse_label("Drug"), 40}};
  const GeneratedCorpus generated = generate(spec);

  const Corpus boosted = oversample(generated.corpus, parse_label("Duration"), 3.0, 77);
  const LabelStats stats = label_stats(boosted);
  CHECK(stats.span_counts.at(parse_label("Duration")) >= 30);

  // unrelated labels never lose spans, documents are never removed
  CHECK(stats.span_counts.at(parse_label("Drug")) >= 40);
  CHECK(boosted.documents.size() >= generated.corpus.documents.size());
  boosted.check();

  // factor 1 is the identity
  const Corpus same = oversample(generated.corpus, parse_label("Duration"), 1.0, 77);
  CHECK(same.documents.size() == generated.corpus.documents.size());

  // determinism
  const Corpus again = oversample(generated.corpus, parse_label("Duration"), 3.0, 77);
  CHECK(again.documents.size() == boosted.documents.size());
  for (std::size_t i = 0; i < again.documents.size(); ++i) {
    CHECK(again.documents[i].doc_id() == boosted.documents[i].doc_id());
  }
}

TEST_CASE("oversampling an absent label fails") {
  GenSpec spec;
  spec.seed = 2;
  spec.n_docs = 2;
  spec.targets = {{parse_label("Drug"), 4}};
  const GeneratedCorpus generated = generate(spec);
  try {
    oversample(generated.corpus, parse_label("ADE"), 2.0, 1);
    FAIL("expected LabelAbsent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LabelAbsent);
  }
}
