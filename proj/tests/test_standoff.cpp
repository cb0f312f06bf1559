#include <doctest.h>

#include "medmine/standoff.hpp"

#include "generators.hpp"

using namespace medmine;

TEST_CASE("parse_standoff reads a well-formed entity line") {
  const Document doc("d", "take aspirin daily");
  const StandoffParse parsed = parse_standoff(doc, "T1\tDrug 5 12\taspirin\n");
  REQUIRE(parsed.set.spans.size() == 1);
  const EntitySpan& span = parsed.set.spans[0];
  CHECK(span.id == "T1");
  CHECK(span.label.name() == "Drug");
  CHECK(span.fragments == std::vector<Fragment>{{5, 12}});
  CHECK(span.surface == "aspirin");
  CHECK(parsed.skipped_lines == 0);
}

TEST_CASE("semicolon ranges make discontinuous spans") {
  const Document doc("d", "rash and nose bleeding");
  const StandoffParse parsed = parse_standoff(doc, "T2\tADE 0 4;9 13\trash nose\n");
  REQUIRE(parsed.set.spans.size() == 1);
  CHECK(parsed.set.spans[0].fragments == std::vector<Fragment>{{0, 4}, {9, 13}});
  CHECK(parsed.set.spans[0].surface == "rash nose");
}

TEST_CASE("space-separated entity lines are malformed") {
  const Document doc("d", "take aspirin daily");
  try {
    parse_standoff(doc, "T3 Drug 5 12 aspirin\n");
    FAIL("expected MalformedLine");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedLine);
    CHECK(e.line() == 1);
  }
}

TEST_CASE("relation and attribute lines are skipped and counted") {
  const Document doc("d", "take aspirin daily");
  const std::string ann =
      "T1\tDrug 5 12\taspirin\n"
      "R1\tReason-Drug Arg1:T2 Arg2:T1\n"
      "A1\tNegated T1\n"
      "#1\tAnnotatorNotes T1\tcheck this\n";
  const StandoffParse parsed = parse_standoff(doc, ann);
  CHECK(parsed.set.spans.size() == 1);
  CHECK(parsed.skipped_lines == 3);
}

TEST_CASE("write_standoff round-trips spans exactly") {
  const Document doc("d", "stop warfarin then restart warfarin later");
  AnnotationSet set;
  set.doc_id = "d";
  set.source = kGoldSource;
  {
    EntitySpan a;
    a.id = "T1";
    a.label = parse_label("Drug");
    a.fragments = {{5, 13}};
    set.spans.push_back(validate_span(doc, a));
    EntitySpan b;
    b.id = "T2";
    b.label = parse_label("ADE");
    b.fragments = {{0, 4}, {19, 26}};
    set.spans.push_back(validate_span(doc, b));
  }

  const std::string written = write_standoff(set);
  CHECK(written.find("0 4;19 26") != std::string::npos);
  const StandoffParse reparsed = parse_standoff(doc, written);
  CHECK(reparsed.set.spans == set.spans);

  CHECK(write_standoff(AnnotationSet{"d", kGoldSource, {}}).empty());
}

TEST_CASE("stand-off round-trip property on generated sets") {
  Rng rng(23);
  for (int round = 0; round < 100; ++round) {
    const Document doc = gen::random_document(rng, "d", 50);
    AnnotationSet set;
    set.doc_id = "d";
    set.source = kGoldSource;
    set.spans = gen::random_spans(rng, doc, 1 + rng.below(6));

    const StandoffParse reparsed = parse_standoff(doc, write_standoff(set));
    REQUIRE(reparsed.set.spans.size() == set.spans.size());
    CHECK(reparsed.set.spans == set.spans);
  }
}

TEST_CASE("a surface with a newline still round-trips") {
  const Document doc("d", "one\ntwo");
  EntitySpan span;
  span.id = "T1";
  span.label = parse_label("Reason");
  span.fragments = {{0, 7}};
  AnnotationSet set{"d", kGoldSource, {validate_span(doc, span)}};
  CHECK(set.spans[0].surface == "one\ntwo");

  const StandoffParse reparsed = parse_standoff(doc, write_standoff(set));
  CHECK(reparsed.set.spans == set.spans);  // surface comes back from the text
}

TEST_CASE("parser survives arbitrary bytes with located errors") {
  Rng rng(31);
  const Document doc = gen::random_document(rng, "d", 30);
  for (int round = 0; round < 200; ++round) {
    std::string junk;
    const std::size_t len = rng.below(40);
    for (std::size_t i = 0; i < len; ++i) {
      junk += static_cast<char>(rng.below(256));
    }
    try {
      parse_standoff(doc, junk);
    } catch (const Error&) {
      // any failure must be a located Error, never a crash
    }
  }
}

TEST_CASE("token-tag parser also survives arbitrary bytes") {
  Rng rng(37);
  for (int round = 0; round < 200; ++round) {
    std::string junk = "# doc_id = d\n";
    const std::size_t len = rng.below(40);
    for (std::size_t i = 0; i < len; ++i) {
      junk += static_cast<char>(rng.below(256));
    }
    try {
      parse_token_tags(junk);
    } catch (const Error&) {
    }
  }
}

TEST_CASE("parse_token_tags groups records and keeps offsets") {
  const std::string content =
      "# doc_id = letter-1\n"
      "Aspirin\t0\t7\tB-Drug\n"
      "sulfate\t8\t15\tI-Drug\n"
      "daily\t16\t21\tO\n";
  const TokenTagParse parsed = parse_token_tags(content);
  REQUIRE(parsed.documents.size() == 1);
  CHECK(parsed.documents[0].doc_id == "letter-1");
  REQUIRE(parsed.documents[0].records.size() == 3);
  CHECK(parsed.documents[0].records[1].tag == "I-Drug");
  CHECK(parsed.repaired == 0);
}

TEST_CASE("orphan I- tags are repaired to B- with a warning") {
  const std::string content =
      "# doc_id = letter-1\n"
      "orally\t0\t6\tI-Route\n";
  const TokenTagParse parsed = parse_token_tags(content);
  CHECK(parsed.documents[0].records[0].tag == "B-Route");
  CHECK(parsed.repaired == 1);
  CHECK(parsed.warnings.size() == 1);

  // I-X after B-Y is also an orphan.
  const TokenTagParse mixed = parse_token_tags(
      "# doc_id = d\nonce\t0\t4\tB-Frequency\ndaily\t5\t10\tI-Route\n");
  CHECK(mixed.documents[0].records[1].tag == "B-Route");
  CHECK(mixed.repaired == 1);
}

TEST_CASE("token lines before a header are an error") {
  try {
    parse_token_tags("Aspirin\t0\t7\tB-Drug\n");
    FAIL("expected MissingDocHeader");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingDocHeader);
  }
}

TEST_CASE("malformed tag or column count is a located error") {
  try {
    parse_token_tags("# doc_id = d\nAspirin\t0\t7\n");
    FAIL("expected MalformedLine");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedLine);
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_token_tags("# doc_id = d\nAspirin\t0\t7\tX-Drug\n"), Error);
}

TEST_CASE("token-tag round-trip identity") {
  std::vector<TokenTagDocument> documents;
  documents.push_back({"a", {{"Aspirin", 0, 7, "B-Drug"}, {"daily", 8, 13, "O"}}});
  documents.push_back({"b", {{"rash", 0, 4, "B-ADE"}}});
  const TokenTagParse reparsed = parse_token_tags(write_token_tags(documents));
  CHECK(reparsed.documents == documents);
  CHECK(reparsed.repaired == 0);
}
