#include <doctest.h>

#include "medmine/core.hpp"
#include "medmine/rng.hpp"

#include "generators.hpp"

using namespace medmine;

namespace {

EntitySpan make_span(const std::string& id, const std::string& label,
                     std::vector<Fragment> fragments, std::string surface = "") {
  EntitySpan span;
  span.id = id;
  span.label = parse_label(label);
  span.fragments = std::move(fragments);
  span.surface = std::move(surface);
  return span;
}

}  // namespace

TEST_CASE("parse_label normalizes case and canonical names") {
  CHECK(parse_label("drug").name() == "Drug");
  CHECK(parse_label("DRUG").tag() == Label::Tag::Drug);
  CHECK(parse_label("ADE").name() == "ADE");
  CHECK(parse_label("ade").tag() == Label::Tag::ADE);
  CHECK(parse_label("o").is_outside());

  const Label unknown = parse_label("Temporal");
  CHECK_FALSE(unknown.known());
  CHECK(unknown.name() == "Temporal");  // carried verbatim
}

TEST_CASE("validate_span recomputes the surface from the text") {
  const Document doc("d", "take aspirin daily");
  const EntitySpan checked = validate_span(doc, make_span("T1", "Drug", {{5, 12}}));
  CHECK(checked.surface == "aspirin");
  CHECK(checked.extent() == Fragment{5, 12});
}

TEST_CASE("validate_span rejects empty and out-of-range fragments") {
  const Document doc("d", "take aspirin daily");
  CHECK_THROWS_AS(validate_span(doc, make_span("T1", "Drug", {{10, 10}})), Error);
  CHECK_THROWS_AS(validate_span(doc, make_span("T1", "Drug", {{5, 99}})), Error);
  try {
    validate_span(doc, make_span("T1", "Drug", {{10, 10}}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OffsetOutOfBounds);
  }
}

TEST_CASE("validate_span rejects overlapping fragments") {
  const Document doc("d", "take aspirin daily");
  try {
    validate_span(doc, make_span("T1", "Drug", {{0, 4}, {3, 8}}));
    FAIL("expected FragmentOverlap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FragmentOverlap);
  }
}

TEST_CASE("validate_span rejects O as a span label") {
  const Document doc("d", "take aspirin daily");
  try {
    validate_span(doc, make_span("T1", "O", {{0, 4}}));
    FAIL("expected InvalidSpanLabel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpanLabel);
  }
}

TEST_CASE("surface mismatch warns in lenient mode, throws in strict") {
  const Document doc("d", "take aspirin daily");
  const EntitySpan span = make_span("T1", "Drug", {{5, 12}}, "asp irin");

  std::vector<std::string> warnings;
  const EntitySpan lenient = validate_span(doc, span, Validation::Lenient, &warnings);
  CHECK(lenient.surface == "aspirin");
  CHECK(warnings.size() == 1);

  CHECK_THROWS_AS(validate_span(doc, span, Validation::Strict), Error);
}

TEST_CASE("discontinuous spans join fragments with a single space") {
  const Document doc("d", "stop warfarin then restart warfarin later");
  const EntitySpan checked = validate_span(doc, make_span("T1", "Drug", {{5, 13}, {27, 35}}));
  CHECK(checked.surface == "warfarin warfarin");
  CHECK(checked.extent() == Fragment{5, 35});
  CHECK(checked.total_length() == 16);
}

TEST_CASE("offsets count code points, not bytes") {
  // "é" is two bytes in UTF-8 but one character.
  const Document doc("d", "caf\xc3\xa9 aspirin");
  CHECK(doc.length() == 12);
  const EntitySpan checked = validate_span(doc, make_span("T1", "Drug", {{5, 12}}));
  CHECK(checked.surface == "aspirin");
  CHECK(doc.slice(0, 4) == "caf\xc3\xa9");
}

TEST_CASE("validate_span is idempotent on generated spans") {
  Rng rng(11);
  for (int round = 0; round < 50; ++round) {
    const Document doc = gen::random_document(rng, "d", 60);
    for (const EntitySpan& span : gen::random_spans(rng, doc, 5)) {
      const EntitySpan once = validate_span(doc, span);
      const EntitySpan twice = validate_span(doc, once);
      CHECK(once == twice);

      const Fragment extent = once.extent();
      for (const Fragment& f : once.fragments) {
        CHECK(extent.start <= f.start);
        CHECK(f.end <= extent.end);
      }
    }
  }
}

TEST_CASE("annotation sets reject duplicate span ids") {
  const Document doc("d", "take aspirin daily");
  AnnotationSet set;
  set.doc_id = "d";
  set.source = kGoldSource;
  set.spans = {make_span("T1", "Drug", {{5, 12}}), make_span("T1", "Route", {{0, 4}})};
  CHECK_THROWS_AS(validate_annotation_set(doc, set), Error);
}
