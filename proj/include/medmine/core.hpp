#ifndef MEDMINE_CORE_HPP
#define MEDMINE_CORE_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "medmine/errors.hpp"

namespace medmine {

/// Entity label of the medication-extraction task. The nine entity labels plus
/// O form a closed set; anything else is carried verbatim as an unknown label
/// so that foreign annotation files survive a round trip.
class Label {
public:
  enum class Tag {
    Drug,
    Strength,
    Form,
    Frequency,
    Route,
    Dosage,
    Duration,
    Reason,
    ADE,
    O,
    Unknown,
  };

  Label() : tag_(Tag::Unknown) {}
  explicit Label(Tag tag);

  /// Case-insensitive parse; names outside the closed set come back as
  /// Unknown with the original spelling preserved.
  static Label parse(std::string_view text);

  /// The nine entity labels in canonical report order (no O).
  static const std::vector<Label>& entity_labels();

  Tag tag() const { return tag_; }
  const std::string& name() const { return name_; }
  bool known() const { return tag_ != Tag::Unknown; }
  bool is_outside() const { return tag_ == Tag::O; }

  friend bool operator==(const Label& a, const Label& b) {
    return a.tag_ == b.tag_ && (a.tag_ != Tag::Unknown || a.name_ == b.name_);
  }
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    if (a.tag_ != b.tag_) return static_cast<int>(a.tag_) <=> static_cast<int>(b.tag_);
    return a.name_ <=> b.name_;
  }

private:
  Tag tag_;
  std::string name_;
};

/// parse_label("drug") == Label(Tag::Drug); unknown names are flagged by
/// Label::known() and surface as warnings in reports.
Label parse_label(std::string_view text);

/// Half-open character range [start, end). Offsets count Unicode scalar
/// values, not bytes, so stand-off files survive re-encoding.
struct Fragment {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  friend bool operator==(const Fragment&, const Fragment&) = default;
  friend auto operator<=>(const Fragment&, const Fragment&) = default;
};

/// One annotated entity. Fragments are sorted and pairwise non-overlapping
/// after validation; more than one fragment means a discontinuous annotation.
struct EntitySpan {
  std::string id;
  Label label;
  std::vector<Fragment> fragments;
  std::string surface;

  /// (min start, max end) over all fragments.
  Fragment extent() const;
  /// Sum of fragment lengths in characters.
  std::size_t total_length() const;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

/// Immutable document text with a precomputed code-point index so that
/// fragment offsets can be resolved on UTF-8 content in O(1).
class Document {
public:
  Document() = default;
  Document(std::string doc_id, std::string text);

  const std::string& doc_id() const { return doc_id_; }
  const std::string& text() const { return text_; }

  /// Length in Unicode scalar values.
  std::size_t length() const { return cp_offsets_.empty() ? 0 : cp_offsets_.size() - 1; }

  /// Substring for the code-point range [start, end); bounds must be valid.
  std::string slice(std::size_t start, std::size_t end) const;

  /// Byte offset of code point index (index may equal length()).
  std::size_t byte_offset(std::size_t cp_index) const { return cp_offsets_[cp_index]; }

private:
  std::string doc_id_;
  std::string text_;
  std::vector<std::size_t> cp_offsets_;  // one per code point, plus end sentinel
};

/// All entity spans over one document from one source ("gold" or a model name).
struct AnnotationSet {
  std::string doc_id;
  std::string source;
  std::vector<EntitySpan> spans;
};

inline constexpr const char* kGoldSource = "gold";

struct Corpus {
  std::vector<Document> documents;
  std::map<std::string, AnnotationSet> gold;
  std::map<std::string, std::map<std::string, AnnotationSet>> predictions;  // source -> doc_id -> set

  const Document* find_document(std::string_view doc_id) const;
  /// Throws DocMismatch if an annotation set references a missing document.
  void check() const;
};

enum class Validation { Lenient, Strict };

/// Checks fragments against the document and returns the span with its
/// surface recomputed from the text (fragments joined by a single space).
/// A surface that disagrees with the original is an error under Strict and a
/// warning under Lenient; real stand-off corpora contain whitespace
/// discrepancies, so Lenient is the default.
EntitySpan validate_span(const Document& doc, const EntitySpan& span,
                         Validation mode = Validation::Lenient,
                         std::vector<std::string>* warnings = nullptr);

/// validate_span over every span in the set; also enforces unique span ids.
AnnotationSet validate_annotation_set(const Document& doc, const AnnotationSet& set,
                                      Validation mode = Validation::Lenient,
                                      std::vector<std::string>* warnings = nullptr);

}  // namespace medmine

#endif
