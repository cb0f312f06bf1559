#include "medmine/core.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace medmine {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OffsetOutOfBounds: return "OffsetOutOfBounds";
    case ErrorCode::FragmentOverlap: return "FragmentOverlap";
    case ErrorCode::SurfaceMismatch: return "SurfaceMismatch";
    case ErrorCode::InvalidSpanLabel: return "InvalidSpanLabel";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::MissingDocHeader: return "MissingDocHeader";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::BadChunkParams: return "BadChunkParams";
    case ErrorCode::LabelAbsent: return "LabelAbsent";
    case ErrorCode::DocMismatch: return "DocMismatch";
    case ErrorCode::MissingDevReport: return "MissingDevReport";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::EmptyReport: return "EmptyReport";
    case ErrorCode::AllLabelsExcluded: return "AllLabelsExcluded";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TemplateMissingLabel: return "TemplateMissingLabel";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "UnknownError";
}

std::string Error::format_message(ErrorCode code, const std::string& message, long line) {
  std::ostringstream out;
  out << to_string(code);
  if (line >= 0) out << " (line " << line << ")";
  out << ": " << message;
  return out.str();
}

namespace {

constexpr std::array<const char*, 10> kCanonicalNames = {
    "Drug", "Strength", "Form", "Frequency", "Route",
    "Dosage", "Duration", "Reason", "ADE", "O",
};

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Label::Label(Tag tag) : tag_(tag) {
  if (tag != Tag::Unknown) name_ = kCanonicalNames[static_cast<std::size_t>(tag)];
}

Label Label::parse(std::string_view text) {
  const std::string lowered = lowercase(text);
  for (std::size_t i = 0; i < kCanonicalNames.size(); ++i) {
    if (lowered == lowercase(kCanonicalNames[i])) {
      return Label(static_cast<Tag>(i));
    }
  }
  Label unknown;
  unknown.name_ = std::string(text);
  return unknown;
}

const std::vector<Label>& Label::entity_labels() {
  static const std::vector<Label> labels = [] {
    std::vector<Label> out;
    for (std::size_t i = 0; i + 1 < kCanonicalNames.size(); ++i) {
      out.emplace_back(static_cast<Tag>(i));
    }
    return out;
  }();
  return labels;
}

Label parse_label(std::string_view text) { return Label::parse(text); }

Fragment EntitySpan::extent() const {
  Fragment out;
  if (fragments.empty()) return out;
  out.start = fragments.front().start;
  out.end = fragments.front().end;
  for (const Fragment& f : fragments) {
    out.start = std::min(out.start, f.start);
    out.end = std::max(out.end, f.end);
  }
  return out;
}

std::size_t EntitySpan::total_length() const {
  std::size_t total = 0;
  for (const Fragment& f : fragments) total += f.length();
  return total;
}

Document::Document(std::string doc_id, std::string text)
    : doc_id_(std::move(doc_id)), text_(std::move(text)) {
  cp_offsets_.reserve(text_.size() + 1);
  for (std::size_t i = 0; i < text_.size(); ++i) {
    // A byte starts a code point unless it is a UTF-8 continuation byte.
    if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) {
      cp_offsets_.push_back(i);
    }
  }
  cp_offsets_.push_back(text_.size());
}

std::string Document::slice(std::size_t start, std::size_t end) const {
  const std::size_t lo = cp_offsets_[start];
  const std::size_t hi = cp_offsets_[end];
  return text_.substr(lo, hi - lo);
}

const Document* Corpus::find_document(std::string_view doc_id) const {
  for (const Document& doc : documents) {
    if (doc.doc_id() == doc_id) return &doc;
  }
  return nullptr;
}

void Corpus::check() const {
  for (const auto& [doc_id, set] : gold) {
    if (!find_document(doc_id)) {
      throw Error(ErrorCode::DocMismatch, "gold annotations for unknown document " + doc_id);
    }
    if (set.doc_id != doc_id) {
      throw Error(ErrorCode::DocMismatch, "gold set doc_id disagrees for " + doc_id);
    }
  }
  for (const auto& [source, sets] : predictions) {
    for (const auto& [doc_id, set] : sets) {
      if (!find_document(doc_id)) {
        throw Error(ErrorCode::DocMismatch,
                    "predictions from " + source + " for unknown document " + doc_id);
      }
    }
  }
}

EntitySpan validate_span(const Document& doc, const EntitySpan& span, Validation mode,
                         std::vector<std::string>* warnings) {
  if (span.label.is_outside()) {
    throw Error(ErrorCode::InvalidSpanLabel,
                "span " + span.id + " uses O, which is not an entity label");
  }
  if (span.fragments.empty()) {
    throw Error(ErrorCode::OffsetOutOfBounds, "span " + span.id + " has no fragments");
  }

  EntitySpan checked = span;
  std::sort(checked.fragments.begin(), checked.fragments.end());
  const std::size_t doc_len = doc.length();
  for (std::size_t i = 0; i < checked.fragments.size(); ++i) {
    const Fragment& f = checked.fragments[i];
    if (f.start >= f.end || f.end > doc_len) {
      std::ostringstream msg;
      msg << "span " << checked.id << " fragment (" << f.start << "," << f.end
          << ") outside document of length " << doc_len;
      throw Error(ErrorCode::OffsetOutOfBounds, msg.str());
    }
    if (i > 0 && checked.fragments[i - 1].end > f.start) {
      std::ostringstream msg;
      msg << "span " << checked.id << " fragments (" << checked.fragments[i - 1].start << ","
          << checked.fragments[i - 1].end << ") and (" << f.start << "," << f.end << ") overlap";
      throw Error(ErrorCode::FragmentOverlap, msg.str());
    }
  }

  std::string recomputed;
  for (const Fragment& f : checked.fragments) {
    if (!recomputed.empty()) recomputed += ' ';
    recomputed += doc.slice(f.start, f.end);
  }
  if (!span.surface.empty() && span.surface != recomputed) {
    const std::string msg = "span " + checked.id + " surface \"" + span.surface +
                            "\" does not match text \"" + recomputed + "\"";
    if (mode == Validation::Strict) throw Error(ErrorCode::SurfaceMismatch, msg);
    if (warnings) warnings->push_back(msg);
  }
  checked.surface = std::move(recomputed);
  return checked;
}

AnnotationSet validate_annotation_set(const Document& doc, const AnnotationSet& set,
                                      Validation mode, std::vector<std::string>* warnings) {
  AnnotationSet checked;
  checked.doc_id = set.doc_id;
  checked.source = set.source;
  checked.spans.reserve(set.spans.size());
  std::map<std::string, int> seen;
  for (const EntitySpan& span : set.spans) {
    if (++seen[span.id] > 1) {
      throw Error(ErrorCode::MalformedLine,
                  "duplicate span id " + span.id + " in " + set.doc_id);
    }
    checked.spans.push_back(validate_span(doc, span, mode, warnings));
  }
  return checked;
}

}  // namespace medmine
