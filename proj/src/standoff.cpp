#include "medmine/standoff.hpp"

#include <charconv>
#include <sstream>

namespace medmine {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

bool parse_size(std::string_view text, std::size_t& out) {
  if (text.empty()) return false;
  unsigned long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return false;
  out = static_cast<std::size_t>(value);
  return true;
}

std::string sanitize_field(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\n' || c == '\t' || c == '\r') c = ' ';
  }
  return out;
}

// Lines are split on '\n'; a trailing '\r' from CRLF input is dropped.
std::vector<std::string> lines_of(const std::string& content) {
  std::vector<std::string> lines = split(content, '\n');
  for (std::string& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

StandoffParse parse_standoff(const Document& doc, const std::string& ann_content,
                             Validation mode) {
  StandoffParse result;
  result.set.doc_id = doc.doc_id();
  result.set.source = kGoldSource;

  const std::vector<std::string> lines = lines_of(ann_content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const long line_no = static_cast<long>(i + 1);
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (line[0] != 'T') {
      ++result.skipped_lines;
      continue;
    }

    const std::vector<std::string> fields = split(line, '\t');
    if (fields.size() < 3) {
      throw Error(ErrorCode::MalformedLine, "expected id<TAB>LABEL offsets<TAB>surface", line_no);
    }

    EntitySpan span;
    span.id = fields[0];
    // Everything after the second tab is the surface, verbatim.
    span.surface = line.substr(fields[0].size() + fields[1].size() + 2);

    const std::string& type_field = fields[1];
    const std::size_t label_end = type_field.find(' ');
    if (label_end == std::string::npos) {
      throw Error(ErrorCode::MalformedLine, "missing offsets after label", line_no);
    }
    span.label = parse_label(type_field.substr(0, label_end));
    if (!span.label.known()) {
      result.warnings.push_back("unknown label \"" + span.label.name() + "\" on line " +
                                std::to_string(line_no));
    }

    for (const std::string& range : split(type_field.substr(label_end + 1), ';')) {
      const std::vector<std::string> bounds = split(range, ' ');
      Fragment fragment;
      if (bounds.size() != 2 || !parse_size(bounds[0], fragment.start) ||
          !parse_size(bounds[1], fragment.end)) {
        throw Error(ErrorCode::MalformedLine, "bad offset range \"" + range + "\"", line_no);
      }
      span.fragments.push_back(fragment);
    }

    result.set.spans.push_back(validate_span(doc, span, mode, &result.warnings));
  }

  std::map<std::string, int> seen;
  for (const EntitySpan& span : result.set.spans) {
    if (++seen[span.id] > 1) {
      throw Error(ErrorCode::MalformedLine, "duplicate span id " + span.id);
    }
  }
  return result;
}

std::string write_standoff(const AnnotationSet& set) {
  std::ostringstream out;
  for (const EntitySpan& span : set.spans) {
    out << span.id << '\t' << span.label.name();
    for (std::size_t i = 0; i < span.fragments.size(); ++i) {
      out << (i == 0 ? " " : ";") << span.fragments[i].start << ' ' << span.fragments[i].end;
    }
    out << '\t' << sanitize_field(span.surface) << '\n';
  }
  return out.str();
}

namespace {

constexpr std::string_view kDocHeaderPrefix = "# doc_id = ";

bool tag_is_valid(const std::string& tag) {
  if (tag == "O") return true;
  return tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-';
}

}  // namespace

TokenTagParse parse_token_tags(const std::string& content) {
  TokenTagParse result;
  TokenTagDocument* current = nullptr;
  std::string previous_tag = "O";

  const std::vector<std::string> lines = lines_of(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const long line_no = static_cast<long>(i + 1);
    const std::string& line = lines[i];
    if (line.empty()) {
      current = nullptr;
      previous_tag = "O";
      continue;
    }
    if (line.rfind(kDocHeaderPrefix, 0) == 0) {
      result.documents.push_back({line.substr(kDocHeaderPrefix.size()), {}});
      current = &result.documents.back();
      previous_tag = "O";
      continue;
    }
    if (line[0] == '#') {
      // Other comment lines are tolerated.
      continue;
    }
    if (!current) {
      throw Error(ErrorCode::MissingDocHeader,
                  "token line before any \"# doc_id = ...\" header", line_no);
    }

    const std::vector<std::string> fields = split(line, '\t');
    TokenTagRecord record;
    if (fields.size() != 4 || !parse_size(fields[1], record.start) ||
        !parse_size(fields[2], record.end) || fields[0].empty()) {
      throw Error(ErrorCode::MalformedLine, "expected token<TAB>start<TAB>end<TAB>tag", line_no);
    }
    record.token = fields[0];
    record.tag = fields[3];
    if (!tag_is_valid(record.tag)) {
      throw Error(ErrorCode::MalformedLine, "bad tag \"" + record.tag + "\"", line_no);
    }

    // IOB2 repair: an I-X not preceded by B-X/I-X becomes B-X.
    if (record.tag[0] == 'I') {
      const std::string suffix = record.tag.substr(2);
      const bool continues = previous_tag.size() > 2 && previous_tag.substr(2) == suffix;
      if (!continues) {
        result.warnings.push_back("orphan " + record.tag + " promoted to B-" + suffix +
                                  " on line " + std::to_string(line_no));
        record.tag = "B-" + suffix;
        ++result.repaired;
      }
    }
    previous_tag = record.tag;
    current->records.push_back(std::move(record));
  }
  return result;
}

std::string write_token_tags(const std::vector<TokenTagDocument>& documents) {
  std::ostringstream out;
  bool first = true;
  for (const TokenTagDocument& doc : documents) {
    if (!first) out << '\n';
    first = false;
    out << kDocHeaderPrefix << doc.doc_id << '\n';
    for (const TokenTagRecord& record : doc.records) {
      out << record.token << '\t' << record.start << '\t' << record.end << '\t' << record.tag
          << '\n';
    }
  }
  return out.str();
}

}  // namespace medmine
