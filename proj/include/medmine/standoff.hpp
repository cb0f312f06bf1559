#ifndef MEDMINE_STANDOFF_HPP
#define MEDMINE_STANDOFF_HPP

#include <string>
#include <vector>

#include "medmine/core.hpp"

namespace medmine {

/// One token of a token-per-line tagged file. Tags use the IOB2 scheme
/// ("B-Drug", "I-Drug", "O"); offsets are code points into the document text.
struct TokenTagRecord {
  std::string token;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string tag;

  friend bool operator==(const TokenTagRecord&, const TokenTagRecord&) = default;
};

struct TokenTagDocument {
  std::string doc_id;
  std::vector<TokenTagRecord> records;

  friend bool operator==(const TokenTagDocument&, const TokenTagDocument&) = default;
};

struct StandoffParse {
  AnnotationSet set;
  int skipped_lines = 0;  // relation/attribute/comment lines, counted not rejected
  std::vector<std::string> warnings;
};

/// Parses stand-off entity annotations over an already-loaded document.
/// Entity lines are tab-separated:  T<id> <TAB> LABEL start end[;start end]* <TAB> surface
/// Lines whose id does not start with "T" are skipped and counted. Every span
/// is validated against the document text.
StandoffParse parse_standoff(const Document& doc, const std::string& ann_content,
                             Validation mode = Validation::Lenient);

/// Inverse of parse_standoff for validated sets. Newlines and tabs inside a
/// surface are written as spaces to keep the format line-based; parsing
/// recomputes surfaces from the text, so round trips are exact.
std::string write_standoff(const AnnotationSet& set);

struct TokenTagParse {
  std::vector<TokenTagDocument> documents;
  int repaired = 0;  // orphan I-X tags promoted to B-X
  std::vector<std::string> warnings;
};

/// Parses a token-per-line tagged file. Documents are separated by blank
/// lines and each starts with a "# doc_id = X" header; every record line is
/// "token<TAB>start<TAB>end<TAB>tag". IOB2 violations are repaired by
/// promoting orphan I-X to B-X, with one warning per repair.
TokenTagParse parse_token_tags(const std::string& content);

std::string write_token_tags(const std::vector<TokenTagDocument>& documents);

}  // namespace medmine

#endif
