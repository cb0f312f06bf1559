#ifndef MEDMINE_CORPUS_IO_HPP
#define MEDMINE_CORPUS_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "medmine/core.hpp"
#include "medmine/standoff.hpp"

namespace medmine {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit content digest, hex-encoded; used for run metadata.
std::string content_digest(const std::string& content);

struct CorpusLoad {
  Corpus corpus;
  int skipped_lines = 0;
  std::vector<std::string> warnings;
};

/// Loads every <id>.txt in the directory as a document, with gold spans from
/// the matching <id>.ann when present. Documents sort by doc_id.
CorpusLoad load_corpus_dir(const std::filesystem::path& dir,
                           Validation mode = Validation::Lenient);

/// Adds one prediction source to a loaded corpus: either a directory of .ann
/// files or a single token-tag file (spans recovered from the BIO tags).
void load_predictions(Corpus& corpus, const std::filesystem::path& path,
                      const std::string& source, Validation mode = Validation::Lenient,
                      std::vector<std::string>* warnings = nullptr);

/// Writes <id>.txt (+ <id>.ann when gold exists) per document.
void write_corpus_dir(const Corpus& corpus, const std::filesystem::path& dir);

/// Converts an annotation set into token-tag records over the document.
TokenTagDocument to_token_tags(const Document& doc, const AnnotationSet& set,
                               std::vector<std::string>* warnings = nullptr);

}  // namespace medmine

#endif
