#include "medmine/corpus_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "medmine/corpus_tools.hpp"

namespace medmine {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string content_digest(const std::string& content) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : content) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

CorpusLoad load_corpus_dir(const fs::path& dir, Validation mode) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  }

  std::vector<fs::path> text_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      text_files.push_back(entry.path());
    }
  }
  std::sort(text_files.begin(), text_files.end());

  CorpusLoad load;
  for (const fs::path& text_path : text_files) {
    const std::string doc_id = text_path.stem().string();
    Document doc(doc_id, read_file(text_path));

    fs::path ann_path = text_path;
    ann_path.replace_extension(".ann");
    if (fs::exists(ann_path)) {
      StandoffParse parsed = parse_standoff(doc, read_file(ann_path), mode);
      load.skipped_lines += parsed.skipped_lines;
      for (std::string& w : parsed.warnings) {
        load.warnings.push_back(doc_id + ": " + w);
      }
      load.corpus.gold.emplace(doc_id, std::move(parsed.set));
    }
    load.corpus.documents.push_back(std::move(doc));
  }
  if (load.corpus.documents.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no .txt documents in " + dir.string());
  }
  return load;
}

void load_predictions(Corpus& corpus, const fs::path& path, const std::string& source,
                      Validation mode, std::vector<std::string>* warnings) {
  auto warn = [&](const std::string& message) {
    if (warnings) warnings->push_back(message);
  };

  if (fs::is_directory(path)) {
    for (const Document& doc : corpus.documents) {
      const fs::path ann_path = path / (doc.doc_id() + ".ann");
      AnnotationSet set;
      set.doc_id = doc.doc_id();
      set.source = source;
      if (fs::exists(ann_path)) {
        StandoffParse parsed = parse_standoff(doc, read_file(ann_path), mode);
        set.spans = std::move(parsed.set.spans);
        for (std::string& w : parsed.warnings) warn(doc.doc_id() + ": " + w);
      } else {
        warn("no predictions for " + doc.doc_id() + " from " + source);
      }
      set.source = source;
      corpus.predictions[source].emplace(doc.doc_id(), std::move(set));
    }
    return;
  }

  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::IoError, path.string() + " is neither a directory nor a file");
  }

  TokenTagParse parsed = parse_token_tags(read_file(path));
  for (std::string& w : parsed.warnings) warn(w);
  for (TokenTagDocument& tagged : parsed.documents) {
    const Document* doc = corpus.find_document(tagged.doc_id);
    if (!doc) {
      throw Error(ErrorCode::DocMismatch,
                  "token tags reference unknown document " + tagged.doc_id);
    }
    std::vector<Token> tokens;
    std::vector<std::string> tags;
    tokens.reserve(tagged.records.size());
    for (TokenTagRecord& record : tagged.records) {
      tokens.push_back({record.token, record.start, record.end});
      tags.push_back(record.tag);
    }
    AnnotationSet set;
    set.doc_id = tagged.doc_id;
    set.source = source;
    set.spans = bio_to_spans(tokens, tags);
    set = validate_annotation_set(*doc, set, mode, warnings);
    set.source = source;
    if (!corpus.predictions[source].emplace(tagged.doc_id, std::move(set)).second) {
      throw Error(ErrorCode::DocMismatch,
                  "token-tag file repeats document " + tagged.doc_id);
    }
  }
  // Documents without a tagged block count as empty predictions.
  for (const Document& doc : corpus.documents) {
    if (!corpus.predictions[source].contains(doc.doc_id())) {
      AnnotationSet set;
      set.doc_id = doc.doc_id();
      set.source = source;
      corpus.predictions[source].emplace(doc.doc_id(), std::move(set));
    }
  }
}

void write_corpus_dir(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  for (const Document& doc : corpus.documents) {
    write_file(dir / (doc.doc_id() + ".txt"), doc.text());
    if (auto it = corpus.gold.find(doc.doc_id()); it != corpus.gold.end()) {
      write_file(dir / (doc.doc_id() + ".ann"), write_standoff(it->second));
    }
  }
}

TokenTagDocument to_token_tags(const Document& doc, const AnnotationSet& set,
                               std::vector<std::string>* warnings) {
  const std::vector<Token> tokens = tokenize(doc);
  const std::vector<std::string> tags = spans_to_bio(tokens, set.spans, warnings);
  TokenTagDocument out;
  out.doc_id = doc.doc_id();
  out.records.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.records.push_back({tokens[i].text, tokens[i].start, tokens[i].end, tags[i]});
  }
  return out;
}

}  // namespace medmine
