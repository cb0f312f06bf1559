// medmine -- corpus tools and span-level evaluation for medication extraction.
//
// Subcommands wrap the library operations one-to-one so whole pipelines can
// be scripted: synth -> split -> convert -> evaluate -> merge. Every run is
// reproducible from its flags; randomness always sits behind --seed and each
// output directory gets a metadata.json with the config and input digests.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "medmine/corpus_io.hpp"
#include "medmine/corpus_tools.hpp"
#include "medmine/ensemble.hpp"
#include "medmine/matcher.hpp"
#include "medmine/metrics.hpp"
#include "medmine/standoff.hpp"
#include "medmine/synthetic.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace medmine;

namespace {

constexpr const char* kVersion = "0.1.0";

int log_level() {
  const char* env = std::getenv("MEDMINE_LOG");
  if (!env) return 1;
  const std::string value(env);
  if (value == "quiet") return 0;
  if (value == "debug") return 2;
  return 1;
}

void report_warnings(const std::vector<std::string>& warnings) {
  const int level = log_level();
  if (level == 0 || warnings.empty()) return;
  if (level >= 2) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
  } else {
    std::cerr << warnings.size() << " warning(s); set MEDMINE_LOG=debug for details\n";
  }
}

struct RunMeta {
  std::string command;
  Json config = Json::object();
  Json inputs = Json::object();

  void add_input_file(const fs::path& path) {
    inputs[path.string()] = content_digest(read_file(path));
  }
  void add_input_dir(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) add_input_file(file);
  }
  void add_input(const fs::path& path) {
    if (fs::is_directory(path)) {
      add_input_dir(path);
    } else {
      add_input_file(path);
    }
  }

  void write(const fs::path& out_dir) const {
    Json meta;
    meta["tool"] = "medmine";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["config"] = config;
    meta["inputs"] = inputs;
    write_file(out_dir / "metadata.json", meta.dump(2) + "\n");
  }
};

std::set<Label> parse_label_set(const std::string& csv) {
  std::set<Label> labels;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) labels.insert(parse_label(item));
  }
  return labels;
}

std::map<Label, long> parse_label_counts(const std::string& csv) {
  std::map<Label, long> counts;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::BadConfig, "expected LABEL=COUNT, got \"" + item + "\"");
    }
    counts[parse_label(item.substr(0, eq))] = std::stol(item.substr(eq + 1));
  }
  return counts;
}

std::pair<std::string, std::string> parse_named_path(const std::string& arg) {
  const std::size_t eq = arg.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::BadConfig, "expected NAME=PATH, got \"" + arg + "\"");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

void write_report_files(const EvaluationReport& report, const fs::path& out_dir,
                        const std::string& format, NumberStyle style) {
  if (format.empty() || format == "tsv") {
    write_file(out_dir / "report.tsv", render_report(report, ReportFormat::Tsv, style));
  }
  if (format.empty() || format == "json") {
    write_file(out_dir / "report.json", render_report(report, ReportFormat::Json, style));
  }
  if (format.empty() || format == "markdown") {
    write_file(out_dir / "report.md", render_report(report, ReportFormat::Markdown, style));
  }
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string gold_dir;
  std::string pred_path;
  std::string source = "model";
  std::string out_dir;
  std::string mode = "type";
  std::string exclude;
  std::string format;
  bool percent = false;
  bool no_token_accuracy = false;
  bool strict_validation = false;
  int parallel = 1;
};

int run_evaluate(const EvaluateArgs& args) {
  const Validation validation = args.strict_validation ? Validation::Strict : Validation::Lenient;
  CorpusLoad load = load_corpus_dir(args.gold_dir, validation);
  std::vector<std::string> warnings = std::move(load.warnings);
  load_predictions(load.corpus, args.pred_path, args.source, validation, &warnings);

  const MatchMode mode = parse_match_mode(args.mode);
  const LabelCounts counts = evaluate_corpus(load.corpus, args.source, mode, args.parallel);

  std::optional<double> accuracy;
  if (!args.no_token_accuracy) {
    std::vector<std::string> gold_tags;
    std::vector<std::string> pred_tags;
    for (const Document& doc : load.corpus.documents) {
      const std::vector<Token> tokens = tokenize(doc);
      static const AnnotationSet kEmpty;
      auto gold_it = load.corpus.gold.find(doc.doc_id());
      const AnnotationSet& gold =
          gold_it == load.corpus.gold.end() ? kEmpty : gold_it->second;
      const AnnotationSet& pred = load.corpus.predictions.at(args.source).at(doc.doc_id());
      for (std::string& tag : spans_to_bio(tokens, gold.spans, &warnings)) {
        gold_tags.push_back(std::move(tag));
      }
      for (std::string& tag : spans_to_bio(tokens, pred.spans, &warnings)) {
        pred_tags.push_back(std::move(tag));
      }
    }
    accuracy = token_accuracy(gold_tags, pred_tags);
  }

  EvaluationReport report = build_report(counts, mode, accuracy);
  const std::set<Label> excluded = parse_label_set(args.exclude);
  if (!excluded.empty()) report = filter_and_reaggregate(report, excluded);

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_report_files(report, out_dir, args.format,
                     args.percent ? NumberStyle::Percent2 : NumberStyle::Fraction4);

  RunMeta meta;
  meta.command = "evaluate";
  meta.config = {{"gold", args.gold_dir},     {"pred", args.pred_path},
                 {"source", args.source},     {"mode", args.mode},
                 {"exclude_labels", args.exclude}, {"format", args.format},
                 {"percent", args.percent},   {"token_accuracy", !args.no_token_accuracy},
                 {"strict_validation", args.strict_validation}, {"parallel", args.parallel}};
  meta.add_input(args.gold_dir);
  meta.add_input(args.pred_path);
  meta.write(out_dir);

  report_warnings(warnings);
  std::cout << render_report(report, ReportFormat::Markdown,
                             args.percent ? NumberStyle::Percent2 : NumberStyle::Fraction4);
  return 0;
}

// ------------------------------------------------------------------- split

struct SplitArgs {
  std::string corpus_dir;
  std::string out_dir;
  std::string ratios = "0.7,0.15,0.15";
  std::uint64_t seed = 0;
  bool write_corpora = false;
};

int run_split(const SplitArgs& args) {
  SplitSpec spec;
  spec.seed = args.seed;
  std::stringstream stream(args.ratios);
  std::string item;
  std::vector<double> parsed;
  while (std::getline(stream, item, ',')) parsed.push_back(std::stod(item));
  if (parsed.size() != 3) {
    throw Error(ErrorCode::BadConfig, "--ratios needs three comma-separated fractions");
  }
  spec.ratios = {parsed[0], parsed[1], parsed[2]};

  CorpusLoad load = load_corpus_dir(args.corpus_dir);
  const SplitResult result = split_corpus(load.corpus, spec);

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  auto write_manifest = [&](const char* name, const Corpus& part) {
    std::ostringstream ids;
    for (const Document& doc : part.documents) ids << doc.doc_id() << '\n';
    write_file(out_dir / (std::string(name) + ".txt"), ids.str());
    if (args.write_corpora) write_corpus_dir(part, out_dir / name);
  };
  write_manifest("train", result.train);
  write_manifest("dev", result.dev);
  write_manifest("test", result.test);

  RunMeta meta;
  meta.command = "split";
  meta.config = {{"corpus", args.corpus_dir},
                 {"ratios", args.ratios},
                 {"seed", args.seed},
                 {"write_corpora", args.write_corpora}};
  meta.add_input(args.corpus_dir);
  meta.write(out_dir);

  report_warnings(load.warnings);
  std::cout << "train " << result.train.documents.size() << ", dev "
            << result.dev.documents.size() << ", test " << result.test.documents.size() << '\n';
  return 0;
}

// ------------------------------------------------------------------- chunk

struct ChunkArgs {
  std::string corpus_dir;
  std::string out_dir;
  int max_tokens = 512;
  int overlap = 0;
};

int run_chunk(const ChunkArgs& args) {
  CorpusLoad load = load_corpus_dir(args.corpus_dir);
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);

  int total_chunks = 0;
  int dropped = 0;
  for (const Document& doc : load.corpus.documents) {
    for (const Chunk& chunk : chunk_document(doc, args.max_tokens, args.overlap)) {
      write_file(out_dir / (chunk.chunk_id() + ".txt"), chunk.text);
      if (auto it = load.corpus.gold.find(doc.doc_id()); it != load.corpus.gold.end()) {
        ChunkAnnotations local = annotations_for_chunk(chunk, it->second);
        dropped += local.dropped_crossing;
        write_file(out_dir / (chunk.chunk_id() + ".ann"), write_standoff(local.set));
      }
      ++total_chunks;
    }
  }

  RunMeta meta;
  meta.command = "chunk";
  meta.config = {{"corpus", args.corpus_dir},
                 {"max_tokens", args.max_tokens},
                 {"overlap", args.overlap},
                 {"chunks", total_chunks},
                 {"dropped_crossing_spans", dropped}};
  meta.add_input(args.corpus_dir);
  meta.write(out_dir);

  report_warnings(load.warnings);
  std::cout << total_chunks << " chunks" << (dropped ? " (" + std::to_string(dropped) +
                                                           " boundary-crossing spans dropped)"
                                                     : "")
            << '\n';
  return 0;
}

// ------------------------------------------------------------------- stats

struct StatsArgs {
  std::string corpus_dir;
  std::string out_dir;
};

int run_stats(const StatsArgs& args) {
  CorpusLoad load = load_corpus_dir(args.corpus_dir);
  const LabelStats stats = label_stats(load.corpus);

  std::ostringstream tsv;
  tsv << "label\tspans\tdocuments\n";
  Json json_labels = Json::object();
  for (const auto& [label, count] : stats.span_counts) {
    const long docs = stats.doc_frequency.count(label) ? stats.doc_frequency.at(label) : 0;
    tsv << label.name() << '\t' << count << '\t' << docs << '\n';
    json_labels[label.name()] = {{"spans", count}, {"documents", docs}};
  }
  tsv << "TOTAL\t" << stats.total << "\t" << load.corpus.documents.size() << '\n';

  Json doc;
  doc["labels"] = json_labels;
  doc["total_spans"] = stats.total;
  doc["documents"] = load.corpus.documents.size();

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "stats.tsv", tsv.str());
  write_file(out_dir / "stats.json", doc.dump(2) + "\n");

  RunMeta meta;
  meta.command = "stats";
  meta.config = {{"corpus", args.corpus_dir}};
  meta.add_input(args.corpus_dir);
  meta.write(out_dir);

  report_warnings(load.warnings);
  std::cout << tsv.str();
  return 0;
}

// ----------------------------------------------------------------- convert

struct ConvertArgs {
  std::string corpus_dir;
  std::string out_path;
  std::string to = "tags";
  std::string tags_file;
};

int run_convert(const ConvertArgs& args) {
  CorpusLoad load = load_corpus_dir(args.corpus_dir);
  std::vector<std::string> warnings = std::move(load.warnings);

  if (args.to == "tags") {
    std::vector<TokenTagDocument> tagged;
    for (const Document& doc : load.corpus.documents) {
      static const AnnotationSet kEmpty;
      auto it = load.corpus.gold.find(doc.doc_id());
      const AnnotationSet& gold = it == load.corpus.gold.end() ? kEmpty : it->second;
      tagged.push_back(to_token_tags(doc, gold, &warnings));
    }
    const fs::path out_path(args.out_path);
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_file(out_path, write_token_tags(tagged));

    RunMeta meta;
    meta.command = "convert";
    meta.config = {{"corpus", args.corpus_dir}, {"to", args.to}, {"out", args.out_path}};
    meta.add_input(args.corpus_dir);
    meta.write(out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));
    report_warnings(warnings);
    std::cout << "wrote " << tagged.size() << " tagged documents\n";
    return 0;
  }

  if (args.to == "standoff") {
    if (args.tags_file.empty()) {
      throw Error(ErrorCode::BadConfig, "--to standoff needs --tags-file");
    }
    load_predictions(load.corpus, args.tags_file, "converted", Validation::Lenient, &warnings);
    const fs::path out_dir(args.out_path);
    fs::create_directories(out_dir);
    for (const auto& [doc_id, set] : load.corpus.predictions.at("converted")) {
      write_file(out_dir / (doc_id + ".ann"), write_standoff(set));
    }
    RunMeta meta;
    meta.command = "convert";
    meta.config = {{"corpus", args.corpus_dir},
                   {"to", args.to},
                   {"tags_file", args.tags_file},
                   {"out", args.out_path}};
    meta.add_input(args.corpus_dir);
    meta.add_input(args.tags_file);
    meta.write(out_dir);
    report_warnings(warnings);
    std::cout << "wrote stand-off files to " << out_dir.string() << '\n';
    return 0;
  }

  throw Error(ErrorCode::BadConfig, "--to must be tags or standoff");
}

// ------------------------------------------------------------------- merge

struct MergeArgs {
  std::string corpus_dir;
  std::vector<std::string> preds;  // NAME=PATH, order defines priority
  std::string out_dir;
  std::string strategy = "union";
  std::string mode = "type";
  bool no_conflict_resolution = false;
  std::vector<std::string> dev_reports;  // NAME=PATH
};

int run_merge(const MergeArgs& args) {
  if (args.preds.empty()) throw Error(ErrorCode::BadConfig, "need at least one --pred NAME=PATH");

  CorpusLoad load = load_corpus_dir(args.corpus_dir);
  std::vector<std::string> warnings = std::move(load.warnings);

  std::vector<std::string> source_order;
  for (const std::string& arg : args.preds) {
    const auto [name, path] = parse_named_path(arg);
    load_predictions(load.corpus, path, name, Validation::Lenient, &warnings);
    source_order.push_back(name);
  }

  MergeStrategy strategy;
  strategy.priority = source_order;
  strategy.mode = parse_match_mode(args.mode);
  strategy.resolve_conflicts = !args.no_conflict_resolution;
  if (args.strategy == "union") {
    strategy.kind = MergeStrategy::Kind::Union;
  } else if (args.strategy == "intersection") {
    strategy.kind = MergeStrategy::Kind::Intersection;
  } else if (args.strategy == "per-label-best") {
    strategy.kind = MergeStrategy::Kind::PerLabelBest;
    for (const std::string& arg : args.dev_reports) {
      const auto [name, path] = parse_named_path(arg);
      strategy.dev_reports[name] = report_from_json(read_file(path));
    }
  } else if (args.strategy == "priority") {
    strategy.kind = MergeStrategy::Kind::Priority;
  } else {
    throw Error(ErrorCode::BadConfig,
                "--strategy must be union|intersection|per-label-best|priority");
  }

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);

  Json provenance = Json::object();
  std::vector<TokenTagDocument> tagged;
  int dropped = 0;
  for (const Document& doc : load.corpus.documents) {
    std::vector<AnnotationSet> inputs;
    for (const std::string& source : source_order) {
      inputs.push_back(load.corpus.predictions.at(source).at(doc.doc_id()));
    }
    MergeResult result = merge(inputs, strategy);
    dropped += result.dropped_conflicts;
    write_file(out_dir / (doc.doc_id() + ".ann"), write_standoff(result.merged));
    Json doc_prov = Json::object();
    for (const auto& [span_id, source] : result.provenance) doc_prov[span_id] = source;
    provenance[doc.doc_id()] = doc_prov;
    tagged.push_back(to_token_tags(doc, result.merged, &warnings));
  }
  write_file(out_dir / "merged.tags", write_token_tags(tagged));
  write_file(out_dir / "provenance.json", provenance.dump(2) + "\n");

  RunMeta meta;
  meta.command = "merge";
  meta.config = {{"corpus", args.corpus_dir},
                 {"pred", args.preds},
                 {"strategy", args.strategy},
                 {"mode", args.mode},
                 {"conflict_resolution", !args.no_conflict_resolution},
                 {"dev_reports", args.dev_reports},
                 {"dropped_conflicts", dropped}};
  meta.add_input(args.corpus_dir);
  for (const std::string& arg : args.preds) meta.add_input(parse_named_path(arg).second);
  for (const std::string& arg : args.dev_reports) meta.add_input(parse_named_path(arg).second);
  meta.write(out_dir);

  report_warnings(warnings);
  std::cout << "merged " << load.corpus.documents.size() << " documents\n";
  return 0;
}

// -------------------------------------------------------------- oversample

struct OversampleArgs {
  std::string corpus_dir;
  std::string out_dir;
  std::string label;
  double factor = 1.0;
  std::uint64_t seed = 0;
};

int run_oversample(const OversampleArgs& args) {
  CorpusLoad load = load_corpus_dir(args.corpus_dir);
  const Corpus result = oversample(load.corpus, parse_label(args.label), args.factor, args.seed);
  write_corpus_dir(result, args.out_dir);

  RunMeta meta;
  meta.command = "oversample";
  meta.config = {{"corpus", args.corpus_dir},
                 {"label", args.label},
                 {"factor", args.factor},
                 {"seed", args.seed}};
  meta.add_input(args.corpus_dir);
  meta.write(args.out_dir);

  report_warnings(load.warnings);
  std::cout << result.documents.size() << " documents ("
            << result.documents.size() - load.corpus.documents.size() << " duplicates)\n";
  return 0;
}

// ------------------------------------------------------------------- synth

struct SynthArgs {
  std::string out_dir;
  std::uint64_t seed = 0;
  int n_docs = 10;
  std::string targets;
  bool perturb = false;
  std::uint64_t noise_seed = 0;
  double deletion_p = 0.0;
  double jitter_p = 0.0;
  int max_jitter = 2;
  double spurious_rate = 0.0;
  std::vector<std::string> confusions;  // FROM:TO=P
};

Json fragments_to_json(const std::vector<Fragment>& fragments) {
  Json out = Json::array();
  for (const Fragment& f : fragments) out.push_back({{"start", f.start}, {"end", f.end}});
  return out;
}

int run_synth(const SynthArgs& args) {
  GenSpec spec;
  spec.seed = args.seed;
  spec.n_docs = args.n_docs;
  if (!args.targets.empty()) spec.targets = parse_label_counts(args.targets);

  const GeneratedCorpus generated = generate(spec);
  const fs::path out_dir(args.out_dir);
  write_corpus_dir(generated.corpus, out_dir);

  Json ledger;
  ledger["seed"] = generated.ledger.seed;
  ledger["total"] = generated.ledger.total;
  Json counts = Json::object();
  for (const auto& [label, count] : generated.ledger.label_counts) counts[label.name()] = count;
  ledger["label_counts"] = counts;
  Json per_doc = Json::object();
  for (const auto& [doc_id, doc_counts] : generated.ledger.per_doc) {
    Json entry = Json::object();
    for (const auto& [label, count] : doc_counts) entry[label.name()] = count;
    per_doc[doc_id] = entry;
  }
  ledger["per_doc"] = per_doc;
  write_file(out_dir / "ledger.json", ledger.dump(2) + "\n");

  if (args.perturb) {
    NoiseSpec noise;
    noise.seed = args.noise_seed;
    noise.default_deletion_p = args.deletion_p;
    noise.jitter_p = args.jitter_p;
    noise.max_jitter = args.max_jitter;
    noise.spurious_rate = args.spurious_rate;
    for (const std::string& arg : args.confusions) {
      const std::size_t colon = arg.find(':');
      const std::size_t eq = arg.find('=');
      if (colon == std::string::npos || eq == std::string::npos || eq < colon) {
        throw Error(ErrorCode::BadConfig, "expected FROM:TO=P, got \"" + arg + "\"");
      }
      noise.confusion[parse_label(arg.substr(0, colon))]
                     [parse_label(arg.substr(colon + 1, eq - colon - 1))] =
          std::stod(arg.substr(eq + 1));
    }

    const fs::path pred_dir = out_dir / "perturbed";
    fs::create_directories(pred_dir);
    Json actions = Json::array();
    for (const Document& doc : generated.corpus.documents) {
      const Perturbed result = perturb(doc, generated.corpus.gold.at(doc.doc_id()), noise);
      write_file(pred_dir / (doc.doc_id() + ".ann"), write_standoff(result.prediction));
      for (const SpanAction& action : result.ledger.actions) {
        actions.push_back({{"doc_id", doc.doc_id()},
                           {"gold_id", action.gold_id},
                           {"deleted", action.deleted},
                           {"boundary_changed", action.boundary_changed},
                           {"label_changed", action.label_changed},
                           {"gold_label", action.gold_label.name()},
                           {"pred_label", action.pred_label.name()},
                           {"gold_fragments", fragments_to_json(action.gold_fragments)},
                           {"pred_fragments", fragments_to_json(action.pred_fragments)}});
      }
      for (const EntitySpan& spurious : result.ledger.spurious) {
        actions.push_back({{"doc_id", doc.doc_id()},
                           {"spurious_id", spurious.id},
                           {"label", spurious.label.name()},
                           {"fragments", fragments_to_json(spurious.fragments)}});
      }
    }
    Json perturbation;
    perturbation["seed"] = noise.seed;
    perturbation["actions"] = actions;
    write_file(out_dir / "perturbation.json", perturbation.dump(2) + "\n");
  }

  RunMeta meta;
  meta.command = "synth";
  meta.config = {{"seed", args.seed},
                 {"n_docs", args.n_docs},
                 {"targets", args.targets},
                 {"perturb", args.perturb},
                 {"noise_seed", args.noise_seed},
                 {"deletion_p", args.deletion_p},
                 {"jitter_p", args.jitter_p},
                 {"max_jitter", args.max_jitter},
                 {"spurious_rate", args.spurious_rate},
                 {"confuse", args.confusions}};
  meta.write(out_dir);

  std::cout << "generated " << generated.corpus.documents.size() << " documents, "
            << generated.ledger.total << " spans\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medmine: corpus tools and span-level evaluation for medication extraction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against gold");
  evaluate->add_option("--gold", evaluate_args.gold_dir, "Directory of <id>.txt/<id>.ann pairs")
      ->required();
  evaluate->add_option("--pred", evaluate_args.pred_path,
                       "Prediction directory of .ann files or a .tags file")
      ->required();
  evaluate->add_option("--source", evaluate_args.source, "Prediction source name");
  evaluate->add_option("--out", evaluate_args.out_dir, "Output directory")->required();
  evaluate->add_option("--mode", evaluate_args.mode, "strict|exact|partial|type");
  evaluate->add_option("--exclude-labels", evaluate_args.exclude,
                       "Comma-separated labels to drop before re-aggregation");
  evaluate->add_option("--format", evaluate_args.format,
                       "Write only one of tsv|json|markdown (default: all)");
  evaluate->add_flag("--percent", evaluate_args.percent, "Render percentages (92.39%)");
  evaluate->add_flag("--no-token-accuracy", evaluate_args.no_token_accuracy,
                     "Skip BIO token accuracy");
  evaluate->add_flag("--strict-validation", evaluate_args.strict_validation,
                     "Surface mismatches become errors");
  evaluate->add_option("--parallel", evaluate_args.parallel, "Worker threads (results identical)");

  SplitArgs split_args;
  CLI::App* split = app.add_subcommand("split", "Deterministic train/dev/test split");
  split->add_option("--corpus", split_args.corpus_dir, "Corpus directory")->required();
  split->add_option("--out", split_args.out_dir, "Output directory")->required();
  split->add_option("--ratios", split_args.ratios, "Three fractions, e.g. 0.7,0.15,0.15");
  split->add_option("--seed", split_args.seed, "Shuffle seed")->required();
  split->add_flag("--write-corpora", split_args.write_corpora,
                  "Also write the three split corpora");

  ChunkArgs chunk_args;
  CLI::App* chunk = app.add_subcommand("chunk", "Token-window chunking with offset remapping");
  chunk->add_option("--corpus", chunk_args.corpus_dir, "Corpus directory")->required();
  chunk->add_option("--out", chunk_args.out_dir, "Output directory")->required();
  chunk->add_option("--max-tokens", chunk_args.max_tokens, "Window size in tokens");
  chunk->add_option("--overlap", chunk_args.overlap, "Tokens shared by consecutive chunks");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Gold label statistics");
  stats->add_option("--corpus", stats_args.corpus_dir, "Corpus directory")->required();
  stats->add_option("--out", stats_args.out_dir, "Output directory")->required();

  ConvertArgs convert_args;
  CLI::App* convert = app.add_subcommand("convert", "Convert between stand-off and token tags");
  convert->add_option("--corpus", convert_args.corpus_dir, "Corpus directory")->required();
  convert->add_option("--out", convert_args.out_path, "Output file (tags) or directory")
      ->required();
  convert->add_option("--to", convert_args.to, "tags|standoff");
  convert->add_option("--tags-file", convert_args.tags_file, "Input .tags for --to standoff");

  MergeArgs merge_args;
  CLI::App* merge_cmd = app.add_subcommand("merge", "Merge prediction sets from several models");
  merge_cmd->add_option("--corpus", merge_args.corpus_dir, "Corpus directory")->required();
  merge_cmd->add_option("--pred", merge_args.preds, "NAME=PATH (repeatable; order = priority)")
      ->required();
  merge_cmd->add_option("--out", merge_args.out_dir, "Output directory")->required();
  merge_cmd->add_option("--strategy", merge_args.strategy,
                        "union|intersection|per-label-best|priority");
  merge_cmd->add_option("--mode", merge_args.mode, "Match mode for intersection");
  merge_cmd->add_flag("--no-conflict-resolution", merge_args.no_conflict_resolution,
                      "Keep overlapping spans with conflicting labels");
  merge_cmd->add_option("--dev-report", merge_args.dev_reports,
                        "NAME=report.json (per-label-best)");

  OversampleArgs oversample_args;
  CLI::App* oversample_cmd =
      app.add_subcommand("oversample", "Duplicate documents carrying a rare label");
  oversample_cmd->add_option("--corpus", oversample_args.corpus_dir, "Corpus directory")
      ->required();
  oversample_cmd->add_option("--out", oversample_args.out_dir, "Output directory")->required();
  oversample_cmd->add_option("--label", oversample_args.label, "Label to boost")->required();
  oversample_cmd->add_option("--factor", oversample_args.factor, "Target count multiplier")
      ->required();
  oversample_cmd->add_option("--seed", oversample_args.seed, "Sampling seed")->required();

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Seeded synthetic corpus generation");
  synth->add_option("--out", synth_args.out_dir, "Output directory")->required();
  synth->add_option("--seed", synth_args.seed, "Generation seed")->required();
  synth->add_option("--n-docs", synth_args.n_docs, "Number of documents");
  synth->add_option("--targets", synth_args.targets, "LABEL=COUNT,... (default: reference shape)");
  synth->add_flag("--perturb", synth_args.perturb, "Also write a perturbed prediction set");
  synth->add_option("--noise-seed", synth_args.noise_seed, "Perturbation seed");
  synth->add_option("--deletion-p", synth_args.deletion_p, "Span deletion probability");
  synth->add_option("--jitter-p", synth_args.jitter_p, "Boundary jitter probability");
  synth->add_option("--max-jitter", synth_args.max_jitter, "Maximum jitter in characters");
  synth->add_option("--spurious-rate", synth_args.spurious_rate, "Spurious spans per document");
  synth->add_option("--confuse", synth_args.confusions, "FROM:TO=P (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*evaluate) return run_evaluate(evaluate_args);
    if (*split) return run_split(split_args);
    if (*chunk) return run_chunk(chunk_args);
    if (*stats) return run_stats(stats_args);
    if (*convert) return run_convert(convert_args);
    if (*merge_cmd) return run_merge(merge_args);
    if (*oversample_cmd) return run_oversample(oversample_args);
    if (*synth) return run_synth(synth_args);
  } catch (const Error& e) {
    std::cerr << "medmine: " << e.what() << '\n';
    return e.code() == ErrorCode::BadConfig ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "medmine: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
