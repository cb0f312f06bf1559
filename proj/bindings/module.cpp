#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "medmine/core.hpp"
#include "medmine/corpus_io.hpp"
#include "medmine/corpus_tools.hpp"
#include "medmine/ensemble.hpp"
#include "medmine/matcher.hpp"
#include "medmine/metrics.hpp"
#include "medmine/standoff.hpp"
#include "medmine/synthetic.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace medmine;

namespace {

py::dict prf_to_dict(const PRF& row) {
  return py::dict("precision"_a = row.precision, "recall"_a = row.recall, "f1"_a = row.f1,
                  "support"_a = row.support, "zero_division"_a = row.zero_division);
}

py::dict counts_to_dict(const MatchCounts& counts) {
  return py::dict("cor"_a = counts.cor, "inc"_a = counts.inc, "par"_a = counts.par,
                  "mis"_a = counts.mis, "spu"_a = counts.spu, "possible"_a = counts.possible(),
                  "actual"_a = counts.actual());
}

py::dict report_to_dict(const EvaluationReport& report) {
  py::dict per_label;
  for (const auto& [label, row] : report.per_label) {
    per_label[py::str(label.name())] = prf_to_dict(row);
  }
  py::dict counts;
  for (const auto& [label, cell] : report.counts) {
    counts[py::str(label.name())] = counts_to_dict(cell);
  }
  py::dict out("mode"_a = to_string(report.mode), "per_label"_a = per_label, "counts"_a = counts,
               "macro"_a = prf_to_dict(report.macro), "weighted"_a = prf_to_dict(report.weighted),
               "total_support"_a = report.total_support);
  out["micro"] = report.micro ? py::object(prf_to_dict(*report.micro)) : py::none();
  out["token_accuracy"] =
      report.token_accuracy ? py::object(py::float_(*report.token_accuracy)) : py::none();
  return out;
}

LabelRows rows_from_list(const std::vector<std::tuple<std::string, double, double, double, long>>&
                             rows) {
  LabelRows out;
  for (const auto& [name, p, r, f1, support] : rows) {
    PRF row;
    row.precision = p;
    row.recall = r;
    row.f1 = f1;
    row.support = support;
    out[parse_label(name)] = row;
  }
  return out;
}

std::set<Label> labels_from_list(const std::vector<std::string>& names) {
  std::set<Label> out;
  for (const std::string& name : names) out.insert(parse_label(name));
  return out;
}

}  // namespace

PYBIND11_MODULE(_medmine, m) {
  m.doc() = "Corpus tools and span-level evaluation for medication extraction.";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "MedmineError");

  py::class_<Fragment>(m, "Fragment")
      .def(py::init<std::size_t, std::size_t>(), "start"_a, "end"_a)
      .def_readwrite("start", &Fragment::start)
      .def_readwrite("end", &Fragment::end)
      .def("__len__", &Fragment::length)
      .def("__eq__", [](const Fragment& a, const Fragment& b) { return a == b; })
      .def("__repr__", [](const Fragment& f) {
        return "Fragment(" + std::to_string(f.start) + ", " + std::to_string(f.end) + ")";
      });

  py::class_<EntitySpan>(m, "EntitySpan")
      .def(py::init([](const std::string& id, const std::string& label,
                       const std::vector<std::pair<std::size_t, std::size_t>>& fragments,
                       const std::string& surface) {
             EntitySpan span;
             span.id = id;
             span.label = parse_label(label);
             for (const auto& [start, end] : fragments) span.fragments.push_back({start, end});
             span.surface = surface;
             return span;
           }),
           "id"_a, "label"_a, "fragments"_a, "surface"_a = "")
      .def_readwrite("id", &EntitySpan::id)
      .def_property(
          "label", [](const EntitySpan& s) { return s.label.name(); },
          [](EntitySpan& s, const std::string& name) { s.label = parse_label(name); })
      .def_readwrite("fragments", &EntitySpan::fragments)
      .def_readwrite("surface", &EntitySpan::surface)
      .def("extent", &EntitySpan::extent)
      .def("__repr__", [](const EntitySpan& s) {
        const Fragment e = s.extent();
        return "EntitySpan(" + s.id + ", " + s.label.name() + ", [" + std::to_string(e.start) +
               "," + std::to_string(e.end) + "))";
      });

  py::class_<Document>(m, "Document")
      .def(py::init<std::string, std::string>(), "doc_id"_a, "text"_a)
      .def_property_readonly("doc_id", &Document::doc_id)
      .def_property_readonly("text", &Document::text)
      .def("__len__", &Document::length)
      .def("slice", &Document::slice, "start"_a, "end"_a);

  py::class_<AnnotationSet>(m, "AnnotationSet")
      .def(py::init([](const std::string& doc_id, const std::string& source,
                       const std::vector<EntitySpan>& spans) {
             AnnotationSet set;
             set.doc_id = doc_id;
             set.source = source;
             set.spans = spans;
             return set;
           }),
           "doc_id"_a, "source"_a = kGoldSource, "spans"_a = std::vector<EntitySpan>{})
      .def_readwrite("doc_id", &AnnotationSet::doc_id)
      .def_readwrite("source", &AnnotationSet::source)
      .def_readwrite("spans", &AnnotationSet::spans)
      .def("__len__", [](const AnnotationSet& s) { return s.spans.size(); });

  py::class_<Corpus>(m, "Corpus")
      .def(py::init<>())
      .def_readwrite("documents", &Corpus::documents)
      .def("add_document",
           [](Corpus& corpus, const Document& doc) { corpus.documents.push_back(doc); })
      .def("set_gold",
           [](Corpus& corpus, const AnnotationSet& set) { corpus.gold[set.doc_id] = set; })
      .def("add_prediction", [](Corpus& corpus, const std::string& source,
                                const AnnotationSet& set) {
        AnnotationSet copy = set;
        copy.source = source;
        corpus.predictions[source][set.doc_id] = std::move(copy);
      })
      .def("gold_for",
           [](const Corpus& corpus, const std::string& doc_id) -> py::object {
             auto it = corpus.gold.find(doc_id);
             return it == corpus.gold.end() ? py::none() : py::cast(it->second);
           })
      .def("__len__", [](const Corpus& corpus) { return corpus.documents.size(); });

  py::class_<Token>(m, "Token")
      .def_readonly("text", &Token::text)
      .def_readonly("start", &Token::start)
      .def_readonly("end", &Token::end)
      .def("__repr__", [](const Token& t) { return "Token(" + t.text + ")"; });

  py::class_<Chunk>(m, "Chunk")
      .def_readonly("doc_id", &Chunk::doc_id)
      .def_readonly("index", &Chunk::index)
      .def_readonly("first_token", &Chunk::first_token)
      .def_readonly("char_offset_base", &Chunk::char_offset_base)
      .def_readonly("char_end", &Chunk::char_end)
      .def_readonly("text", &Chunk::text)
      .def_readonly("tokens", &Chunk::tokens)
      .def("chunk_id", &Chunk::chunk_id)
      .def("to_parent", &Chunk::to_parent, "local_offset"_a)
      .def("__len__", [](const Chunk& c) { return c.tokens.size(); });

  // --- label / validation ---------------------------------------------

  m.def(
      "parse_label",
      [](const std::string& text) {
        const Label label = parse_label(text);
        return py::make_tuple(label.name(), label.known());
      },
      "text"_a, "Canonical label name and whether it belongs to the closed set.");

  m.def(
      "validate_span",
      [](const Document& doc, const EntitySpan& span, bool strict) {
        return validate_span(doc, span, strict ? Validation::Strict : Validation::Lenient);
      },
      "doc"_a, "span"_a, "strict"_a = false);

  // --- stand-off / token-tag io ----------------------------------------

  m.def(
      "parse_standoff",
      [](const Document& doc, const std::string& ann_content, bool strict) {
        StandoffParse parsed = parse_standoff(
            doc, ann_content, strict ? Validation::Strict : Validation::Lenient);
        return py::make_tuple(parsed.set, parsed.skipped_lines, parsed.warnings);
      },
      "doc"_a, "ann_content"_a, "strict"_a = false,
      "Returns (annotation_set, skipped_lines, warnings).");

  m.def("write_standoff", &write_standoff, "annotation_set"_a);

  m.def(
      "parse_token_tags",
      [](const std::string& content) {
        TokenTagParse parsed = parse_token_tags(content);
        py::list documents;
        for (const TokenTagDocument& doc : parsed.documents) {
          py::list records;
          for (const TokenTagRecord& r : doc.records) {
            records.append(py::make_tuple(r.token, r.start, r.end, r.tag));
          }
          documents.append(py::make_tuple(doc.doc_id, records));
        }
        return py::make_tuple(documents, parsed.repaired);
      },
      "content"_a, "Returns ([(doc_id, [(token, start, end, tag), ...]), ...], repaired).");

  m.def(
      "write_token_tags",
      [](const std::vector<std::pair<
             std::string, std::vector<std::tuple<std::string, std::size_t, std::size_t,
                                                 std::string>>>>& documents) {
        std::vector<TokenTagDocument> converted;
        for (const auto& [doc_id, records] : documents) {
          TokenTagDocument doc;
          doc.doc_id = doc_id;
          for (const auto& [token, start, end, tag] : records) {
            doc.records.push_back({token, start, end, tag});
          }
          converted.push_back(std::move(doc));
        }
        return write_token_tags(converted);
      },
      "documents"_a);

  // --- corpus tools -----------------------------------------------------

  m.def(
      "tokenize", [](const std::string& text) { return tokenize_text(text); }, "text"_a);

  m.def(
      "split_corpus",
      [](const Corpus& corpus, double train, double dev, double test, std::uint64_t seed) {
        SplitSpec spec;
        spec.ratios = {train, dev, test};
        spec.seed = seed;
        SplitResult result = split_corpus(corpus, spec);
        return py::make_tuple(result.train, result.dev, result.test);
      },
      "corpus"_a, "train"_a = 0.70, "dev"_a = 0.15, "test"_a = 0.15, "seed"_a = 0);

  m.def("chunk_document", &chunk_document, "doc"_a, "max_tokens"_a = 512, "overlap"_a = 0);

  m.def(
      "spans_to_bio",
      [](const std::vector<Token>& tokens, const std::vector<EntitySpan>& spans) {
        return spans_to_bio(tokens, spans);
      },
      "tokens"_a, "spans"_a);

  m.def("bio_to_spans", &bio_to_spans, "tokens"_a, "tags"_a);

  m.def(
      "label_stats",
      [](const Corpus& corpus) {
        const LabelStats stats = label_stats(corpus);
        py::dict spans, docs;
        for (const auto& [label, count] : stats.span_counts) {
          spans[py::str(label.name())] = count;
        }
        for (const auto& [label, count] : stats.doc_frequency) {
          docs[py::str(label.name())] = count;
        }
        return py::dict("span_counts"_a = spans, "doc_frequency"_a = docs,
                        "total"_a = stats.total);
      },
      "corpus"_a);

  m.def(
      "oversample",
      [](const Corpus& corpus, const std::string& label, double factor, std::uint64_t seed) {
        return oversample(corpus, parse_label(label), factor, seed);
      },
      "corpus"_a, "label"_a, "factor"_a, "seed"_a = 0);

  // --- matching / metrics ----------------------------------------------

  m.def(
      "evaluate_document",
      [](const AnnotationSet& gold, const AnnotationSet& pred, const std::string& mode) {
        const ClassifiedCounts counts = evaluate_document(gold, pred, parse_match_mode(mode));
        py::dict per_label;
        for (const auto& [label, cell] : counts.per_label) {
          per_label[py::str(label.name())] = counts_to_dict(cell);
        }
        return py::dict("per_label"_a = per_label, "overall"_a = counts_to_dict(counts.overall));
      },
      "gold"_a, "pred"_a, "mode"_a = "type");

  m.def(
      "evaluate_corpus",
      [](const Corpus& corpus, const std::string& source, const std::string& mode, int parallel) {
        const LabelCounts counts =
            evaluate_corpus(corpus, source, parse_match_mode(mode), parallel);
        return report_to_dict(build_report(counts, parse_match_mode(mode)));
      },
      "corpus"_a, "source"_a, "mode"_a = "type", "parallel"_a = 1);

  m.def(
      "aggregate_rows",
      [](const std::vector<std::tuple<std::string, double, double, double, long>>& rows) {
        return report_to_dict(report_from_rows(rows_from_list(rows)));
      },
      "rows"_a, "Aggregate (label, precision, recall, f1, support) rows.");

  m.def(
      "aggregate_rows_excluding",
      [](const std::vector<std::tuple<std::string, double, double, double, long>>& rows,
         const std::vector<std::string>& excluded) {
        const EvaluationReport report = report_from_rows(rows_from_list(rows));
        return report_to_dict(filter_and_reaggregate(report, labels_from_list(excluded)));
      },
      "rows"_a, "excluded"_a);

  m.def("token_accuracy", &token_accuracy, "gold_tags"_a, "pred_tags"_a);

  m.def(
      "overlap",
      [](const EntitySpan& a, const EntitySpan& b) { return overlap_size(a, b); },
      "a"_a, "b"_a);

  // --- ensemble ----------------------------------------------------------

  m.def(
      "merge_predictions",
      [](const std::vector<AnnotationSet>& inputs, const std::string& strategy,
         const std::string& mode, bool resolve_conflicts) {
        MergeStrategy s;
        s.mode = parse_match_mode(mode);
        s.resolve_conflicts = resolve_conflicts;
        if (strategy == "union") {
          s.kind = MergeStrategy::Kind::Union;
        } else if (strategy == "intersection") {
          s.kind = MergeStrategy::Kind::Intersection;
        } else if (strategy == "priority") {
          s.kind = MergeStrategy::Kind::Priority;
        } else {
          throw Error(ErrorCode::BadConfig, "strategy must be union|intersection|priority");
        }
        MergeResult result = merge(inputs, s);
        return py::make_tuple(result.merged, result.provenance);
      },
      "inputs"_a, "strategy"_a = "union", "mode"_a = "type", "resolve_conflicts"_a = true,
      "Returns (merged_set, provenance). Use merge_per_label_best for dev-report selection.");

  m.def(
      "merge_per_label_best",
      [](const std::vector<AnnotationSet>& inputs,
         const std::map<std::string, std::string>& dev_report_json) {
        MergeStrategy s;
        s.kind = MergeStrategy::Kind::PerLabelBest;
        for (const auto& [source, json_text] : dev_report_json) {
          s.dev_reports[source] = report_from_json(json_text);
        }
        MergeResult result = merge(inputs, s);
        return py::make_tuple(result.merged, result.provenance);
      },
      "inputs"_a, "dev_report_json"_a);

  // --- synthetic ----------------------------------------------------------

  m.def(
      "generate",
      [](std::uint64_t seed, int n_docs, const std::map<std::string, long>& targets) {
        GenSpec spec;
        spec.seed = seed;
        spec.n_docs = n_docs;
        for (const auto& [name, count] : targets) spec.targets[parse_label(name)] = count;
        GeneratedCorpus generated = generate(spec);
        py::dict counts;
        for (const auto& [label, count] : generated.ledger.label_counts) {
          counts[py::str(label.name())] = count;
        }
        return py::make_tuple(generated.corpus,
                              py::dict("seed"_a = generated.ledger.seed,
                                       "total"_a = generated.ledger.total,
                                       "label_counts"_a = counts));
      },
      "seed"_a = 0, "n_docs"_a = 10, "targets"_a = std::map<std::string, long>{});

  m.def(
      "perturb",
      [](const Document& doc, const AnnotationSet& gold, std::uint64_t seed, double deletion_p,
         double jitter_p, int max_jitter, double spurious_rate) {
        NoiseSpec noise;
        noise.seed = seed;
        noise.default_deletion_p = deletion_p;
        noise.jitter_p = jitter_p;
        noise.max_jitter = max_jitter;
        noise.spurious_rate = spurious_rate;
        Perturbed result = perturb(doc, gold, noise);
        py::list actions;
        for (const SpanAction& action : result.ledger.actions) {
          actions.append(py::dict("gold_id"_a = action.gold_id, "deleted"_a = action.deleted,
                                  "boundary_changed"_a = action.boundary_changed,
                                  "label_changed"_a = action.label_changed,
                                  "gold_label"_a = action.gold_label.name(),
                                  "pred_label"_a = action.pred_label.name()));
        }
        return py::make_tuple(result.prediction,
                              py::dict("actions"_a = actions,
                                       "spurious"_a = result.ledger.spurious));
      },
      "doc"_a, "gold"_a, "seed"_a = 0, "deletion_p"_a = 0.0, "jitter_p"_a = 0.0,
      "max_jitter"_a = 2, "spurious_rate"_a = 0.0);

  m.def("report_from_json", [](const std::string& text) {
    return report_to_dict(report_from_json(text));
  });
}
