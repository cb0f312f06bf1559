#include "medmine/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace medmine {

double harmonic_f1(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

PRF prf_from_counts(const MatchCounts& counts, MatchMode mode) {
  // Partial gives half credit for boundary-overlapping matches; the other
  // strategies only count COR.
  const double credit =
      static_cast<double>(counts.cor) +
      (mode == MatchMode::Partial ? 0.5 * static_cast<double>(counts.par) : 0.0);
  const long actual = counts.actual();
  const long possible = counts.possible();

  PRF out;
  out.support = possible;
  out.zero_division = actual == 0 || possible == 0;
  out.precision = actual > 0 ? credit / static_cast<double>(actual) : 0.0;
  out.recall = possible > 0 ? credit / static_cast<double>(possible) : 0.0;
  out.f1 = harmonic_f1(out.precision, out.recall);
  return out;
}

namespace {

Aggregates aggregate_rows_impl(const LabelRows& rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyReport, "no labels to aggregate");

  Aggregates out;
  double macro_p = 0, macro_r = 0, macro_f = 0;
  double weighted_p = 0, weighted_r = 0, weighted_f = 0;
  long total_support = 0;
  bool any_zero = false;
  for (const auto& [label, row] : rows) {
    macro_p += row.precision;
    macro_r += row.recall;
    macro_f += row.f1;
    weighted_p += row.precision * static_cast<double>(row.support);
    weighted_r += row.recall * static_cast<double>(row.support);
    weighted_f += row.f1 * static_cast<double>(row.support);
    total_support += row.support;
    any_zero = any_zero || row.zero_division;
  }

  const double n = static_cast<double>(rows.size());
  out.macro.precision = macro_p / n;
  out.macro.recall = macro_r / n;
  out.macro.f1 = macro_f / n;
  out.macro.support = total_support;
  out.macro.zero_division = any_zero;

  out.weighted.support = total_support;
  if (total_support > 0) {
    out.weighted.precision = weighted_p / static_cast<double>(total_support);
    out.weighted.recall = weighted_r / static_cast<double>(total_support);
    out.weighted.f1 = weighted_f / static_cast<double>(total_support);
  } else {
    out.weighted.zero_division = true;
  }
  return out;
}

}  // namespace

Aggregates aggregate(const LabelCounts& cells, MatchMode mode) {
  if (cells.empty()) throw Error(ErrorCode::EmptyReport, "no labels to aggregate");

  LabelRows rows;
  MatchCounts summed;
  for (const auto& [label, counts] : cells) {
    rows[label] = prf_from_counts(counts, mode);
    summed += counts;
  }
  Aggregates out = aggregate_rows_impl(rows);
  out.micro = prf_from_counts(summed, mode);
  return out;
}

Aggregates aggregate(const LabelRows& rows) { return aggregate_rows_impl(rows); }

EvaluationReport build_report(const LabelCounts& cells, MatchMode mode,
                              std::optional<double> token_acc) {
  EvaluationReport report;
  report.mode = mode;
  report.counts = cells;
  for (const auto& [label, counts] : cells) {
    report.per_label[label] = prf_from_counts(counts, mode);
    report.total_support += counts.possible();
    if (!label.known()) report.notes.push_back("unknown label \"" + label.name() + "\"");
  }
  Aggregates agg = aggregate(cells, mode);
  report.micro = agg.micro;
  report.macro = agg.macro;
  report.weighted = agg.weighted;
  report.token_accuracy = token_acc;
  return report;
}

EvaluationReport report_from_rows(const LabelRows& rows, MatchMode mode) {
  EvaluationReport report;
  report.mode = mode;
  report.per_label = rows;
  for (const auto& [label, row] : rows) report.total_support += row.support;
  Aggregates agg = aggregate(rows);
  report.macro = agg.macro;
  report.weighted = agg.weighted;
  return report;
}

EvaluationReport filter_and_reaggregate(const EvaluationReport& report,
                                        const std::set<Label>& excluded) {
  if (!report.counts.empty()) {
    LabelCounts kept;
    for (const auto& [label, counts] : report.counts) {
      if (!excluded.contains(label)) kept[label] = counts;
    }
    if (kept.empty()) throw Error(ErrorCode::AllLabelsExcluded, "every label was excluded");
    return build_report(kept, report.mode, report.token_accuracy);
  }

  LabelRows kept;
  for (const auto& [label, row] : report.per_label) {
    if (!excluded.contains(label)) kept[label] = row;
  }
  if (kept.empty()) throw Error(ErrorCode::AllLabelsExcluded, "every label was excluded");
  EvaluationReport out = report_from_rows(kept, report.mode);
  out.token_accuracy = report.token_accuracy;
  return out;
}

double token_accuracy(const std::vector<std::string>& gold_tags,
                      const std::vector<std::string>& pred_tags) {
  if (gold_tags.size() != pred_tags.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "gold has " + std::to_string(gold_tags.size()) + " tags, prediction has " +
                    std::to_string(pred_tags.size()));
  }
  if (gold_tags.empty()) return 0.0;
  std::size_t matches = 0;
  for (std::size_t i = 0; i < gold_tags.size(); ++i) {
    if (gold_tags[i] == pred_tags[i]) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(gold_tags.size());
}

namespace {

std::string format_number(double value, NumberStyle style) {
  char buffer[32];
  if (style == NumberStyle::Percent2) {
    std::snprintf(buffer, sizeof buffer, "%.2f%%", value * 100.0);
  } else {
    std::snprintf(buffer, sizeof buffer, "%.4f", value);
  }
  return buffer;
}

void render_row(std::ostringstream& out, const std::string& name, const PRF& row,
                NumberStyle style, char sep) {
  out << name << sep << format_number(row.precision, style) << sep
      << format_number(row.recall, style) << sep << format_number(row.f1, style) << sep
      << row.support << '\n';
}

}  // namespace

std::string render_report(const EvaluationReport& report, ReportFormat format,
                          NumberStyle style) {
  if (format == ReportFormat::Json) return report_to_json(report);

  std::ostringstream out;
  if (format == ReportFormat::Tsv) {
    out << "category\tprecision\trecall\tf1\tsupport\n";
    for (const auto& [label, row] : report.per_label) {
      render_row(out, label.name(), row, style, '\t');
    }
    if (report.token_accuracy) {
      out << "accuracy\t\t\t" << format_number(*report.token_accuracy, style) << '\t'
          << report.total_support << '\n';
    }
    if (report.micro) render_row(out, "micro avg", *report.micro, style, '\t');
    render_row(out, "macro avg", report.macro, style, '\t');
    render_row(out, "weighted avg", report.weighted, style, '\t');
    return out.str();
  }

  // Markdown, laid out like the usual classification-report table.
  out << "| Category | Pre. | Rec. | F1 | Support |\n";
  out << "|---|---|---|---|---|\n";
  auto md_row = [&](const std::string& name, const PRF& row) {
    out << "| " << name << " | " << format_number(row.precision, style) << " | "
        << format_number(row.recall, style) << " | " << format_number(row.f1, style) << " | "
        << row.support << " |\n";
  };
  for (const auto& [label, row] : report.per_label) md_row(label.name(), row);
  if (report.token_accuracy) {
    out << "| accuracy |  |  | " << format_number(*report.token_accuracy, style) << " | "
        << report.total_support << " |\n";
  }
  if (report.micro) md_row("micro avg", *report.micro);
  md_row("macro avg", report.macro);
  md_row("weighted avg", report.weighted);
  return out.str();
}

namespace {

using Json = nlohmann::ordered_json;

Json prf_to_json(const PRF& row) {
  return Json{{"precision", row.precision},
              {"recall", row.recall},
              {"f1", row.f1},
              {"support", row.support},
              {"zero_division", row.zero_division}};
}

PRF prf_from_json(const Json& node) {
  PRF row;
  row.precision = node.at("precision").get<double>();
  row.recall = node.at("recall").get<double>();
  row.f1 = node.at("f1").get<double>();
  row.support = node.at("support").get<long>();
  row.zero_division = node.value("zero_division", false);
  return row;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
  Json doc;
  doc["mode"] = to_string(report.mode);
  Json labels = Json::array();
  for (const auto& [label, row] : report.per_label) {
    Json entry = prf_to_json(row);
    entry["label"] = label.name();
    if (auto it = report.counts.find(label); it != report.counts.end()) {
      entry["counts"] = Json{{"cor", it->second.cor},
                             {"inc", it->second.inc},
                             {"par", it->second.par},
                             {"mis", it->second.mis},
                             {"spu", it->second.spu}};
    }
    labels.push_back(entry);
  }
  doc["per_label"] = labels;
  doc["micro"] = report.micro ? prf_to_json(*report.micro) : Json(nullptr);
  doc["macro"] = prf_to_json(report.macro);
  doc["weighted"] = prf_to_json(report.weighted);
  doc["token_accuracy"] = report.token_accuracy ? Json(*report.token_accuracy) : Json(nullptr);
  doc["total_support"] = report.total_support;
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedLine, std::string("bad report JSON: ") + e.what());
  }

  EvaluationReport report;
  report.mode = parse_match_mode(doc.value("mode", "type"));
  for (const Json& entry : doc.at("per_label")) {
    const Label label = parse_label(entry.at("label").get<std::string>());
    report.per_label[label] = prf_from_json(entry);
    if (entry.contains("counts")) {
      const Json& c = entry["counts"];
      report.counts[label] = MatchCounts{c.at("cor").get<long>(), c.at("inc").get<long>(),
                                         c.at("par").get<long>(), c.at("mis").get<long>(),
                                         c.at("spu").get<long>()};
    }
  }
  if (report.per_label.empty()) {
    throw Error(ErrorCode::EmptyReport, "report JSON has no labels");
  }
  if (!doc.at("micro").is_null()) report.micro = prf_from_json(doc["micro"]);
  report.macro = prf_from_json(doc.at("macro"));
  report.weighted = prf_from_json(doc.at("weighted"));
  if (!doc.at("token_accuracy").is_null()) {
    report.token_accuracy = doc["token_accuracy"].get<double>();
  }
  report.total_support = doc.at("total_support").get<long>();
  return report;
}

}  // namespace medmine
