// Published per-label evaluation rows used as aggregation fixtures. The
// aggregate rows printed alongside them are recomputable from these values,
// which is what the metrics tests pin down.

#ifndef MEDMINE_TESTS_FIXTURES_HPP
#define MEDMINE_TESTS_FIXTURES_HPP

#include "medmine/metrics.hpp"

namespace fixtures {

struct Row {
  const char* label;
  double precision;
  double recall;
  double f1;
  long support;
};

/// Type-mode report of a fine-tuned 9-label tagger over 76 letters, with the
/// degenerate O row included (13415 tags total).
inline constexpr Row kTenLabelRows[] = {
    {"O", 0.0000, 0.0000, 0.0000, 874},
    {"Reason", 0.7276, 0.4552, 0.5601, 927},
    {"ADE", 0.5579, 0.2190, 0.3145, 242},
    {"Form", 0.9229, 0.9393, 0.9310, 1696},
    {"Strength", 0.9749, 0.9494, 0.9620, 1639},
    {"Dosage", 0.9124, 0.8816, 0.8967, 1039},
    {"Drug", 0.9345, 0.9135, 0.9239, 3954},
    {"Route", 0.9580, 0.9366, 0.9472, 1341},
    {"Frequency", 0.8502, 0.9399, 0.8928, 1564},
    {"Duration", 0.8015, 0.7554, 0.7778, 139},
};

/// Type-mode report of the 7-label baseline tagger on the same test set.
inline constexpr Row kSevenLabelRows[] = {
    {"Form", 0.90, 0.90, 0.90, 1696},     {"Strength", 0.70, 0.80, 0.75, 1639},
    {"Dosage", 0.11, 0.24, 0.15, 1039},   {"Drug", 0.90, 0.77, 0.83, 3954},
    {"Route", 0.96, 0.94, 0.94, 1341},    {"Frequency", 0.74, 0.79, 0.76, 1564},
    {"Duration", 0.73, 0.75, 0.74, 139},
};

/// Percent-style rows of a second model (overall row first); every row's F1
/// must be the harmonic mean of its precision and recall.
inline constexpr Row kPercentRows[] = {
    {"overall", 87.98, 90.14, 89.05, 0},  {"ADE", 51.96, 55.09, 53.48, 432},
    {"Dosage", 85.94, 91.40, 88.59, 803}, {"Drug", 93.05, 95.63, 94.32, 8193},
    {"Duration", 58.40, 67.34, 62.55, 98}, {"Form", 91.69, 90.46, 91.07, 1647},
    {"Frequency", 88.13, 90.09, 89.10, 1838}, {"Reason", 59.57, 62.01, 60.77, 1369},
    {"Route", 90.90, 91.28, 91.09, 1205}, {"Strength", 94.83, 96.00, 95.41, 1377},
};

template <std::size_t N>
medmine::LabelRows rows_from(const Row (&rows)[N]) {
  medmine::LabelRows out;
  for (const Row& row : rows) {
    medmine::PRF prf;
    prf.precision = row.precision;
    prf.recall = row.recall;
    prf.f1 = row.f1;
    prf.support = row.support;
    out[medmine::parse_label(row.label)] = prf;
  }
  return out;
}

}  // namespace fixtures

#endif
