#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphhop/instance.hpp"
#include "graphhop/metrics.hpp"

namespace graphhop {

struct InstanceEval {
  std::string instance_id;
  StructureClass structure_class = StructureClass::kScSh;
  QuestionType question_type = QuestionType::kQuery;
  MetricsReport metrics;
  std::string pred_chains;  // empty when the method reports no graph
  std::string pred_answer;
  bool truncated = false;
  bool fuse_combined = false;
  bool fuse_cycle_dropped = false;
  bool fuse_ambiguous = false;
  std::optional<double> bsc_value;
};

// Percent-scaled means in instance order; GED stays an absolute mean.
// Graph columns are absent when any instance lacks them.
struct Aggregates {
  int n = 0;
  std::optional<double> gm_pct;
  std::optional<double> gs_pct;
  std::optional<double> ged_mean;
  double f1_pct = 0.0;
  double precision_pct = 0.0;
  double recall_pct = 0.0;
  double em_pct = 0.0;
  double qa_em_pct = 0.0;
  int truncated_count = 0;
};

struct RunReport {
  std::string method;
  std::string scorer;
  double gamma = 0.2;
  std::string fuse_mode;
  uint64_t seed = 0;
  Aggregates aggregates;
  std::vector<InstanceEval> per_instance;
};

Aggregates aggregate(const std::vector<InstanceEval>& evals);

// One row in the method / GM / GS / GED / F1 / Precision / Recall / EM /
// QA-EM column layout, "-" for absent graph columns.
std::string render_report_table(const RunReport& report);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
void write_report(const RunReport& report, const std::string& path);
RunReport load_report(const std::string& path);

struct BreakdownRow {
  std::string key;
  Aggregates aggregates;
};

struct Breakdown {
  std::vector<BreakdownRow> by_class;  // rows omitted for empty classes
  std::vector<BreakdownRow> by_type;
};

// Joins report rows with dataset instances by id; throws DataError when
// they do not align.
Breakdown compute_breakdown(const RunReport& report,
                            const std::vector<QAInstance>& dataset);

std::string render_breakdown(const Breakdown& breakdown);
std::string breakdown_to_json(const Breakdown& breakdown);

std::string format_fixed(double value);  // "%.3f"

}  // namespace graphhop
