#include "graphhop/report.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "graphhop/dataset_io.hpp"

namespace graphhop {

using ordered_json = nlohmann::ordered_json;

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

Aggregates aggregate(const std::vector<InstanceEval>& evals) {
  Aggregates agg;
  agg.n = static_cast<int>(evals.size());
  if (evals.empty()) return agg;

  bool have_graph = true;
  double gm = 0, gs = 0, ged = 0;
  double f1 = 0, precision = 0, recall = 0, em = 0, qa = 0;
  for (const InstanceEval& e : evals) {
    const MetricsReport& m = e.metrics;
    if (!m.gm || !m.gs || !m.ged) have_graph = false;
    if (have_graph) {
      gm += *m.gm;
      gs += *m.gs;
      ged += m.ged->distance;
    }
    f1 += m.f1;
    precision += m.precision;
    recall += m.recall;
    em += m.set_em;
    qa += m.qa_em;
    if (e.truncated) ++agg.truncated_count;
  }
  double n = static_cast<double>(evals.size());
  if (have_graph) {
    agg.gm_pct = 100.0 * gm / n;
    agg.gs_pct = 100.0 * gs / n;
    agg.ged_mean = ged / n;
  }
  agg.f1_pct = 100.0 * f1 / n;
  agg.precision_pct = 100.0 * precision / n;
  agg.recall_pct = 100.0 * recall / n;
  agg.em_pct = 100.0 * em / n;
  agg.qa_em_pct = 100.0 * qa / n;
  return agg;
}

namespace {

std::string cell(const std::optional<double>& v) {
  return v ? format_fixed(*v) : "-";
}

std::string aggregates_row(const std::string& label, const Aggregates& a) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-12s %8s %8s %8s %8s %10s %8s %8s %8s\n",
                label.c_str(), cell(a.gm_pct).c_str(), cell(a.gs_pct).c_str(),
                cell(a.ged_mean).c_str(), format_fixed(a.f1_pct).c_str(),
                format_fixed(a.precision_pct).c_str(),
                format_fixed(a.recall_pct).c_str(), format_fixed(a.em_pct).c_str(),
                format_fixed(a.qa_em_pct).c_str());
  return buf;
}

const char* kTableHeader =
    "method             GM       GS      GED       F1  Precision   Recall       EM    QA-EM\n";

}  // namespace

std::string render_report_table(const RunReport& report) {
  std::string out = kTableHeader;
  out += aggregates_row(report.method, report.aggregates);
  return out;
}

namespace {

ordered_json aggregates_to_json(const Aggregates& a) {
  ordered_json j;
  j["n"] = a.n;
  j["gm"] = a.gm_pct ? ordered_json(*a.gm_pct) : ordered_json(nullptr);
  j["gs"] = a.gs_pct ? ordered_json(*a.gs_pct) : ordered_json(nullptr);
  j["ged"] = a.ged_mean ? ordered_json(*a.ged_mean) : ordered_json(nullptr);
  j["f1"] = a.f1_pct;
  j["precision"] = a.precision_pct;
  j["recall"] = a.recall_pct;
  j["em"] = a.em_pct;
  j["qa_em"] = a.qa_em_pct;
  j["truncated"] = a.truncated_count;
  return j;
}

Aggregates aggregates_from_json(const ordered_json& j) {
  Aggregates a;
  a.n = j.at("n").get<int>();
  if (!j.at("gm").is_null()) a.gm_pct = j.at("gm").get<double>();
  if (!j.at("gs").is_null()) a.gs_pct = j.at("gs").get<double>();
  if (!j.at("ged").is_null()) a.ged_mean = j.at("ged").get<double>();
  a.f1_pct = j.at("f1").get<double>();
  a.precision_pct = j.at("precision").get<double>();
  a.recall_pct = j.at("recall").get<double>();
  a.em_pct = j.at("em").get<double>();
  a.qa_em_pct = j.at("qa_em").get<double>();
  a.truncated_count = j.at("truncated").get<int>();
  return a;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
  ordered_json j;
  j["method"] = report.method;
  j["scorer"] = report.scorer;
  j["gamma"] = report.gamma;
  j["fuse_mode"] = report.fuse_mode;
  j["seed"] = report.seed;
  j["aggregates"] = aggregates_to_json(report.aggregates);
  ordered_json rows = ordered_json::array();
  for (const InstanceEval& e : report.per_instance) {
    ordered_json r;
    r["id"] = e.instance_id;
    r["structure_class"] = to_string(e.structure_class);
    r["question_type"] = to_string(e.question_type);
    r["gm"] = e.metrics.gm ? ordered_json(*e.metrics.gm) : ordered_json(nullptr);
    r["gs"] = e.metrics.gs ? ordered_json(*e.metrics.gs) : ordered_json(nullptr);
    if (e.metrics.ged) {
      r["ged"] = e.metrics.ged->distance;
      r["ged_exact"] = e.metrics.ged->exact;
    } else {
      r["ged"] = nullptr;
      r["ged_exact"] = nullptr;
    }
    r["precision"] = e.metrics.precision;
    r["recall"] = e.metrics.recall;
    r["f1"] = e.metrics.f1;
    r["set_em"] = e.metrics.set_em;
    r["qa_em"] = e.metrics.qa_em;
    r["pred_chains"] = e.pred_chains;
    r["pred_answer"] = e.pred_answer;
    r["truncated"] = e.truncated;
    r["fuse_combined"] = e.fuse_combined;
    r["fuse_cycle_dropped"] = e.fuse_cycle_dropped;
    r["fuse_ambiguous"] = e.fuse_ambiguous;
    r["bsc"] = e.bsc_value ? ordered_json(*e.bsc_value) : ordered_json(nullptr);
    rows.push_back(r);
  }
  j["per_instance"] = rows;
  return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("bad report json: ") + e.what());
  }
  try {
    RunReport report;
    report.method = j.at("method").get<std::string>();
    report.scorer = j.at("scorer").get<std::string>();
    report.gamma = j.at("gamma").get<double>();
    report.fuse_mode = j.at("fuse_mode").get<std::string>();
    report.seed = j.at("seed").get<uint64_t>();
    report.aggregates = aggregates_from_json(j.at("aggregates"));
    for (const auto& r : j.at("per_instance")) {
      InstanceEval e;
      e.instance_id = r.at("id").get<std::string>();
      e.structure_class = structure_class_from_string(r.at("structure_class"));
      e.question_type = question_type_from_string(r.at("question_type"));
      if (!r.at("gm").is_null()) e.metrics.gm = r.at("gm").get<int>();
      if (!r.at("gs").is_null()) e.metrics.gs = r.at("gs").get<int>();
      if (!r.at("ged").is_null()) {
        e.metrics.ged = GedResult{r.at("ged").get<int>(), r.at("ged_exact").get<bool>()};
      }
      e.metrics.precision = r.at("precision").get<double>();
      e.metrics.recall = r.at("recall").get<double>();
      e.metrics.f1 = r.at("f1").get<double>();
      e.metrics.set_em = r.at("set_em").get<int>();
      e.metrics.qa_em = r.at("qa_em").get<int>();
      e.pred_chains = r.at("pred_chains").get<std::string>();
      e.pred_answer = r.at("pred_answer").get<std::string>();
      e.truncated = r.at("truncated").get<bool>();
      e.fuse_combined = r.at("fuse_combined").get<bool>();
      e.fuse_cycle_dropped = r.at("fuse_cycle_dropped").get<bool>();
      e.fuse_ambiguous = r.at("fuse_ambiguous").get<bool>();
      if (!r.at("bsc").is_null()) e.bsc_value = r.at("bsc").get<double>();
      report.per_instance.push_back(std::move(e));
    }
    return report;
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(std::string("bad report record: ") + e.what());
  }
}

void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report: " + path);
  out << report_to_json(report) << "\n";
}

RunReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read report: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

Breakdown compute_breakdown(const RunReport& report,
                            const std::vector<QAInstance>& dataset) {
  std::map<std::string, const QAInstance*> by_id;
  for (const QAInstance& inst : dataset) by_id[inst.id] = &inst;

  std::map<StructureClass, std::vector<InstanceEval>> class_groups;
  std::map<QuestionType, std::vector<InstanceEval>> type_groups;
  for (const InstanceEval& e : report.per_instance) {
    auto it = by_id.find(e.instance_id);
    if (it == by_id.end()) {
      throw DataError("report instance " + e.instance_id + " not in dataset");
    }
    class_groups[it->second->structure_class].push_back(e);
    type_groups[it->second->question_type].push_back(e);
  }

  Breakdown out;
  for (StructureClass c : {StructureClass::kScSh, StructureClass::kScMh,
                           StructureClass::kMcSh, StructureClass::kMcMh}) {
    auto it = class_groups.find(c);
    if (it == class_groups.end()) continue;  // zero instances: row omitted
    out.by_class.push_back({to_string(c), aggregate(it->second)});
  }
  for (QuestionType t : {QuestionType::kQuery, QuestionType::kComparison,
                         QuestionType::kCount, QuestionType::kBool,
                         QuestionType::kQualifier}) {
    auto it = type_groups.find(t);
    if (it == type_groups.end()) continue;
    out.by_type.push_back({to_string(t), aggregate(it->second)});
  }
  return out;
}

std::string render_breakdown(const Breakdown& breakdown) {
  std::string out = "by structure class\n";
  out += kTableHeader;
  for (const BreakdownRow& row : breakdown.by_class) {
    out += aggregates_row(row.key, row.aggregates);
  }
  out += "\nby question type\n";
  out += kTableHeader;
  for (const BreakdownRow& row : breakdown.by_type) {
    out += aggregates_row(row.key, row.aggregates);
  }
  return out;
}

std::string breakdown_to_json(const Breakdown& breakdown) {
  ordered_json j;
  ordered_json by_class = ordered_json::array();
  for (const BreakdownRow& row : breakdown.by_class) {
    ordered_json r;
    r["key"] = row.key;
    r["aggregates"] = aggregates_to_json(row.aggregates);
    by_class.push_back(r);
  }
  j["by_structure_class"] = by_class;
  ordered_json by_type = ordered_json::array();
  for (const BreakdownRow& row : breakdown.by_type) {
    ordered_json r;
    r["key"] = row.key;
    r["aggregates"] = aggregates_to_json(row.aggregates);
    by_type.push_back(r);
  }
  j["by_question_type"] = by_type;
  return j.dump(2);
}

}  // namespace graphhop
