#include "graphhop/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace graphhop {

using ordered_json = nlohmann::ordered_json;

std::string instance_to_json_line(const QAInstance& instance) {
  ordered_json j;
  j["id"] = instance.id;
  j["question"] = instance.question;
  j["answer"] = instance.answer;
  j["question_type"] = to_string(instance.question_type);
  j["structure_class"] = to_string(instance.structure_class);
  j["gold_chains"] = serialize_chains(instance.gold_graph);
  ordered_json facts = ordered_json::array();
  for (const Fact& f : instance.database.facts()) {
    ordered_json jf;
    jf["id"] = f.id;
    jf["text"] = f.text;
    jf["is_distractor"] = f.is_distractor;
    if (f.distractor_kind) {
      jf["distractor_kind"] = to_string(*f.distractor_kind);
    } else {
      jf["distractor_kind"] = nullptr;
    }
    ordered_json prov = ordered_json::array();
    for (const Triple& t : f.provenance) {
      prov.push_back(ordered_json::array({t.head, t.relation, t.tail}));
    }
    jf["provenance"] = prov;
    facts.push_back(jf);
  }
  j["facts"] = facts;
  ordered_json prog = ordered_json::array();
  for (const ProgramOp& op : instance.program) {
    ordered_json jo;
    jo["op"] = to_string(op.kind);
    jo["args"] = op.args;
    prog.push_back(jo);
  }
  j["program"] = prog;
  return j.dump();
}

QAInstance instance_from_json_line(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw DataError(std::string("bad dataset line: ") + e.what());
  }
  try {
    QAInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.question = j.at("question").get<std::string>();
    inst.answer = j.at("answer").get<std::string>();
    inst.question_type = question_type_from_string(j.at("question_type"));
    inst.structure_class = structure_class_from_string(j.at("structure_class"));
    inst.gold_graph = parse_chains(j.at("gold_chains").get<std::string>());
    for (const auto& jf : j.at("facts")) {
      Fact f;
      f.id = jf.at("id").get<FactId>();
      f.text = jf.at("text").get<std::string>();
      f.is_distractor = jf.at("is_distractor").get<bool>();
      if (!jf.at("distractor_kind").is_null()) {
        f.distractor_kind = distractor_kind_from_string(jf.at("distractor_kind"));
      }
      for (const auto& jt : jf.at("provenance")) {
        if (jt.size() != 3) throw DataError("provenance triple must have 3 fields");
        f.provenance.push_back({jt.at(0).get<std::string>(),
                                jt.at(1).get<std::string>(),
                                jt.at(2).get<std::string>()});
      }
      inst.database.add(std::move(f));
    }
    for (const auto& jo : j.at("program")) {
      ProgramOp op;
      op.kind = op_kind_from_string(jo.at("op"));
      for (const auto& a : jo.at("args")) op.args.push_back(a.get<std::string>());
      inst.program.push_back(std::move(op));
    }
    return inst;
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(std::string("bad dataset record: ") + e.what());
  }
}

void write_dataset(const std::vector<QAInstance>& instances,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset: " + path);
  for (const QAInstance& inst : instances) {
    out << instance_to_json_line(inst) << "\n";
  }
}

std::vector<QAInstance> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read dataset: " + path);
  std::vector<QAInstance> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(instance_from_json_line(line));
  }
  return out;
}

GenConfig load_gen_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad config json: ") + e.what());
  }
  GenConfig cfg;
  try {
    if (j.contains("n_instances")) cfg.n_instances = j["n_instances"].get<int>();
    if (j.contains("structure_mix")) {
      cfg.structure_mix.clear();
      for (const auto& [key, val] : j["structure_mix"].items()) {
        cfg.structure_mix[structure_class_from_string(key)] = val.get<double>();
      }
    }
    if (j.contains("db_size")) cfg.db_size = j["db_size"].get<int>();
    if (j.contains("distractor_ratio")) {
      cfg.distractor_ratio = j["distractor_ratio"].get<double>();
    }
    if (j.contains("rng_seed")) cfg.rng_seed = j["rng_seed"].get<uint64_t>();
    if (j.contains("split_ratio")) {
      auto arr = j["split_ratio"];
      if (arr.size() != 3) throw ConfigError("split_ratio needs 3 entries");
      for (int i = 0; i < 3; ++i) cfg.split_ratio[i] = arr[i].get<double>();
    }
    if (j.contains("bundle_prob")) cfg.bundle_prob = j["bundle_prob"].get<double>();
    if (j.contains("triples_path")) {
      cfg.triples_path = j["triples_path"].get<std::string>();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

namespace {

const std::vector<StructureClass> kClasses = {
    StructureClass::kScSh, StructureClass::kScMh, StructureClass::kMcSh,
    StructureClass::kMcMh};
const std::vector<QuestionType> kTypes = {
    QuestionType::kQuery, QuestionType::kComparison, QuestionType::kCount,
    QuestionType::kBool, QuestionType::kQualifier};
const std::vector<DistractorKind> kKinds = {
    DistractorKind::kSemantic, DistractorKind::kSameHead, DistractorKind::kRandom};

}  // namespace

std::string render_distribution_report(const DistributionReport& r) {
  std::ostringstream out;
  out << "instances: " << r.emitted << " / " << r.requested
      << " (failed attempts: " << r.grounding_failures << ")\n";
  out << "splits: train=" << r.split_sizes[0] << " dev=" << r.split_sizes[1]
      << " test=" << r.split_sizes[2] << "\n\n";
  out << "class      train    dev   test  total\n";
  for (StructureClass c : kClasses) {
    auto it = r.class_counts.find(c);
    std::array<int, 3> counts = it == r.class_counts.end()
                                    ? std::array<int, 3>{0, 0, 0}
                                    : it->second;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-8s %7d %6d %6d %6d\n", to_string(c).c_str(),
                  counts[0], counts[1], counts[2],
                  counts[0] + counts[1] + counts[2]);
    out << buf;
  }
  out << "\nquestion types:";
  for (QuestionType t : kTypes) {
    auto it = r.question_type_counts.find(t);
    out << " " << to_string(t) << "=" << (it == r.question_type_counts.end() ? 0 : it->second);
  }
  out << "\ndistractors:";
  for (DistractorKind k : kKinds) {
    auto it = r.distractor_counts.find(k);
    out << " " << to_string(k) << "=" << (it == r.distractor_counts.end() ? 0 : it->second);
  }
  char ratio[64];
  std::snprintf(ratio, sizeof(ratio), "%.3f", r.realized_distractor_ratio);
  out << "\nrealized distractor ratio: " << ratio << "\n";
  return out.str();
}

void write_distribution_report(const DistributionReport& r,
                               const std::string& json_path,
                               const std::string& text_path) {
  ordered_json j;
  j["requested"] = r.requested;
  j["emitted"] = r.emitted;
  j["failed_attempts"] = r.grounding_failures;
  j["split_sizes"] = {r.split_sizes[0], r.split_sizes[1], r.split_sizes[2]};
  ordered_json classes;
  for (StructureClass c : kClasses) {
    auto it = r.class_counts.find(c);
    std::array<int, 3> counts =
        it == r.class_counts.end() ? std::array<int, 3>{0, 0, 0} : it->second;
    classes[to_string(c)] = {counts[0], counts[1], counts[2]};
  }
  j["class_counts"] = classes;
  ordered_json types;
  for (QuestionType t : kTypes) {
    auto it = r.question_type_counts.find(t);
    types[to_string(t)] = it == r.question_type_counts.end() ? 0 : it->second;
  }
  j["question_type_counts"] = types;
  ordered_json kinds;
  for (DistractorKind k : kKinds) {
    auto it = r.distractor_counts.find(k);
    kinds[to_string(k)] = it == r.distractor_counts.end() ? 0 : it->second;
  }
  j["distractor_counts"] = kinds;
  j["realized_distractor_ratio"] = r.realized_distractor_ratio;
  j["failure_log"] = r.failure_log;

  std::ofstream jout(json_path);
  if (!jout) throw DataError("cannot write report: " + json_path);
  jout << j.dump(2) << "\n";

  std::ofstream tout(text_path);
  if (!tout) throw DataError("cannot write report: " + text_path);
  tout << render_distribution_report(r);
}

}  // namespace graphhop
