#pragma once

#include <string>
#include <vector>

#include "graphhop/instance.hpp"
#include "graphhop/synthgen.hpp"

namespace graphhop {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-delimited JSON records, UTF-8, one instance per line. Field layout:
// id, question, answer, question_type, structure_class, gold_chains,
// facts (id, text, is_distractor, distractor_kind, provenance), program.
void write_dataset(const std::vector<QAInstance>& instances,
                   const std::string& path);
std::vector<QAInstance> read_dataset(const std::string& path);

std::string instance_to_json_line(const QAInstance& instance);
QAInstance instance_from_json_line(const std::string& line);

GenConfig load_gen_config(const std::string& path);

void write_distribution_report(const DistributionReport& report,
                               const std::string& json_path,
                               const std::string& text_path);

std::string render_distribution_report(const DistributionReport& report);

}  // namespace graphhop
