#pragma once

#include <string>

#include "graphhop/graph.hpp"
#include "graphhop/types.hpp"

namespace graphhop {

struct QAInstance {
  std::string id;
  std::string question;
  std::string answer;
  EvidenceGraph gold_graph;
  GoldenProgram program;
  QuestionType question_type = QuestionType::kQuery;
  StructureClass structure_class = StructureClass::kScSh;
  TextualDatabase database;
};

}  // namespace graphhop
