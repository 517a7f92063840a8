#include "graphhop/types.hpp"

namespace graphhop {

void TextualDatabase::add(Fact fact) {
  if (index_.count(fact.id)) {
    throw std::invalid_argument("duplicate fact id " + std::to_string(fact.id));
  }
  index_[fact.id] = facts_.size();
  facts_.push_back(std::move(fact));
}

const Fact& TextualDatabase::at(FactId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw std::out_of_range("no fact with id " + std::to_string(id));
  }
  return facts_[it->second];
}

const Fact* TextualDatabase::find(FactId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &facts_[it->second];
}

std::string to_string(DistractorKind k) {
  switch (k) {
    case DistractorKind::kSemantic: return "semantic";
    case DistractorKind::kSameHead: return "same-head";
    case DistractorKind::kRandom: return "random";
  }
  return "?";
}

DistractorKind distractor_kind_from_string(const std::string& s) {
  if (s == "semantic") return DistractorKind::kSemantic;
  if (s == "same-head") return DistractorKind::kSameHead;
  if (s == "random") return DistractorKind::kRandom;
  throw std::invalid_argument("unknown distractor kind: " + s);
}

std::string to_string(QuestionType t) {
  switch (t) {
    case QuestionType::kQuery: return "query";
    case QuestionType::kComparison: return "comparison";
    case QuestionType::kCount: return "count";
    case QuestionType::kBool: return "bool";
    case QuestionType::kQualifier: return "qualifier";
  }
  return "?";
}

QuestionType question_type_from_string(const std::string& s) {
  if (s == "query") return QuestionType::kQuery;
  if (s == "comparison") return QuestionType::kComparison;
  if (s == "count") return QuestionType::kCount;
  if (s == "bool") return QuestionType::kBool;
  if (s == "qualifier") return QuestionType::kQualifier;
  throw std::invalid_argument("unknown question type: " + s);
}

std::string to_string(StructureClass c) {
  switch (c) {
    case StructureClass::kScSh: return "SC-SH";
    case StructureClass::kScMh: return "SC-MH";
    case StructureClass::kMcSh: return "MC-SH";
    case StructureClass::kMcMh: return "MC-MH";
  }
  return "?";
}

StructureClass structure_class_from_string(const std::string& s) {
  if (s == "SC-SH") return StructureClass::kScSh;
  if (s == "SC-MH") return StructureClass::kScMh;
  if (s == "MC-SH") return StructureClass::kMcSh;
  if (s == "MC-MH") return StructureClass::kMcMh;
  throw std::invalid_argument("unknown structure class: " + s);
}

std::string to_string(Direction d) {
  return d == Direction::kForward ? "forward" : "backward";
}

Direction direction_from_string(const std::string& s) {
  if (s == "forward") return Direction::kForward;
  if (s == "backward") return Direction::kBackward;
  throw std::invalid_argument("unknown direction: " + s);
}

std::string to_string(OpKind k) {
  switch (k) {
    case OpKind::kFind: return "Find";
    case OpKind::kRelate: return "Relate";
    case OpKind::kFilterAttr: return "FilterAttr";
    case OpKind::kSelectBetween: return "SelectBetween";
    case OpKind::kCount: return "Count";
    case OpKind::kVerifyBool: return "VerifyBool";
    case OpKind::kQueryAttrQualifier: return "QueryAttrQualifier";
  }
  return "?";
}

OpKind op_kind_from_string(const std::string& s) {
  if (s == "Find") return OpKind::kFind;
  if (s == "Relate") return OpKind::kRelate;
  if (s == "FilterAttr") return OpKind::kFilterAttr;
  if (s == "SelectBetween") return OpKind::kSelectBetween;
  if (s == "Count") return OpKind::kCount;
  if (s == "VerifyBool") return OpKind::kVerifyBool;
  if (s == "QueryAttrQualifier") return OpKind::kQueryAttrQualifier;
  throw std::invalid_argument("unknown program op: " + s);
}

namespace {

bool is_terminal(OpKind k) {
  switch (k) {
    case OpKind::kSelectBetween:
    case OpKind::kCount:
    case OpKind::kVerifyBool:
    case OpKind::kQueryAttrQualifier:
      return true;
    default:
      return false;
  }
}

size_t expected_arity(OpKind k) {
  switch (k) {
    case OpKind::kFind: return 1;
    case OpKind::kRelate: return 2;
    case OpKind::kFilterAttr: return 1;
    case OpKind::kSelectBetween: return 2;
    case OpKind::kCount: return 0;
    case OpKind::kVerifyBool: return 1;
    case OpKind::kQueryAttrQualifier: return 2;
  }
  return 0;
}

}  // namespace

std::optional<std::string> check_program(const GoldenProgram& program) {
  if (program.empty()) return "empty program";
  if (program.front().kind != OpKind::kFind) return "program must open with Find";
  for (size_t i = 0; i < program.size(); ++i) {
    const ProgramOp& op = program[i];
    if (op.args.size() != expected_arity(op.kind)) {
      return to_string(op.kind) + " expects " +
             std::to_string(expected_arity(op.kind)) + " args, got " +
             std::to_string(op.args.size());
    }
    if (is_terminal(op.kind) && i + 1 != program.size()) {
      return to_string(op.kind) + " must be the final op";
    }
    if (op.kind == OpKind::kRelate && op.args[1] != "forward" &&
        op.args[1] != "backward") {
      return "Relate direction must be forward or backward";
    }
    if (op.kind == OpKind::kSelectBetween && op.args[1] != "greater" &&
        op.args[1] != "less") {
      return "SelectBetween comparator must be greater or less";
    }
  }
  return std::nullopt;
}

}  // namespace graphhop
