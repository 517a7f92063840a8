#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphhop {

// Fact identifiers are non-negative integers unique within one database.
// The question root uses a reserved negative sentinel so it can never
// collide with a fact id.
using FactId = int64_t;
inline constexpr FactId kQuestionNode = -1;

struct Triple {
  std::string head;
  std::string relation;
  std::string tail;

  bool operator==(const Triple& o) const = default;
  auto operator<=>(const Triple& o) const = default;
};

enum class DistractorKind { kSemantic, kSameHead, kRandom };

std::string to_string(DistractorKind k);
DistractorKind distractor_kind_from_string(const std::string& s);

// One evidence sentence plus the knowledge triples it verbalizes.
struct Fact {
  FactId id = 0;
  std::string text;
  std::vector<Triple> provenance;  // 1..3 triples sharing provenance[0].head
  bool is_distractor = false;
  std::optional<DistractorKind> distractor_kind;
};

class TextualDatabase {
 public:
  TextualDatabase() = default;

  void add(Fact fact);
  const Fact& at(FactId id) const;
  const Fact* find(FactId id) const;
  bool contains(FactId id) const { return index_.count(id) > 0; }
  const std::vector<Fact>& facts() const { return facts_; }
  size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

 private:
  std::vector<Fact> facts_;
  std::unordered_map<FactId, size_t> index_;
};

enum class QuestionType { kQuery, kComparison, kCount, kBool, kQualifier };

std::string to_string(QuestionType t);
QuestionType question_type_from_string(const std::string& s);

enum class StructureClass { kScSh, kScMh, kMcSh, kMcMh };

std::string to_string(StructureClass c);
StructureClass structure_class_from_string(const std::string& s);

enum class Direction { kForward, kBackward };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

enum class OpKind {
  kFind,
  kRelate,
  kFilterAttr,
  kSelectBetween,
  kCount,
  kVerifyBool,
  kQueryAttrQualifier,
};

std::string to_string(OpKind k);
OpKind op_kind_from_string(const std::string& s);

struct ProgramOp {
  OpKind kind;
  std::vector<std::string> args;

  bool operator==(const ProgramOp& o) const = default;
};

using GoldenProgram = std::vector<ProgramOp>;

// Checks the structural rules: Find opens each chain, a terminal op can
// only appear last, and arities match the op kind. Returns an error
// message, or nullopt when well-formed.
std::optional<std::string> check_program(const GoldenProgram& program);

}  // namespace graphhop
