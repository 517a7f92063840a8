#pragma once

#include <set>
#include <string>
#include <vector>

#include "graphhop/types.hpp"

namespace graphhop {

// Lookup surface shared by the generator (backed by the triple store) and
// the reader (backed by the provenance of retrieved facts). Matches are
// returned in ascending triple order.
class TripleSource {
 public:
  virtual ~TripleSource() = default;
  virtual std::vector<Triple> forward(const std::string& head,
                                      const std::string& relation) const = 0;
  virtual std::vector<Triple> backward(const std::string& relation,
                                       const std::string& tail) const = 0;
  virtual bool has_entity(const std::string& name) const = 0;
};

class TripleSetSource : public TripleSource {
 public:
  explicit TripleSetSource(std::set<Triple> triples) : triples_(std::move(triples)) {}

  std::vector<Triple> forward(const std::string& head,
                              const std::string& relation) const override;
  std::vector<Triple> backward(const std::string& relation,
                               const std::string& tail) const override;
  bool has_entity(const std::string&) const override { return true; }

 private:
  std::set<Triple> triples_;
};

// A lookup the program performed; facts matching one of these would let a
// stray database entry change the program's outcome, so the generator
// keeps distractor and padding triples away from them.
struct QueryPattern {
  enum class Kind { kHeadRelation, kRelationTail };
  Kind kind;
  std::string first;   // head, or relation
  std::string second;  // relation, or tail

  bool matches(const Triple& t) const {
    return kind == Kind::kHeadRelation ? (t.head == first && t.relation == second)
                                       : (t.relation == first && t.tail == second);
  }
};

// One grounded lookup result. parent indexes the hop this one extends
// (-1 for a chain opened at the root); chain numbers the opening Find.
struct ExecHop {
  Triple triple;
  int parent = -1;
  int chain = 0;
};

struct ExecTrace {
  bool ok = false;
  std::string error;
  std::string answer;
  std::vector<ExecHop> hops;
  std::vector<QueryPattern> patterns;
};

// Runs a golden program against a triple source. Never throws: failures
// (missing entity, no match, ambiguous comparison) come back as !ok with
// the reason in error.
ExecTrace execute_program(const GoldenProgram& program, const TripleSource& source);

std::string qualified_relation(const std::string& attr, const std::string& qualifier);

}  // namespace graphhop
