#include "graphhop/program_exec.hpp"

#include <algorithm>
#include <optional>

#include "graphhop/strings.hpp"

namespace graphhop {

std::vector<Triple> TripleSetSource::forward(const std::string& head,
                                             const std::string& relation) const {
  std::vector<Triple> out;
  for (auto it = triples_.lower_bound({head, relation, ""});
       it != triples_.end() && it->head == head && it->relation == relation; ++it) {
    out.push_back(*it);
  }
  return out;
}

std::vector<Triple> TripleSetSource::backward(const std::string& relation,
                                              const std::string& tail) const {
  std::vector<Triple> out;
  for (const Triple& t : triples_) {
    if (t.relation == relation && t.tail == tail) out.push_back(t);
  }
  return out;
}

std::string qualified_relation(const std::string& attr, const std::string& qualifier) {
  return attr + " (" + qualifier + ")";
}

namespace {

// One live branch of a chain: the entity currently in focus and the hop
// that produced it.
struct Branch {
  std::string entity;
  int hop = -1;
};

struct ChainState {
  std::vector<Branch> branches;
};

struct Executor {
  const TripleSource& source;
  ExecTrace trace;
  std::vector<ChainState> chains;

  std::vector<Triple> lookup_forward(const std::string& head,
                                     const std::string& relation) {
    trace.patterns.push_back(
        {QueryPattern::Kind::kHeadRelation, head, relation});
    return source.forward(head, relation);
  }

  std::vector<Triple> lookup_backward(const std::string& relation,
                                      const std::string& tail) {
    trace.patterns.push_back({QueryPattern::Kind::kRelationTail, relation, tail});
    return source.backward(relation, tail);
  }

  int add_hop(const Triple& t, int parent, int chain) {
    trace.hops.push_back({t, parent, chain});
    return static_cast<int>(trace.hops.size()) - 1;
  }

  bool fail(const std::string& why) {
    trace.ok = false;
    trace.error = why;
    return false;
  }

  bool op_find(const std::string& entity) {
    if (!source.has_entity(entity)) return fail("unknown entity: " + entity);
    chains.push_back({{Branch{entity, -1}}});
    return true;
  }

  bool op_relate(const std::string& relation, Direction dir) {
    if (chains.empty()) return fail("Relate before Find");
    ChainState& chain = chains.back();
    int chain_idx = static_cast<int>(chains.size()) - 1;
    std::vector<Branch> next;
    for (const Branch& b : chain.branches) {
      std::vector<Triple> matches = dir == Direction::kForward
                                        ? lookup_forward(b.entity, relation)
                                        : lookup_backward(relation, b.entity);
      for (const Triple& t : matches) {
        int hop = add_hop(t, b.hop, chain_idx);
        next.push_back({dir == Direction::kForward ? t.tail : t.head, hop});
      }
    }
    if (next.empty()) return fail("no match for Relate(" + relation + ")");
    chain.branches = std::move(next);
    return true;
  }

  bool op_filter_attr(const std::string& attr) {
    if (chains.empty()) return fail("FilterAttr before Find");
    ChainState& chain = chains.back();
    int chain_idx = static_cast<int>(chains.size()) - 1;
    std::vector<Branch> kept;
    for (const Branch& b : chain.branches) {
      std::vector<Triple> matches = lookup_forward(b.entity, attr);
      if (matches.empty()) continue;
      int hop = add_hop(matches.front(), b.hop, chain_idx);
      kept.push_back({b.entity, hop});
    }
    chain.branches = std::move(kept);  // may legitimately become empty
    return true;
  }

  std::optional<Branch> single_branch(const ChainState& chain,
                                      const std::string& op_name) {
    if (chain.branches.size() != 1) {
      fail(op_name + " needs exactly one entity in focus, found " +
           std::to_string(chain.branches.size()));
      return std::nullopt;
    }
    return chain.branches.front();
  }

  bool op_select_between(const std::string& attr, const std::string& cmp) {
    if (chains.size() < 2) return fail("SelectBetween needs two chains");
    struct Operand {
      std::string entity;
      double value;
    };
    std::vector<Operand> operands;
    for (size_t ci = 0; ci < chains.size(); ++ci) {
      auto branch = single_branch(chains[ci], "SelectBetween");
      if (!branch) return false;
      // The compared value is the branch's own attribute; ground it here
      // unless the chain already ended on that attribute hop.
      std::string value_str;
      if (branch->hop >= 0 && trace.hops[branch->hop].triple.relation == attr &&
          trace.hops[branch->hop].triple.tail == branch->entity) {
        value_str = branch->entity;
        operands.push_back({trace.hops[branch->hop].triple.head, 0.0});
      } else {
        std::vector<Triple> matches = lookup_forward(branch->entity, attr);
        if (matches.empty()) {
          return fail("SelectBetween missing " + attr + " for " + branch->entity);
        }
        add_hop(matches.front(), branch->hop, static_cast<int>(ci));
        value_str = matches.front().tail;
        operands.push_back({branch->entity, 0.0});
      }
      std::optional<double> v = parse_magnitude(value_str);
      if (!v) return fail("SelectBetween value not numeric: " + value_str);
      operands.back().value = *v;
    }
    const Operand* best = &operands[0];
    for (const Operand& op : operands) {
      bool wins = cmp == "greater" ? op.value > best->value : op.value < best->value;
      if (wins) best = &op;
    }
    // Ties make the winner arbitrary; refuse them.
    int winners = 0;
    for (const Operand& op : operands) {
      if (op.value == best->value) ++winners;
    }
    if (winners > 1) return fail("SelectBetween tie on " + attr);
    trace.answer = best->entity;
    return true;
  }

  bool op_count() {
    if (chains.empty()) return fail("Count before Find");
    trace.answer = std::to_string(chains.back().branches.size());
    return true;
  }

  bool op_verify_bool(const std::string& expected) {
    if (chains.empty()) return fail("VerifyBool before Find");
    auto branch = single_branch(chains.back(), "VerifyBool");
    if (!branch) return false;
    trace.answer =
        normalize_answer(branch->entity) == normalize_answer(expected) ? "yes" : "no";
    return true;
  }

  bool op_query_attr_qualifier(const std::string& attr, const std::string& qualifier) {
    if (chains.empty()) return fail("QueryAttrQualifier before Find");
    auto branch = single_branch(chains.back(), "QueryAttrQualifier");
    if (!branch) return false;
    std::vector<Triple> matches =
        lookup_forward(branch->entity, qualified_relation(attr, qualifier));
    if (matches.empty()) {
      return fail("no " + qualifier + " qualifier on " + attr + " for " +
                  branch->entity);
    }
    add_hop(matches.front(), branch->hop, static_cast<int>(chains.size()) - 1);
    trace.answer = matches.front().tail;
    return true;
  }

  // The implicit query terminal: the answer is the value in focus.
  bool finish_query() {
    if (chains.empty()) return fail("empty program");
    auto branch = single_branch(chains.back(), "query answer");
    if (!branch) return false;
    trace.answer = branch->entity;
    return true;
  }
};

bool is_terminal(OpKind k) {
  return k == OpKind::kSelectBetween || k == OpKind::kCount ||
         k == OpKind::kVerifyBool || k == OpKind::kQueryAttrQualifier;
}

}  // namespace

ExecTrace execute_program(const GoldenProgram& program, const TripleSource& source) {
  Executor ex{source, {}, {}};
  if (auto err = check_program(program)) {
    ex.fail(*err);
    return ex.trace;
  }

  bool ok = true;
  for (const ProgramOp& op : program) {
    switch (op.kind) {
      case OpKind::kFind:
        ok = ex.op_find(op.args[0]);
        break;
      case OpKind::kRelate:
        ok = ex.op_relate(op.args[0], direction_from_string(op.args[1]));
        break;
      case OpKind::kFilterAttr:
        ok = ex.op_filter_attr(op.args[0]);
        break;
      case OpKind::kSelectBetween:
        ok = ex.op_select_between(op.args[0], op.args[1]);
        break;
      case OpKind::kCount:
        ok = ex.op_count();
        break;
      case OpKind::kVerifyBool:
        ok = ex.op_verify_bool(op.args[0]);
        break;
      case OpKind::kQueryAttrQualifier:
        ok = ex.op_query_attr_qualifier(op.args[0], op.args[1]);
        break;
    }
    if (!ok) return ex.trace;
  }
  if (!is_terminal(program.back().kind)) {
    if (!ex.finish_query()) return ex.trace;
  }
  ex.trace.ok = true;
  return ex.trace;
}

}  // namespace graphhop
