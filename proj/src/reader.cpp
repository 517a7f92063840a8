#include "graphhop/reader.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "graphhop/program_exec.hpp"
#include "graphhop/rng.hpp"
#include "graphhop/strings.hpp"

namespace graphhop {

std::string read_answer(const QAInstance& instance, const EvidenceGraph& retrieved) {
  std::set<Triple> triples;
  for (FactId id : retrieved.evidence_nodes()) {
    const Fact* fact = instance.database.find(id);
    if (fact == nullptr) continue;
    for (const Triple& t : fact->provenance) triples.insert(t);
  }
  TripleSetSource source(std::move(triples));
  ExecTrace trace = execute_program(instance.program, source);
  return trace.ok ? trace.answer : "unknown";
}

std::string format_reader_prompt(const QAInstance& instance,
                                 const EvidenceGraph& retrieved) {
  std::ostringstream out;
  out << "Q: " << instance.question << "\n";
  int line = 0;
  for (FactId id : evidence_order(retrieved)) {
    const Fact* fact = instance.database.find(id);
    if (fact == nullptr) continue;
    out << line++ << ". " << fact->text << "\n";
  }
  return out.str();
}

std::string run_external_reader(const std::string& command,
                                const std::string& prompt) {
  // Hand the prompt over via a temp file; popen pipes are unidirectional.
  std::string path = "/tmp/graphhop_reader_" +
                     std::to_string(hash_str(prompt) ^ hash_str(command)) + ".txt";
  {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write reader prompt: " + path);
    out << prompt;
  }
  std::string full = command + " < " + path;
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) {
    std::remove(path.c_str());
    throw std::runtime_error("cannot launch external reader: " + command);
  }
  std::string answer;
  char buf[4096];
  if (fgets(buf, sizeof(buf), pipe) != nullptr) {
    answer = buf;
  }
  pclose(pipe);
  std::remove(path.c_str());
  while (!answer.empty() && (answer.back() == '\n' || answer.back() == '\r')) {
    answer.pop_back();
  }
  return answer;
}

}  // namespace graphhop
