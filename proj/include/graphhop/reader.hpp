#pragma once

#include <optional>
#include <string>

#include "graphhop/instance.hpp"

namespace graphhop {

// Symbolic answer generation: recovers triples from the provenance of the
// retrieved facts and executes the instance's program over them, in the
// reading order given by the graph structure. Degraded retrieval degrades
// the answer to "unknown"; this never throws.
std::string read_answer(const QAInstance& instance, const EvidenceGraph& retrieved);

// Evidence block for an external reader: the question, then the retrieved
// facts as numbered lines in graph reading order (chain-major, hop order
// within a chain, shared nodes once).
std::string format_reader_prompt(const QAInstance& instance,
                                 const EvidenceGraph& retrieved);

// Pipes the prompt to a shell command and returns its first output line.
// The command reads the prompt on stdin and prints one answer line.
std::string run_external_reader(const std::string& command,
                                const std::string& prompt);

}  // namespace graphhop
