#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tielink/batch.hpp"
#include "tielink/diagram.hpp"
#include "tielink/skein.hpp"

namespace tielink {

struct InvariantReport {
  std::string input;
  std::string invariant;  // L, Lhat, bracket, J, jones_t, kauffman_classical
  std::string route;      // skein or trace
  std::string value;      // polynomial text; parses back to the value
  std::vector<std::string> variables;
  double millis = 0.0;
  SkeinStats stats;
};

std::string to_text(const InvariantReport& r);
std::string to_json(const InvariantReport& r);

/// Computes one invariant of a diagram. The braid word, when present,
/// enables the trace route; requesting it without one is an error.
InvariantReport compute_invariant(const TiedDiagram& d,
                                  const std::optional<TiedBraidWord>& word,
                                  const std::string& input_echo,
                                  const std::string& invariant,
                                  const std::string& route, long step_budget);

// regression corpus: line-oriented rows
//   name | status | input | expected-poly
// input is `braid <n> : <letters> [: <blocks>]`, `pd <path>`, or `-`
struct CorpusRow {
  std::string name;
  std::string status;  // identified | pending
  std::string input;
  std::string expected;
};

struct CorpusOutcome {
  std::string name;
  enum class Kind { Pass, Fail, Skipped } kind;
  std::string detail;
};

std::vector<CorpusRow> load_corpus(const std::string& path);
std::vector<CorpusOutcome> run_corpus(const std::vector<CorpusRow>& rows,
                                      bool cross_route, bool mirror_check,
                                      ExecutionPolicy policy, long step_budget,
                                      const std::string& base_dir);

/// Builds the diagram named by a corpus input spec (resolving pd paths
/// against base_dir); the word is set for braid inputs.
TiedDiagram corpus_input_diagram(const std::string& input, const std::string& base_dir,
                                 std::optional<TiedBraidWord>* word_out = nullptr);

}  // namespace tielink
