#include "tielink/report.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tielink/tbmw.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tielink {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::vector<int>> parse_blocks(const std::string& text) {
  std::vector<std::vector<int>> blocks;
  std::istringstream bs(text);
  std::string blk;
  while (std::getline(bs, blk, '|')) {
    std::vector<int> members;
    std::istringstream ms(blk);
    std::string tok;
    while (std::getline(ms, tok, ',')) {
      tok = trim(tok);
      if (!tok.empty()) members.push_back(std::stoi(tok));
    }
    if (!members.empty()) blocks.push_back(std::move(members));
  }
  return blocks;
}

LaurentPoly trace_route_L(const TiedBraidWord& w, long budget) {
  TbmwEngine engine(budget);
  auto vs = varsets::lzx();
  // L = a^{exp} Lhat
  return LaurentPoly::variable(vs, "a", exponent(w)) * invariant_via_trace(w, engine);
}

LaurentPoly bracket_from_L(const LaurentPoly& L) {
  auto mid1 = varsets::azx_A();
  auto mid2 = varsets::azc_A();
  auto out = varsets::bracket();
  LaurentPoly p = L.substitute("a", -LaurentPoly::variable(mid1, "A", 3), mid1);
  p = p.substitute("x", LaurentPoly::variable(mid2, "c", -1), mid2);
  return p.clear_and_divide("z", LaurentPoly::parse("A+1/A", out), out);
}

}  // namespace

TiedDiagram corpus_input_diagram(const std::string& input, const std::string& base_dir,
                                 std::optional<TiedBraidWord>* word_out) {
  if (word_out) *word_out = std::nullopt;
  std::string spec = trim(input);
  if (spec.rfind("braid", 0) == 0) {
    std::string rest = trim(spec.substr(5));
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw parse_error("corpus input: expected 'braid <n> : <word>'");
    int strands = std::stoi(trim(rest.substr(0, colon)));
    std::string tail = rest.substr(colon + 1);
    std::string word_text = tail, blocks_text;
    if (auto colon2 = tail.find(':'); colon2 != std::string::npos) {
      word_text = tail.substr(0, colon2);
      blocks_text = tail.substr(colon2 + 1);
    }
    TiedBraidWord w = parse_braid(trim(word_text), strands);
    if (word_out) *word_out = w;
    return TiedDiagram::closure(w, parse_blocks(blocks_text));
  }
  if (spec.rfind("pd", 0) == 0) {
    std::string path = trim(spec.substr(2));
    if (!path.empty() && path.front() != '/' && !base_dir.empty()) path = base_dir + "/" + path;
    std::ifstream in(path);
    if (!in) throw parse_error("corpus input: cannot open PD file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return TiedDiagram::from_pd_json(buf.str());
  }
  throw parse_error("corpus input: unrecognized spec '" + spec + "'");
}

InvariantReport compute_invariant(const TiedDiagram& d,
                                  const std::optional<TiedBraidWord>& word,
                                  const std::string& input_echo,
                                  const std::string& invariant,
                                  const std::string& route, long step_budget) {
  InvariantReport r;
  r.input = input_echo;
  r.invariant = invariant;
  r.route = route;
  auto t0 = std::chrono::steady_clock::now();

  SkeinContext ctx;
  LaurentPoly value;
  if (route == "trace") {
    if (!word) throw structure_error("trace route requires a braid word input");
    if (invariant == "kauffman_classical") {
      BmwEngine engine(step_budget);
      value = rename_vars(kauffman_via_trace(*word, engine), {{"l", "a"}, {"m", "z"}},
                          varsets::az());
    } else {
      LaurentPoly L = trace_route_L(*word, step_budget);
      if (invariant == "L") {
        value = L;
      } else if (invariant == "Lhat") {
        value = LaurentPoly::variable(varsets::lzx(), "a", -exponent(*word)) * L;
      } else if (invariant == "bracket") {
        value = bracket_from_L(L);
      } else if (invariant == "J" || invariant == "jones_t") {
        int w = exponent(*word);
        auto out = varsets::bracket();
        ExpVec e(out->size(), 0);
        e[*out->index("A")] = -3 * w;
        value = LaurentPoly::monomial(out, std::move(e), (w % 2 == 0) ? 1 : -1) *
                bracket_from_L(L);
        if (invariant == "jones_t")
          value = value.substitute("A", LaurentPoly::variable(varsets::jones_t(), "t4", -1),
                                   varsets::jones_t());
      } else {
        throw parse_error("unknown invariant '" + invariant + "'");
      }
    }
  } else if (route == "skein") {
    if (invariant == "L")
      value = eval_L(d, ctx);
    else if (invariant == "Lhat")
      value = eval_L_hat(d, ctx);
    else if (invariant == "bracket")
      value = eval_bracket(d, ctx);
    else if (invariant == "J")
      value = eval_J(d, ctx);
    else if (invariant == "jones_t")
      value = eval_J_t(d, ctx);
    else if (invariant == "kauffman_classical")
      value = eval_classical_kauffman(d, ctx);
    else
      throw parse_error("unknown invariant '" + invariant + "'");
  } else {
    throw parse_error("unknown route '" + route + "'");
  }

  auto t1 = std::chrono::steady_clock::now();
  r.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.value = value.to_string();
  r.variables = value.vars()->names();
  r.stats = ctx.stats();
  return r;
}

std::string to_text(const InvariantReport& r) {
  std::ostringstream os;
  os << r.invariant << "(" << r.input << ") = " << r.value << "\n";
  os << "  route: " << r.route << "   time: " << r.millis << " ms"
     << "   nodes: " << r.stats.nodes << "   memo hits: " << r.stats.memo_hits << "\n";
  return os.str();
}

std::string to_json(const InvariantReport& r) {
  nlohmann::json j;
  j["input"] = r.input;
  j["invariant"] = r.invariant;
  j["route"] = r.route;
  j["value"] = r.value;
  j["variables"] = r.variables;
  j["stats"] = {{"millis", r.millis},
                {"nodes", r.stats.nodes},
                {"memo_hits", r.stats.memo_hits}};
  return j.dump(2);
}

std::vector<CorpusRow> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open corpus file " + path);
  std::vector<CorpusRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ls(t);
    std::string f;
    while (std::getline(ls, f, '|')) fields.push_back(trim(f));
    if (fields.size() != 4)
      throw parse_error("corpus line " + std::to_string(lineno) + ": expected 4 fields");
    rows.push_back({fields[0], fields[1], fields[2], fields[3]});
  }
  return rows;
}

std::vector<CorpusOutcome> run_corpus(const std::vector<CorpusRow>& rows, bool cross_route,
                                      bool mirror_check, ExecutionPolicy policy,
                                      long step_budget, const std::string& base_dir) {
  const std::size_t n = rows.size();
  std::vector<CorpusOutcome> out(n);

  auto run_row = [&](std::size_t i) {
    const CorpusRow& row = rows[i];
    CorpusOutcome& o = out[i];
    o.name = row.name;
    if (row.status != "identified") {
      o.kind = CorpusOutcome::Kind::Skipped;
      o.detail = "pending diagram identification";
      return;
    }
    try {
      std::optional<TiedBraidWord> word;
      TiedDiagram d = corpus_input_diagram(row.input, base_dir, &word);
      auto vs = varsets::lzx();
      LaurentPoly expected = LaurentPoly::parse(row.expected, vs);
      SkeinContext ctx;
      LaurentPoly got = eval_L(d, ctx);
      if (got != expected) {
        o.kind = CorpusOutcome::Kind::Fail;
        o.detail = "skein value " + got.to_string() + " != expected " + expected.to_string();
        return;
      }
      if (cross_route) {
        if (!word) {
          o.kind = CorpusOutcome::Kind::Fail;
          o.detail = "trace cross-check requires a braid input";
          return;
        }
        if (trace_route_L(*word, step_budget) != expected) {
          o.kind = CorpusOutcome::Kind::Fail;
          o.detail = "trace route disagrees with the table value";
          return;
        }
      }
      if (mirror_check) {
        LaurentPoly mirrored = eval_L(d.mirrored(), ctx);
        LaurentPoly swapped = expected.substitute("a", LaurentPoly::variable(vs, "a", -1), vs);
        if (mirrored != swapped) {
          o.kind = CorpusOutcome::Kind::Fail;
          o.detail = "mirror value does not match a <-> 1/a";
          return;
        }
      }
      o.kind = CorpusOutcome::Kind::Pass;
    } catch (const std::exception& e) {
      o.kind = CorpusOutcome::Kind::Fail;
      o.detail = e.what();
    }
  };

  if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(n); ++i) run_row(i);
  } else {
    for (std::size_t i = 0; i < n; ++i) run_row(i);
  }
  return out;
}

}  // namespace tielink
