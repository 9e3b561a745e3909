#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tielink/report.hpp"
#include "tielink/tbmw.hpp"

using namespace tielink;

namespace {

long step_budget_from_env() {
  if (const char* s = std::getenv("TIELINK_STEP_BUDGET")) {
    long v = std::atol(s);
    if (v > 0) return v;
  }
  return 1'000'000;
}

struct InputFlags {
  std::string braid;
  int strands = 0;
  std::string partition;
  std::string pd_file;
  bool braid_given = false;
};

std::vector<std::vector<int>> parse_blocks(const std::string& text) {
  std::vector<std::vector<int>> blocks;
  std::istringstream bs(text);
  std::string blk;
  while (std::getline(bs, blk, '|')) {
    std::vector<int> members;
    std::istringstream ms(blk);
    std::string tok;
    while (std::getline(ms, tok, ',')) {
      if (!tok.empty()) members.push_back(std::stoi(tok));
    }
    if (!members.empty()) blocks.push_back(std::move(members));
  }
  return blocks;
}

TiedDiagram build_input(const InputFlags& in, std::optional<TiedBraidWord>* word,
                        std::string* echo) {
  if (!in.pd_file.empty()) {
    if (in.braid_given) throw parse_error("give either --braid or --pd, not both");
    std::ifstream f(in.pd_file);
    if (!f) throw parse_error("cannot open PD file " + in.pd_file);
    std::stringstream buf;
    buf << f.rdbuf();
    *echo = "pd:" + in.pd_file;
    return TiedDiagram::from_pd_json(buf.str());
  }
  if (!in.braid_given) throw parse_error("an input is required: --braid or --pd");
  TiedBraidWord w = parse_braid(in.braid, in.strands);
  *word = w;
  *echo = "braid[" + std::to_string(w.strands) + "]: " + (in.braid.empty() ? "(empty)" : in.braid);
  auto blocks = parse_blocks(in.partition);
  if (!blocks.empty()) *echo += " partition " + in.partition;
  return TiedDiagram::closure(w, blocks);
}

int run_compute(const InputFlags& in, const std::string& invariant, const std::string& route,
                const std::string& format) {
  std::optional<TiedBraidWord> word;
  std::string echo;
  TiedDiagram d = build_input(in, &word, &echo);
  InvariantReport r = compute_invariant(d, word, echo, invariant, route, step_budget_from_env());
  std::cout << (format == "json" ? to_json(r) + "\n" : to_text(r));
  return 0;
}

int run_compare(const InputFlags& a, const InputFlags& b, std::vector<std::string> invariants,
                const std::string& format) {
  if (invariants.empty()) invariants = {"L", "Lhat", "bracket", "J"};
  std::optional<TiedBraidWord> wa, wb;
  std::string ea, eb;
  TiedDiagram da = build_input(a, &wa, &ea);
  TiedDiagram db = build_input(b, &wb, &eb);
  long budget = step_budget_from_env();

  bool any_diff = false;
  nlohmann::json out;
  out["left"] = ea;
  out["right"] = eb;
  auto& list = out["invariants"];
  for (const auto& inv : invariants) {
    InvariantReport ra = compute_invariant(da, wa, ea, inv, "skein", budget);
    InvariantReport rb = compute_invariant(db, wb, eb, inv, "skein", budget);
    auto vs = VarSet::make(ra.variables);
    LaurentPoly pa = LaurentPoly::parse(ra.value, vs);
    LaurentPoly pb = LaurentPoly::parse(rb.value, vs);
    LaurentPoly diff = pa - pb;
    bool distinguished = !diff.is_zero();
    any_diff = any_diff || distinguished;
    if (format == "json") {
      list.push_back({{"invariant", inv},
                      {"left", ra.value},
                      {"right", rb.value},
                      {"difference", diff.to_string()},
                      {"distinguished", distinguished}});
    } else {
      std::cout << inv << ":\n  left  = " << ra.value << "\n  right = " << rb.value
                << "\n  difference = " << diff.to_string() << "\n  => "
                << (distinguished ? "distinguished" : "not distinguished") << "\n";
    }
  }
  if (format == "json") {
    out["distinguished"] = any_diff;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "overall: " << (any_diff ? "distinguished" : "not distinguished") << "\n";
  }
  return 0;
}

int run_verify(const std::string& corpus_path, bool cross_route, bool mirror, bool serial) {
  auto rows = load_corpus(corpus_path);
  std::string base_dir = std::filesystem::path(corpus_path).parent_path().string();
  auto outcomes = run_corpus(rows, cross_route, mirror,
                             serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel,
                             step_budget_from_env(), base_dir);
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& o : outcomes) {
    switch (o.kind) {
      case CorpusOutcome::Kind::Pass:
        ++passed;
        std::cout << "PASS    " << o.name << "\n";
        break;
      case CorpusOutcome::Kind::Skipped:
        ++skipped;
        std::cout << "SKIPPED " << o.name << " (" << o.detail << ")\n";
        break;
      case CorpusOutcome::Kind::Fail:
        ++failed;
        std::cout << "FAIL    " << o.name << ": " << o.detail << "\n";
        break;
    }
  }
  std::cout << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariants of tied links by skein recursion and Markov traces"};
  app.require_subcommand(1);

  InputFlags in, in2;
  std::string invariant = "L", route = "skein", format = "text";
  std::vector<std::string> compare_invariants;
  std::string corpus_path;
  bool cross_route = false, mirror = false, serial = false;

  auto* compute = app.add_subcommand("compute", "compute one invariant of one input");
  compute->add_option("--braid", in.braid, "tied braid word, tokens s<i> -s<i> e<i>")
      ->expected(0, 1);
  compute->add_option("--strands", in.strands, "strand count (default: inferred)");
  compute->add_option("--partition", in.partition, "extra tie blocks, e.g. 1,2|3");
  compute->add_option("--pd", in.pd_file, "PD diagram file (JSON)");
  compute->add_option("--invariant", invariant,
                      "one of L, Lhat, bracket, J, jones_t, kauffman_classical");
  compute->add_option("--route", route, "skein (default) or trace");
  compute->add_option("--format", format, "text (default) or json");

  auto* compare = app.add_subcommand("compare", "compare invariants of two inputs");
  compare->add_option("--braid", in.braid, "first braid word")->expected(0, 1);
  compare->add_option("--strands", in.strands, "first strand count");
  compare->add_option("--partition", in.partition, "first partition blocks");
  compare->add_option("--pd", in.pd_file, "first PD file");
  compare->add_option("--braid2", in2.braid, "second braid word")->expected(0, 1);
  compare->add_option("--strands2", in2.strands, "second strand count");
  compare->add_option("--partition2", in2.partition, "second partition blocks");
  compare->add_option("--pd2", in2.pd_file, "second PD file");
  compare->add_option("--invariant", compare_invariants, "invariants to compare (repeatable)");
  compare->add_option("--format", format, "text (default) or json");

  auto* verify = app.add_subcommand("verify", "run a regression corpus");
  verify->add_option("--corpus", corpus_path, "corpus file")->required();
  verify->add_flag("--route-cross-check", cross_route,
                   "also recompute identified rows through the trace route");
  verify->add_flag("--mirror", mirror, "also check mirrored inputs under a <-> 1/a");
  verify->add_flag("--serial", serial, "evaluate rows serially");

  try {
    app.parse(argc, argv);
    in.braid_given = compute->count("--braid") > 0 || compare->count("--braid") > 0;
    in2.braid_given = compare->count("--braid2") > 0;
    if (compute->parsed()) return run_compute(in, invariant, route, format);
    if (compare->parsed()) return run_compare(in, in2, compare_invariants, format);
    if (verify->parsed()) return run_verify(corpus_path, cross_route, mirror, serial);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const varset_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const structure_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    // internal invariant violations: non-exact division, stuck rewriting
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
