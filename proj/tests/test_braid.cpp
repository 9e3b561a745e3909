#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tielink/braid.hpp"

using namespace tielink;

TEST_CASE("exponent") {
  CHECK(exponent(parse_braid("s1 s1 s1", 2)) == 3);
  CHECK(exponent(parse_braid("e1", 2)) == 0);
  CHECK(exponent(parse_braid("s1 -s2", 3)) == 0);
}

TEST_CASE("all_tied") {
  CHECK(all_tied(parse_braid("", 3)) == parse_braid("e1 e2", 3));
  CHECK(all_tied(parse_braid("s1 s1 s1", 2)) == parse_braid("e1 s1 s1 s1", 2));

  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    TiedBraidWord w;
    w.strands = 2 + int(rng() % 3);
    int len = int(rng() % 7);
    for (int j = 0; j < len; ++j) {
      int idx = 1 + int(rng() % (w.strands - 1));
      int k = int(rng() % 3);
      w.letters.push_back({k == 0   ? BraidGen::Sigma
                           : k == 1 ? BraidGen::SigmaInv
                                    : BraidGen::Eta,
                           idx});
    }
    CHECK(exponent(all_tied(w)) == exponent(w));
  }
}

TEST_CASE("conjugate and stabilize") {
  auto s1 = parse_braid("s1", 2);
  CHECK(conjugate(s1, s1) == parse_braid("s1 s1 -s1", 2));
  CHECK(stabilize(parse_braid("s1", 2), +1) == parse_braid("s1 s2", 3));
  CHECK(stabilize(parse_braid("", 1), -1) == parse_braid("-s1", 2));
  // eta is self-inverse under conjugation
  CHECK(conjugate(s1, parse_braid("e1", 2)) == parse_braid("e1 s1 e1", 2));
}

TEST_CASE("closure component count is the permutation cycle count") {
  CHECK(closure_component_count(parse_braid("", 3)) == 3);
  CHECK(closure_component_count(parse_braid("s1", 2)) == 1);
  CHECK(closure_component_count(parse_braid("s1", 3)) == 2);
  CHECK(closure_component_count(parse_braid("s1 s1", 2)) == 2);
}

TEST_CASE("word grammar") {
  auto w = parse_braid("s3 -s1 e2");
  CHECK(w.strands == 4);
  CHECK(w.letters.size() == 3);
  CHECK(w.letters[0] == BraidLetter{BraidGen::Sigma, 3});
  CHECK(w.letters[1] == BraidLetter{BraidGen::SigmaInv, 1});
  CHECK(w.letters[2] == BraidLetter{BraidGen::Eta, 2});
  CHECK(parse_braid(to_string(w), 4) == w);

  CHECK(parse_braid("", 1).strands == 1);
  CHECK_THROWS_AS(parse_braid("x1", 2), parse_error);
  CHECK_THROWS_AS(parse_braid("-e1", 2), parse_error);
  CHECK_THROWS_AS(parse_braid("s0", 2), parse_error);
  CHECK_THROWS_AS(parse_braid("s2", 2), parse_error);
}

TEST_CASE("partition") {
  Partition p(4);
  CHECK(p.block_count() == 4);
  p.merge(1, 3);
  CHECK(p.block_count() == 3);
  CHECK(p.same_block(1, 3));
  p.merge(3, 0);
  CHECK(p.same_block(0, 1));
  CHECK(p.blocks() == std::vector<std::vector<int>>{{0, 1, 3}, {2}});
}
