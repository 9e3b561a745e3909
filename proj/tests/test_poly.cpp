#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tielink/poly.hpp"

using namespace tielink;

namespace {

LaurentPoly P(const std::string& s) { return LaurentPoly::parse(s, varsets::lzx()); }

LaurentPoly random_poly(std::mt19937_64& rng, VarSetPtr vs, int max_terms = 5) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> expo(-3, 3);
  std::uniform_int_distribution<int> coef(-9, 9);
  LaurentPoly p = LaurentPoly::zero(vs);
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    ExpVec e(vs->size());
    for (auto& k : e) k = expo(rng);
    p += LaurentPoly::monomial(vs, e, coef(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("additive inverse and disjoint supports") {
  auto a = P("a");
  CHECK((a + (-a)).is_zero());
  CHECK(P("1") + P("1/x") == P("1+1/x"));
}

TEST_CASE("y + 1") {
  auto y = y_poly();
  CHECK(y == P("(a+1/a)/z-1"));
  CHECK(y + P("1") == P("a/z + 1/(a z)"));
}

TEST_CASE("products") {
  CHECK(P("a") * P("a^-1") == P("1"));
  CHECK(P("a+1/a") * P("1/z") == P("a/z + 1/(a z)"));
  CHECK(P("z") * y_poly() == P("a + 1/a - z"));
}

TEST_CASE("substitute with monomial values") {
  auto mid = varsets::azx_A();
  auto mA3 = -LaurentPoly::variable(mid, "A", 3);
  auto s = P("a+1/a").substitute("a", mA3, mid);
  CHECK(s == LaurentPoly::parse("-A^3-A^-3", mid));

  auto out = varsets::azc_A();
  auto cinv = LaurentPoly::variable(out, "c", -1);
  auto s2 = LaurentPoly::parse("1/x", varsets::azx_A()).substitute("x", cinv, out);
  CHECK(s2 == LaurentPoly::parse("c", out));
}

TEST_CASE("substitute rejects negative power of non-monomial") {
  auto vs = varsets::lzx();
  auto val = P("a+1");
  CHECK_THROWS_AS(P("1/z").substitute("z", val, vs), division_error);
}

TEST_CASE("clear_and_divide on y reproduces the bracket circle value") {
  // y with a := -A^3 then z := A + A^-1 gives -(A^2 + A^-2)
  auto mid = varsets::azx_A();
  auto y_mid = y_poly().substitute("a", -LaurentPoly::variable(mid, "A", 3), mid);
  auto out = varsets::bracket();
  auto zval = LaurentPoly::parse("A+1/A", out);
  auto r = y_mid.clear_and_divide("z", zval, out);
  CHECK(r == LaurentPoly::parse("-A^2-A^-2", out));
}

TEST_CASE("clear_and_divide trivial cases") {
  auto out = varsets::bracket();
  auto zval = LaurentPoly::parse("A+1/A", out);
  auto one = LaurentPoly::parse("1", varsets::azx_A());
  CHECK(one.clear_and_divide("z", zval, out) == LaurentPoly::one(out));
  auto z2 = LaurentPoly::parse("z^2", varsets::azx_A());
  CHECK(z2.clear_and_divide("z", zval, out) == LaurentPoly::parse("A^2+2+1/A^2", out));
}

TEST_CASE("clear_and_divide agrees with direct substitution when both defined") {
  auto out = varsets::bracket();
  auto zval = LaurentPoly::parse("A^2", out);  // invertible monomial: both paths defined
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto p = random_poly(rng, varsets::azx_A());
    // express p's A and x over the output alphabet first
    auto q = p.substitute("x", LaurentPoly::variable(varsets::azc_A(), "c", -1), varsets::azc_A());
    CHECK(q.clear_and_divide("z", zval, out) == q.substitute("z", zval, out));
  }
}

TEST_CASE("non-exact division carries the remainder") {
  auto vs = varsets::az();
  auto p = LaurentPoly::parse("a^2+1", vs);
  auto d = LaurentPoly::parse("a+1", vs);
  CHECK_THROWS_AS(p.exact_div(d), division_error);
  CHECK(LaurentPoly::parse("a^2-1", vs).exact_div(d) == LaurentPoly::parse("a-1", vs));
  // Laurent shifts divide exactly
  CHECK(LaurentPoly::parse("a^-2 - z^2", vs)
            .exact_div(LaurentPoly::parse("a^-1-z", vs)) ==
        LaurentPoly::parse("a^-1+z", vs));
}

TEST_CASE("appendix grammar fragments") {
  CHECK(P("1/x") == LaurentPoly::variable(varsets::lzx(), "x", -1));
  CHECK(P("( -a^2-1+a z+z^2 a^2+z^2 ) /( a z )") ==
        P("-a/z - 1/(a z) + 1 + z a + z/a"));
  CHECK(P("-a^2-1+a z") == P("a z") - P("a^2") - P("1"));
}

TEST_CASE("parse/to_string round trip on random polynomials") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    auto p = random_poly(rng, varsets::lzx());
    CHECK(LaurentPoly::parse(p.to_string(), varsets::lzx()) == p);
  }
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto p = random_poly(rng, varsets::lzx());
    auto q = random_poly(rng, varsets::lzx());
    auto r = random_poly(rng, varsets::lzx());
    CHECK(p + q == q + p);
    CHECK(p * q == q * p);
    CHECK((p + q) + r == p + (q + r));
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
  }
}

TEST_CASE("no zero coefficients survive any operation") {
  std::mt19937_64 rng(11);
  auto has_zero = [](const LaurentPoly& p) {
    for (const auto& [e, c] : p.terms())
      if (c == 0) return true;
    return false;
  };
  for (int i = 0; i < 100; ++i) {
    auto p = random_poly(rng, varsets::lzx());
    auto q = random_poly(rng, varsets::lzx());
    CHECK(!has_zero(p + q));
    CHECK(!has_zero(p - q));
    CHECK(!has_zero(p * q));
    CHECK(!has_zero(p - p));
  }
}

TEST_CASE("varset mismatch is rejected") {
  auto p = P("a");
  auto q = LaurentPoly::parse("l", varsets::classical());
  CHECK_THROWS_AS(p + q, varset_error);
  CHECK_THROWS_AS(p * q, varset_error);
}

TEST_CASE("malformed input reports position") {
  CHECK_THROWS_AS(P("a + + z"), parse_error);
  CHECK_THROWS_AS(P("q"), parse_error);
  CHECK_THROWS_AS(P("(a"), parse_error);
  CHECK_THROWS_AS(P(""), parse_error);
}
