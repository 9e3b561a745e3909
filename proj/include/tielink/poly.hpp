#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tielink {

using Coef = boost::multiprecision::cpp_int;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parse_error : error {
  using error::error;
};
struct varset_error : error {
  using error::error;
};
struct division_error : error {
  using error::error;
};
struct structure_error : error {
  using error::error;
};
struct rewrite_error : error {
  using error::error;
};

/// Ordered set of variable names; polynomials are built over a fixed VarSet.
class VarSet {
 public:
  static std::shared_ptr<const VarSet> make(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index(const std::string& name) const;

  bool operator==(const VarSet& o) const { return names_ == o.names_; }

 private:
  explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {}
  std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

// canned variable alphabets
namespace varsets {
VarSetPtr lzx();        // a, z, x
VarSetPtr bracket();    // A, c
VarSetPtr bracket_z();  // A, z, x and A, z, c intermediates
VarSetPtr azx_A();      // A, z, x
VarSetPtr azc_A();      // A, z, c
VarSetPtr classical();  // l, m
VarSetPtr az();         // a, z
VarSetPtr jones_t();    // t4 (= t^{1/4}), c
}  // namespace varsets

using ExpVec = std::vector<std::int32_t>;

// graded lexicographic: total degree first, then lex on the exponent vector
struct GradedLexLess {
  bool operator()(const ExpVec& a, const ExpVec& b) const {
    long da = std::accumulate(a.begin(), a.end(), 0L);
    long db = std::accumulate(b.begin(), b.end(), 0L);
    if (da != db) return da < db;
    return a < b;
  }
};

/// Sparse exact-integer multivariate Laurent polynomial in canonical form:
/// no zero coefficients are stored, term map equality is value equality.
class LaurentPoly {
 public:
  using TermMap = std::map<ExpVec, Coef, GradedLexLess>;

  LaurentPoly() = default;
  explicit LaurentPoly(VarSetPtr vs) : vars_(std::move(vs)) {}

  static LaurentPoly zero(VarSetPtr vs) { return LaurentPoly(std::move(vs)); }
  static LaurentPoly constant(VarSetPtr vs, Coef c);
  static LaurentPoly one(VarSetPtr vs) { return constant(std::move(vs), 1); }
  static LaurentPoly variable(VarSetPtr vs, const std::string& name, std::int32_t k = 1);
  static LaurentPoly monomial(VarSetPtr vs, ExpVec e, Coef c);

  const VarSetPtr& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_monomial() const { return terms_.size() == 1; }
  std::size_t term_count() const { return terms_.size(); }

  // exponent range of one variable across all terms; 0 if the variable is absent
  std::int32_t min_exponent(std::size_t var) const;
  std::int32_t max_exponent(std::size_t var) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  LaurentPoly& operator*=(const Coef& c);

  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  /// p^k for k >= 0 (k < 0 only for invertible monomials).
  LaurentPoly pow(std::int64_t k) const;

  /// Inverse of a +-1-coefficient monomial; throws division_error otherwise.
  LaurentPoly monomial_inverse() const;

  /// Replace var^k by value^k for every occurrence; negative k requires an
  /// invertible monomial value. Result is expressed over `out`.
  LaurentPoly substitute(const std::string& var, const LaurentPoly& value,
                         VarSetPtr out) const;

  /// Substitute a non-invertible value into a variable that may occur with
  /// negative exponents: multiply by var^k first, substitute, then divide
  /// exactly by value^k. Throws division_error if the division is not exact.
  LaurentPoly clear_and_divide(const std::string& var, const LaurentPoly& value,
                               VarSetPtr out) const;

  /// Exact division in the Laurent ring; throws division_error with the
  /// remainder when not exact.
  LaurentPoly exact_div(const LaurentPoly& divisor) const;

  /// Re-express over another varset (maps variables by name; every used
  /// variable must exist in `out`).
  LaurentPoly convert(VarSetPtr out) const;

  std::string to_string() const;
  static LaurentPoly parse(const std::string& text, VarSetPtr vs);

 private:
  void add_term(const ExpVec& e, const Coef& c);
  void check_same_vars(const LaurentPoly& o) const;

  VarSetPtr vars_;
  TermMap terms_;
};

LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b);
LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b);
LaurentPoly operator*(const Coef& c, LaurentPoly p);

/// y = (a + 1/a)/z - 1, the tied circle factor over (a, z, x).
LaurentPoly y_poly();

/// Rebuild a polynomial over another varset, renaming variables by the given
/// (from, to) pairs; unlisted variables keep their names.
LaurentPoly rename_vars(const LaurentPoly& p,
                        const std::vector<std::pair<std::string, std::string>>& mapping,
                        VarSetPtr out);

}  // namespace tielink
