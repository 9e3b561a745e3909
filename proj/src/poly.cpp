#include "tielink/poly.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace tielink {

std::shared_ptr<const VarSet> VarSet::make(std::vector<std::string> names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw varset_error("duplicate variable name: " + names[i]);
  return std::shared_ptr<const VarSet>(new VarSet(std::move(names)));
}

std::optional<std::size_t> VarSet::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

namespace varsets {
VarSetPtr lzx() {
  static VarSetPtr v = VarSet::make({"a", "z", "x"});
  return v;
}
VarSetPtr bracket() {
  static VarSetPtr v = VarSet::make({"A", "c"});
  return v;
}
VarSetPtr azx_A() {
  static VarSetPtr v = VarSet::make({"A", "z", "x"});
  return v;
}
VarSetPtr azc_A() {
  static VarSetPtr v = VarSet::make({"A", "z", "c"});
  return v;
}
VarSetPtr bracket_z() { return azx_A(); }
VarSetPtr classical() {
  static VarSetPtr v = VarSet::make({"l", "m"});
  return v;
}
VarSetPtr az() {
  static VarSetPtr v = VarSet::make({"a", "z"});
  return v;
}
VarSetPtr jones_t() {
  static VarSetPtr v = VarSet::make({"t4", "c"});
  return v;
}
}  // namespace varsets

LaurentPoly LaurentPoly::constant(VarSetPtr vs, Coef c) {
  LaurentPoly p(std::move(vs));
  if (c != 0) p.terms_[ExpVec(p.vars_->size(), 0)] = std::move(c);
  return p;
}

LaurentPoly LaurentPoly::variable(VarSetPtr vs, const std::string& name, std::int32_t k) {
  auto idx = vs->index(name);
  if (!idx) throw varset_error("unknown variable: " + name);
  LaurentPoly p(vs);
  ExpVec e(vs->size(), 0);
  e[*idx] = k;
  p.terms_[std::move(e)] = 1;
  return p;
}

LaurentPoly LaurentPoly::monomial(VarSetPtr vs, ExpVec e, Coef c) {
  if (e.size() != vs->size()) throw varset_error("exponent vector length mismatch");
  LaurentPoly p(std::move(vs));
  if (c != 0) p.terms_[std::move(e)] = std::move(c);
  return p;
}

bool LaurentPoly::is_one() const {
  if (terms_.size() != 1) return false;
  const auto& [e, c] = *terms_.begin();
  return c == 1 && std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
}

std::int32_t LaurentPoly::min_exponent(std::size_t var) const {
  bool first = true;
  std::int32_t m = 0;
  for (const auto& [e, c] : terms_) {
    m = first ? e[var] : std::min(m, e[var]);
    first = false;
  }
  return m;
}

std::int32_t LaurentPoly::max_exponent(std::size_t var) const {
  bool first = true;
  std::int32_t m = 0;
  for (const auto& [e, c] : terms_) {
    m = first ? e[var] : std::max(m, e[var]);
    first = false;
  }
  return m;
}

void LaurentPoly::check_same_vars(const LaurentPoly& o) const {
  if (!vars_ || !o.vars_ || !(*vars_ == *o.vars_))
    throw varset_error("varset mismatch between operands");
}

void LaurentPoly::add_term(const ExpVec& e, const Coef& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(vars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  check_same_vars(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  check_same_vars(o);
  LaurentPoly r(vars_);
  ExpVec e(vars_->size());
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

LaurentPoly& LaurentPoly::operator*=(const Coef& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, k] : terms_) k *= c;
  return *this;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  if (!vars_ || !o.vars_) return terms_.empty() && o.terms_.empty();
  return *vars_ == *o.vars_ && terms_ == o.terms_;
}

LaurentPoly LaurentPoly::pow(std::int64_t k) const {
  if (k < 0) return monomial_inverse().pow(-k);
  LaurentPoly r = one(vars_);
  LaurentPoly base = *this;
  while (k > 0) {
    if (k & 1) r *= base;
    base = base * base;
    k >>= 1;
  }
  return r;
}

LaurentPoly LaurentPoly::monomial_inverse() const {
  if (terms_.size() != 1)
    throw division_error("inverse requires a monomial, got " + to_string());
  const auto& [e, c] = *terms_.begin();
  if (c != 1 && c != -1)
    throw division_error("monomial coefficient " + c.str() + " is not a unit");
  ExpVec inv(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) inv[i] = -e[i];
  return monomial(vars_, std::move(inv), c);
}

LaurentPoly LaurentPoly::substitute(const std::string& var, const LaurentPoly& value,
                                    VarSetPtr out) const {
  auto vidx = vars_->index(var);
  if (!vidx) throw varset_error("substitute: unknown variable " + var);
  if (!(*value.vars() == *out)) throw varset_error("substitute: value not over output varset");

  // map the remaining variables into `out`
  std::vector<std::optional<std::size_t>> outpos(vars_->size());
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    if (i == *vidx) continue;
    outpos[i] = out->index(vars_->name(i));
  }

  std::optional<LaurentPoly> value_inv;  // computed on demand
  LaurentPoly r = zero(out);
  for (const auto& [e, c] : terms_) {
    ExpVec eo(out->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i == *vidx || e[i] == 0) continue;
      if (!outpos[i])
        throw varset_error("substitute: variable " + vars_->name(i) + " missing from output varset");
      eo[*outpos[i]] = e[i];
    }
    LaurentPoly term = monomial(out, std::move(eo), c);
    std::int32_t k = e[*vidx];
    if (k > 0) {
      term *= value.pow(k);
    } else if (k < 0) {
      if (!value_inv) {
        if (!value.is_monomial())
          throw division_error("substitute: negative power of non-monomial value in term " +
                               monomial(vars_, e, c).to_string());
        value_inv = value.monomial_inverse();
      }
      term *= value_inv->pow(-k);
    }
    r += term;
  }
  return r;
}

LaurentPoly LaurentPoly::clear_and_divide(const std::string& var, const LaurentPoly& value,
                                          VarSetPtr out) const {
  auto vidx = vars_->index(var);
  if (!vidx) throw varset_error("clear_and_divide: unknown variable " + var);
  std::int32_t k = std::max(0, -min_exponent(*vidx));
  if (k <= 0) return substitute(var, value, std::move(out));
  LaurentPoly shifted = *this * variable(vars_, var, k);
  LaurentPoly num = shifted.substitute(var, value, out);
  return num.exact_div(value.pow(k));
}

LaurentPoly LaurentPoly::exact_div(const LaurentPoly& divisor) const {
  check_same_vars(divisor);
  if (divisor.is_zero()) throw division_error("division by zero");
  if (is_zero()) return zero(vars_);

  const std::size_t nv = vars_->size();
  // shift both operands into the polynomial cone (min exponent 0 per variable)
  ExpVec sp(nv), sd(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    sp[i] = -min_exponent(i);
    sd[i] = -divisor.min_exponent(i);
  }
  LaurentPoly p = *this * monomial(vars_, sp, 1);
  LaurentPoly d = divisor * monomial(vars_, sd, 1);

  TermMap rem = p.terms_;
  LaurentPoly q(vars_);
  const auto& [ed, cd] = *d.terms_.rbegin();
  while (!rem.empty()) {
    const auto& [er, cr] = *rem.rbegin();
    ExpVec eq(nv);
    bool divisible = true;
    for (std::size_t i = 0; i < nv; ++i) {
      eq[i] = er[i] - ed[i];
      if (eq[i] < 0) divisible = false;
    }
    if (!divisible || cr % cd != 0) {
      LaurentPoly r(vars_);
      r.terms_ = rem;
      throw division_error("non-exact division, remainder " + r.to_string());
    }
    Coef cq = cr / cd;
    q.add_term(eq, cq);
    // rem -= (cq x^eq) * d
    ExpVec e(nv);
    for (const auto& [edd, cdd] : d.terms_) {
      for (std::size_t i = 0; i < nv; ++i) e[i] = eq[i] + edd[i];
      auto it = rem.find(e);
      Coef delta = cq * cdd;
      if (it == rem.end()) {
        rem.emplace(e, -delta);
      } else {
        it->second -= delta;
        if (it->second == 0) rem.erase(it);
      }
    }
  }
  // undo the shifts: result = q * x^(sd - sp)
  ExpVec shift(nv);
  for (std::size_t i = 0; i < nv; ++i) shift[i] = sd[i] - sp[i];
  return q * monomial(vars_, shift, 1);
}

LaurentPoly LaurentPoly::convert(VarSetPtr out) const {
  std::vector<std::optional<std::size_t>> outpos(vars_->size());
  for (std::size_t i = 0; i < vars_->size(); ++i) outpos[i] = out->index(vars_->name(i));
  LaurentPoly r(out);
  for (const auto& [e, c] : terms_) {
    ExpVec eo(out->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!outpos[i])
        throw varset_error("convert: variable " + vars_->name(i) + " missing from output varset");
      eo[*outpos[i]] = e[i];
    }
    r.add_term(eo, c);
  }
  return r;
}

LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
LaurentPoly operator*(const Coef& c, LaurentPoly p) { return p *= c; }

LaurentPoly y_poly() {
  auto vs = varsets::lzx();
  auto a = LaurentPoly::variable(vs, "a");
  auto ainv = LaurentPoly::variable(vs, "a", -1);
  auto zinv = LaurentPoly::variable(vs, "z", -1);
  return (a + ainv) * zinv - LaurentPoly::one(vs);
}

LaurentPoly rename_vars(const LaurentPoly& p,
                        const std::vector<std::pair<std::string, std::string>>& mapping,
                        VarSetPtr out) {
  const auto& vs = p.vars();
  std::vector<std::optional<std::size_t>> outpos(vs->size());
  for (std::size_t i = 0; i < vs->size(); ++i) {
    std::string name = vs->name(i);
    for (const auto& [from, to] : mapping)
      if (from == name) {
        name = to;
        break;
      }
    outpos[i] = out->index(name);
  }
  LaurentPoly r = LaurentPoly::zero(out);
  for (const auto& [e, c] : p.terms()) {
    ExpVec eo(out->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!outpos[i])
        throw varset_error("rename_vars: no target for variable " + vs->name(i));
      eo[*outpos[i]] += e[i];
    }
    r += LaurentPoly::monomial(out, std::move(eo), c);
  }
  return r;
}

// ---------- printing ----------

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // descending graded-lex: leading term first
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Coef ac = c < 0 ? Coef(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    bool has_var = std::any_of(e.begin(), e.end(), [](auto k) { return k != 0; });
    bool printed = false;
    if (ac != 1 || !has_var) {
      os << ac.str();
      printed = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (printed) os << " ";
      os << vars_->name(i);
      if (e[i] != 1) os << "^" << e[i];
      printed = true;
    }
  }
  return os.str();
}

// ---------- parsing ----------

namespace {

struct Lexer {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error("poly parse error at position " + std::to_string(pos) + ": " + msg);
  }
};

class Parser {
 public:
  Parser(const std::string& text, VarSetPtr vs) : lx_{text}, vs_(std::move(vs)) {}

  LaurentPoly parse() {
    LaurentPoly p = parse_expr();
    if (!lx_.eof()) lx_.fail("trailing input");
    return p;
  }

 private:
  Lexer lx_;
  VarSetPtr vs_;

  LaurentPoly parse_expr() {
    LaurentPoly acc = LaurentPoly::zero(vs_);
    bool neg = false;
    char c = lx_.peek();
    if (c == '+' || c == '-') {
      neg = c == '-';
      ++lx_.pos;
    }
    acc += sign(parse_term(), neg);
    while (!lx_.eof()) {
      c = lx_.peek();
      if (c != '+' && c != '-') break;
      ++lx_.pos;
      acc += sign(parse_term(), c == '-');
    }
    return acc;
  }

  static LaurentPoly sign(LaurentPoly p, bool neg) { return neg ? -p : p; }

  // term := factor ( factor | '*' factor | '/' factor )*
  LaurentPoly parse_term() {
    LaurentPoly p = parse_factor();
    while (!lx_.eof()) {
      char c = lx_.peek();
      if (c == '/') {
        ++lx_.pos;
        LaurentPoly d = parse_factor();
        // divisors in the input grammar are invertible monomials
        p *= d.monomial_inverse();
      } else if (c == '*') {
        ++lx_.pos;
        p *= parse_factor();
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '(') {
        p *= parse_factor();
      } else {
        break;
      }
    }
    return p;
  }

  LaurentPoly parse_factor() {
    char c = lx_.peek();
    if (c == '(') {
      ++lx_.pos;
      LaurentPoly p = parse_expr();
      if (lx_.peek() != ')') lx_.fail("expected ')'");
      ++lx_.pos;
      return maybe_pow(std::move(p));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return maybe_pow(parse_int_factor());
    if (std::isalpha(static_cast<unsigned char>(c))) return maybe_pow(parse_var_factor());
    lx_.fail("expected factor");
  }

  LaurentPoly parse_int_factor() {
    std::string digits;
    while (lx_.pos < lx_.s.size() && std::isdigit(static_cast<unsigned char>(lx_.s[lx_.pos])))
      digits += lx_.s[lx_.pos++];
    return LaurentPoly::constant(vs_, Coef(digits));
  }

  LaurentPoly parse_var_factor() {
    std::string name;
    while (lx_.pos < lx_.s.size() &&
           (std::isalnum(static_cast<unsigned char>(lx_.s[lx_.pos])) || lx_.s[lx_.pos] == '_'))
      name += lx_.s[lx_.pos++];
    if (!vs_->index(name)) lx_.fail("unknown variable '" + name + "'");
    return LaurentPoly::variable(vs_, name);
  }

  LaurentPoly maybe_pow(LaurentPoly p) {
    if (lx_.peek() != '^') return p;
    ++lx_.pos;
    bool neg = false;
    char c = lx_.peek();
    if (c == '+' || c == '-') {
      neg = c == '-';
      ++lx_.pos;
    }
    if (!std::isdigit(static_cast<unsigned char>(lx_.peek()))) lx_.fail("expected exponent");
    long k = 0;
    while (lx_.pos < lx_.s.size() && std::isdigit(static_cast<unsigned char>(lx_.s[lx_.pos])))
      k = k * 10 + (lx_.s[lx_.pos++] - '0');
    return p.pow(neg ? -k : k);
  }
};

}  // namespace

LaurentPoly LaurentPoly::parse(const std::string& text, VarSetPtr vs) {
  Lexer probe{text};
  if (probe.eof()) throw parse_error("poly parse error: empty input");
  return Parser(text, std::move(vs)).parse();
}

}  // namespace tielink
