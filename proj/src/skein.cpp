#include "tielink/skein.hpp"

#include <mutex>

namespace tielink {

std::optional<LaurentPoly> SkeinContext::lookup(const std::string& key) {
  if (shared_) {
    std::shared_lock lk(mu_);
    auto it = memo_.find(key);
    if (it == memo_.end()) return std::nullopt;
    ++stats_.memo_hits;
    return it->second;
  }
  auto it = memo_.find(key);
  if (it == memo_.end()) return std::nullopt;
  ++stats_.memo_hits;
  return it->second;
}

void SkeinContext::store(const std::string& key, const LaurentPoly& value) {
  if (shared_) {
    std::unique_lock lk(mu_);
    memo_.try_emplace(key, value);  // first writer wins; values are idempotent
    return;
  }
  memo_.try_emplace(key, value);
}

SkeinStats SkeinContext::stats() const {
  if (shared_) {
    std::shared_lock lk(mu_);
    return stats_;
  }
  return stats_;
}

void SkeinContext::note_node() {
  if (shared_) {
    std::unique_lock lk(mu_);
    ++stats_.nodes;
    return;
  }
  ++stats_.nodes;
}

LaurentPoly eval_L(const TiedDiagram& d, SkeinContext& ctx) {
  auto vs = varsets::lzx();
  std::string key = d.canonical_key();
  if (auto hit = ctx.lookup(key)) return *hit;
  ctx.note_node();

  LaurentPoly val(vs);
  auto [dk, a_exp] = d.reduce_kinks();
  if (dk.crossing_count() != d.crossing_count()) {
    val = LaurentPoly::variable(vs, "a", a_exp) * eval_L(dk, ctx);
  } else {
    AscendingData asc = d.ascending_data();
    if (asc.deciding.empty()) {
      int c = d.component_count();
      int t = d.essential_tie_count();
      val = LaurentPoly::variable(vs, "a", asc.self_writhe) * y_poly().pow(t) *
            LaurentPoly::variable(vs, "x", -(c - t - 1));
    } else {
      int s = asc.deciding.front();
      auto z = LaurentPoly::variable(vs, "z");
      val = -eval_L(d.switch_crossing(s), ctx) +
            z * (eval_L(d.smooth(s, Smoothing::E), ctx) +
                 eval_L(d.smooth(s, Smoothing::F), ctx));
    }
  }
  ctx.store(key, val);
  return val;
}

LaurentPoly eval_L_hat(const TiedDiagram& d, SkeinContext& ctx) {
  int w = d.writhe();
  return LaurentPoly::variable(varsets::lzx(), "a", -w) * eval_L(d, ctx);
}

LaurentPoly eval_bracket(const TiedDiagram& d, SkeinContext& ctx) {
  LaurentPoly p = eval_L(d, ctx);
  auto mid1 = varsets::azx_A();
  auto mid2 = varsets::azc_A();
  auto out = varsets::bracket();
  p = p.substitute("a", -LaurentPoly::variable(mid1, "A", 3), mid1);
  p = p.substitute("x", LaurentPoly::variable(mid2, "c", -1), mid2);
  return p.clear_and_divide("z", LaurentPoly::parse("A+1/A", out), out);
}

LaurentPoly eval_J(const TiedDiagram& d, SkeinContext& ctx) {
  int w = d.writhe();
  LaurentPoly br = eval_bracket(d, ctx);
  auto out = varsets::bracket();
  ExpVec e(out->size(), 0);
  e[*out->index("A")] = -3 * w;
  Coef c = (w % 2 == 0) ? 1 : -1;  // (-A)^{-3w} = (-1)^w A^{-3w}
  return LaurentPoly::monomial(out, std::move(e), c) * br;
}

LaurentPoly eval_J_t(const TiedDiagram& d, SkeinContext& ctx) {
  auto out = varsets::jones_t();
  return eval_J(d, ctx).substitute("A", LaurentPoly::variable(out, "t4", -1), out);
}

LaurentPoly eval_classical_kauffman(const TiedDiagram& d, SkeinContext& ctx) {
  LaurentPoly p = eval_L(d.all_tied(), ctx);
  auto xi = p.vars()->index("x");
  if (p.min_exponent(*xi) != 0 || p.max_exponent(*xi) != 0)
    throw error("internal error: x survives in an all-tied evaluation: " + p.to_string());
  return p.convert(varsets::az());
}

LaurentPoly eval_L(const TiedDiagram& d) {
  SkeinContext ctx;
  return eval_L(d, ctx);
}
LaurentPoly eval_L_hat(const TiedDiagram& d) {
  SkeinContext ctx;
  return eval_L_hat(d, ctx);
}
LaurentPoly eval_bracket(const TiedDiagram& d) {
  SkeinContext ctx;
  return eval_bracket(d, ctx);
}
LaurentPoly eval_J(const TiedDiagram& d) {
  SkeinContext ctx;
  return eval_J(d, ctx);
}
LaurentPoly eval_J_t(const TiedDiagram& d) {
  SkeinContext ctx;
  return eval_J_t(d, ctx);
}
LaurentPoly eval_classical_kauffman(const TiedDiagram& d) {
  SkeinContext ctx;
  return eval_classical_kauffman(d, ctx);
}

}  // namespace tielink
