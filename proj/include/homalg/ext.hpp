#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "homalg/fpmod.hpp"

namespace homalg {

// 0 -> K -i-> E -p-> M -> 0.
struct Extension {
  ModuleMap i;
  ModuleMap p;
  const FPModule& K() const { return i.source(); }
  const FPModule& E() const { return i.target(); }
  const FPModule& M() const { return p.target(); }
};

bool is_short_exact(const ModuleMap& i, const ModuleMap& p);
// Throws std::invalid_argument unless 0 -> K -> E -> M -> 0 is exact.
Extension make_extension(ModuleMap i, ModuleMap p);
Extension split_extension(const FPModule& m, const FPModule& k);

// Resolutions are cached per (module, depth).  Each entry is computed once
// even under concurrent callers.
std::shared_ptr<const FreeResolution> cached_resolution(const FPModule& m, std::size_t depth);

// Lift of f: N -> M to the resolutions, phi_i: F_i(N) -> F_i(M) for i <= depth.
std::vector<MatZN> lift_chain_map(const ModuleMap& f, const FreeResolution& src,
                                  const FreeResolution& tgt, std::size_t depth);

struct ExtClass {
  std::size_t p = 0;
  FPModule M;
  FPModule K;
  ModuleMap cocycle;  // F_p -> K on the cached resolution of M
  Row canonical;      // cocycle reduced modulo coboundaries
  bool operator==(const ExtClass& o) const {
    return p == o.p && M == o.M && K == o.K && canonical == o.canonical;
  }
  bool is_zero() const { return vec_is_zero(canonical); }
};

// Ext^p(M, K) = ker d*_{p+1} / im d*_p computed from Hom(F_., K).
class ExtGroup {
 public:
  ExtGroup(std::size_t p, FPModule m, FPModule k);

  std::size_t degree() const { return p_; }
  const FPModule& module() const { return sq_.module; }
  const FPModule& M() const { return m_; }
  const FPModule& K() const { return k_; }
  const FreeResolution& resolution() const { return *res_; }

  // Throws std::invalid_argument if the map is not a cocycle F_p -> K.
  ExtClass make_class(const ModuleMap& cocycle) const;
  ExtClass element_class(const Row& e) const;
  Row coordinates(const ExtClass& c) const;
  ExtClass zero() const;
  ExtClass add(const ExtClass& a, const ExtClass& b) const;
  ExtClass negate(const ExtClass& a) const;
  ExtClass scale(const ExtClass& a, Int k) const;
  std::vector<ExtClass> generator_classes() const;

  // psi: F_{p-1} -> K with psi∘d_p = cocycle, when the cocycle is a coboundary.
  std::optional<ModuleMap> coboundary_preimage(const ModuleMap& cocycle) const;

 private:
  void check_class(const ExtClass& c) const;
  Row vec(const ModuleMap& cocycle) const;

  std::size_t p_;
  FPModule m_;
  FPModule k_;
  std::shared_ptr<const FreeResolution> res_;
  FPModule cochains_;      // K^{r_p}
  FPModule next_cochains_; // K^{r_{p+1}}
  MatZN dnext_;            // C^p -> C^{p+1}
  MatZN bounds_;           // coboundaries plus cochain relations, Howell form
  std::size_t prev_size_ = 0;
  Subquotient sq_;
};

// Cached per (p, M, K).
std::shared_ptr<const ExtGroup> ext_group(std::size_t p, const FPModule& m, const FPModule& k);

// g∘c for g: K -> L, and c∘phi_p for f: N -> M.
ExtClass pushout_class(const ExtClass& c, const ModuleMap& g);
ExtClass pullback_class(const ExtClass& c, const ModuleMap& f);

// Yoneda product of gamma in Ext^1(P, K) with m in Ext^q(M, P).
ExtClass yoneda_product(const ExtClass& gamma, const ExtClass& m);

ExtClass class_of_extension(const Extension& x);
Extension extension_of_class(const ExtClass& c);

Extension direct_sum_extension(const Extension& x, const Extension& y);
Extension pullback_extension(const Extension& x, const ModuleMap& f);
Extension pushout_extension(const Extension& x, const ModuleMap& g);
Extension baer_sum(const Extension& x, const Extension& y);

struct PushoutResult {
  Extension ext;
  ModuleMap middle;  // E -> E ⊕_K L
};
struct PullbackResult {
  Extension ext;
  ModuleMap middle;  // E ×_M N -> E
};
PushoutResult pushout_extension_with_map(const Extension& x, const ModuleMap& g);
PullbackResult pullback_extension_with_map(const Extension& x, const ModuleMap& f);

// Section s: M -> E with p∘s = id, or nullopt when the class is nonzero.
std::optional<ModuleMap> splitting(const Extension& x);

// Map h: E -> E' with h∘i = i' and p'∘h = p (an isomorphism by the five
// lemma), found by solving the linear conditions on Hom(E, E').
std::optional<ModuleMap> find_extension_isomorphism(const Extension& x, const Extension& y);

// Matrix of phi |-> phi∘d from Hom(F_q, K) = K^{r_q} to Hom(F_{q+1}, K), for
// d: F_{q+1} -> F_q given as an r_{q+1} x r_q matrix and k = K.ngens().
MatZN precompose_matrix(const MatZN& d, std::size_t k);

}  // namespace homalg
