#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "homalg/ext.hpp"

namespace homalg {

// 0 -> K -a-> X -b-> Y -c-> M -> 0.
struct TwoExtension {
  ModuleMap a;
  ModuleMap b;
  ModuleMap c;
  const FPModule& K() const { return a.source(); }
  const FPModule& X() const { return a.target(); }
  const FPModule& Y() const { return b.target(); }
  const FPModule& M() const { return c.target(); }
  // P = coker(a), with X -> P and the inclusion P -> Y.
  const ModuleMap& to_P() const;
  const ModuleMap& P_to_Y() const;
  const FPModule& P() const { return to_P().target(); }
  bool operator==(const TwoExtension& o) const;

 private:
  friend TwoExtension make_two_extension(ModuleMap, ModuleMap, ModuleMap);
  std::shared_ptr<const std::pair<ModuleMap, ModuleMap>> p_;
};

// Throws std::invalid_argument unless the sequence is exact.
TwoExtension make_two_extension(ModuleMap a, ModuleMap b, ModuleMap c);
// 0 -> K = K -0-> M = M -> 0.
TwoExtension trivial_two_extension(const FPModule& m, const FPModule& k);
bool is_trivial_two_extension(const TwoExtension& t);

// Concatenation through P of 0->K->X->P->0 and 0->P->Y->M->0.
TwoExtension yoneda_splice(const Extension& gamma, const Extension& m);
// The pieces gamma, m with t = splice(gamma, m).
std::pair<Extension, Extension> splice_pieces(const TwoExtension& t);

ExtClass class_of_two_extension(const TwoExtension& t);

// Y replaced by Y x_M N.
TwoExtension restrict_two_extension(const TwoExtension& t, const ModuleMap& f);
// X replaced by X ⊕_K L.
TwoExtension pushout_two_extension(const TwoExtension& t, const ModuleMap& g);
TwoExtension baer_sum_two(const TwoExtension& x, const TwoExtension& y);

// Morphism of complexes xi -> eta that is the identity on K.
struct ChainMap {
  TwoExtension source;
  TwoExtension target;
  ModuleMap fX;
  ModuleMap fY;
  ModuleMap fM;
};
// Throws std::invalid_argument if the squares do not commute.
ChainMap make_chain_map(TwoExtension s, TwoExtension t, ModuleMap fX, ModuleMap fY, ModuleMap fM);

// Wings: nw X->Q, sw X'->Q, ne Q->Y, se Q->Y'.
struct Butterfly {
  TwoExtension source;
  TwoExtension target;
  ModuleMap nw;
  ModuleMap sw;
  ModuleMap ne;
  ModuleMap se;
  const FPModule& Q() const { return ne.source(); }
};

struct ButterflyCheck {
  bool valid = true;
  std::string failure;
  explicit operator bool() const { return valid; }
};
// Diagonals short exact, North/West/South diamonds commute.  Throws on a
// modulus mismatch.
ButterflyCheck validate_butterfly(const Butterfly& b);
// For a butterfly xi ≃ eta over f: N -> M.  The NW-SE diagonal is checked
// as 0 -> X -> Q -> Y' x_M N -> 0 and the base map must be -f.
ButterflyCheck validate_butterfly_over(const Butterfly& b, const ModuleMap& f);

// The map alpha: M -> M' with alpha∘c∘ne = c'∘se.  With the minus in the
// induced projection, a chain map over f on M gives alpha = -f.
ModuleMap base_map(const Butterfly& b);
// Valid and alpha = -id.
bool is_over_identity(const Butterfly& b);

// Q = X' ⊕ Y, nw = (fX, b), sw = incl, ne = proj, se = b' - fY.
Butterfly induced_butterfly(const ChainMap& f);
Butterfly identity_butterfly(const TwoExtension& t);
// Cokernel of X' -> Q x_{Y'} Q'.  The X'' wing and the map to Y'' carry the
// minus sign; without it the West diamond fails once 2 is a nonunit on K.
Butterfly compose(const Butterfly& b1, const Butterfly& b2);
Butterfly invert(const Butterfly& b);

// phi: Q -> Q' commuting with all four wings (a linear solve on Hom(Q, Q')).
std::optional<ModuleMap> find_two_isomorphism(const Butterfly& b1, const Butterfly& b2);

// A section of ne gives a chain map source -> target with the same butterfly.
std::optional<ChainMap> chain_map_of(const Butterfly& b);

// Wing data of a butterfly xi ≃ 0̄: the extension 0 -> X -> Q -> M -> 0
// lifting 0 -> P -> Y -> M -> 0.
struct SplittingData {
  Extension lift;
  ModuleMap to_Y;  // Q -> Y, restricting to b on X
};
// Throws std::invalid_argument unless the target is 0̄.
std::optional<SplittingData> is_split_butterfly(const Butterfly& b);
// A butterfly xi ≃ 0̄, built when the class of xi vanishes.
std::optional<Butterfly> find_splitting_butterfly(const TwoExtension& t);

// Butterfly xi ≃ eta with Q = (X' ⊕_K X) ⊕ M, for Y and Y' split over M.
std::optional<Butterfly> local_existence_butterfly(const TwoExtension& xi, const TwoExtension& eta);

// eta|_N ≃ eta over f: N -> M, induced by the projection Y x_M N -> Y.
Butterfly restriction_butterfly(const TwoExtension& eta, const ModuleMap& f);
// For b: xi ≃ eta|_N, the butterfly xi ≃ eta with middle (Q ⊕ X')/X'.
Butterfly restriction_composite(const Butterfly& b, const TwoExtension& eta, const ModuleMap& f);

}  // namespace homalg
