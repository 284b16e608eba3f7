#pragma once

#include <memory>
#include <optional>

#include "homalg/butterfly.hpp"

namespace homalg {

// 0 -> J -> Z/N' -> Z/N -> 0 with J = N·Z/N' ≅ Z/(N'/N).
struct SquareZeroPair {
  Int nprime = 4;
  Int n = 2;
  FPModule J;  // over Z/N', generated by N
};
// Throws std::invalid_argument unless N | N' and N' | N^2.
SquareZeroPair make_square_zero_pair(Int nprime, Int n);

// J ⊗_{A'} M as a Z/N-module; generator i is j ⊗ g_i for the generator j = N of J.
FPModule j_tensor(const SquareZeroPair& pair, const FPModule& m);

// u: J ⊗ M -> K together with an A'-extension xi realizing it.
struct Deformation {
  ModuleMap u;
  Extension xi;
};

// J⊗M -> K, j⊗g |-> i^{-1}(N · lift of g).  K and M of xi must be killed by N.
ModuleMap theta(const SquareZeroPair& pair, const Extension& xi);

// Scalar restriction of the three modules and two maps.
Extension restrict_ext(const SquareZeroPair& pair, const Extension& x);

// omega: 0 -> J⊗M -> L/JL -> H/JH -> M -> 0 for a free cover H -> M over Z/N'.
struct Omega {
  TwoExtension two;     // over Z/N
  FPModule M;           // over Z/N
  FPModule H;           // free over Z/N'
  ModuleMap cover;      // H -> M, over Z/N'
  ModuleMap L_to_H;     // over Z/N'
  ModuleMap L_to_Lbar;  // L -> restricted L/JL
  ModuleMap H_to_Hbar;  // H -> restricted H/JH
};
// Default cover: the free module on M's generators.  A cover is given as an
// h x ngens(M) matrix over Z/N' whose rows span M.
Omega omega_data(const SquareZeroPair& pair, const FPModule& m);
Omega omega_data(const SquareZeroPair& pair, const FPModule& m, const MatZN& cover);
TwoExtension omega(const SquareZeroPair& pair, const FPModule& m);

// Pushout of omega along u: 0 -> K -> K ⊕_{J⊗M} L̄ -> H̄ -> M -> 0.
TwoExtension cup_omega(const SquareZeroPair& pair, const FPModule& m, const ModuleMap& u);

// theta as a group map Ext^1_{A'}(M, K) -> Hom_A(J⊗M, K).
struct ThetaMatrix {
  std::shared_ptr<const ExtGroup> ext;  // over Z/N'
  HomModule hom;                        // over Z/N
  ModuleMap map;                        // ext.module -> restricted hom.module
};
ThetaMatrix theta_matrix(const SquareZeroPair& pair, const FPModule& m, const FPModule& k);

// Solvable iff u is in the image of theta.  Also evaluates class(cup_omega(u))
// and throws std::logic_error if the two criteria disagree.
std::optional<Deformation> solve_deformation(const SquareZeroPair& pair, const FPModule& m,
                                             const ModuleMap& u);

// Builds the A'-extension from a butterfly cup_omega(u) ≃ 0̄: the kernel of
// H ⊕_L Q -> H̄.  Throws std::invalid_argument for an invalid butterfly and
// std::logic_error if theta of the result is not u.
Extension extension_from_splitting(const SquareZeroPair& pair, const FPModule& m,
                                   const ModuleMap& u, const Butterfly& b);

}  // namespace homalg
