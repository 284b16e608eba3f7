#pragma once

#include <cstddef>
#include <vector>

#include "homalg/fpmod.hpp"

namespace homalg {

struct Cover {
  FPModule M;
  std::vector<ModuleMap> family;  // N_i -> M
};

// Some single N_i receives a simultaneous lift of every tuple of elements of
// M.  Lifting the generator tuple suffices.  Throws on a target mismatch.
bool is_cover(const std::vector<ModuleMap>& family, const FPModule& m);
// Throws std::invalid_argument unless the family covers.
Cover make_cover(const FPModule& m, std::vector<ModuleMap> family);

// A^S: free on a finite set, basis element i tagged by i.
struct FreeOnSet {
  std::size_t size = 0;
  FPModule module;
};
FreeOnSet free_on_set(Int n, std::size_t s);
// A^M -> M, one basis vector per element of M.
Cover tautological_cover(const FPModule& m);

// N_{i_0} x_M ... x_M N_{i_p} with its projections to the factors.
struct FiberProduct {
  FPModule module;
  ModuleMap inclusion;                // into the direct sum of the factors
  std::vector<ModuleMap> projections;
};
FiberProduct fiber_product(const std::vector<ModuleMap>& maps);

// ⊕_{I x I} N_i x_M N_j -> ⊕_I N_i -> M -> 0; the first map is the
// difference of the two projections.
Complex baby_cech(const Cover& c);
// The same sequence for an arbitrary family.
Complex baby_cech_family(const FPModule& m, const std::vector<ModuleMap>& family);

// Tuples i_0 <= ... <= i_p in list order.
std::vector<std::vector<std::size_t>> cech_tuples(std::size_t ncover, std::size_t p);

// C_d -> ... -> C_0 -> M -> 0 with C_p = ⊕ N_{i_0..i_p} and alternating
// face sums.
struct CechComplex {
  std::vector<FPModule> terms;  // terms[p] = C_p
  Complex maps;                 // C_d -> C_{d-1} first, M -> 0 last
};
CechComplex cech_complex(const Cover& c, std::size_t d);

// T ⊕ S^p -> T x_M ... x_M T by partial sums, S = ker(T -> M).
struct ShearingIso {
  FPModule model;              // T ⊕ S^p
  FiberProduct fiber;          // p + 1 copies of T
  ModuleMap to_fiber;          // partial sums
  ModuleMap from_fiber;        // successive differences
  std::vector<ModuleMap> faces;  // d_0 .. d_p on the model, into the p-1 model
};
// Throws std::invalid_argument if f is not surjective.
ShearingIso shearing_iso(const ModuleMap& f, std::size_t p);

// Baer criterion over Z/N: every map (d) -> K extends to Z/N.
bool is_injective(const FPModule& k);

// Applies Hom(-, K) to the Čech complex and checks exactness through degree d.
// Throws std::invalid_argument if K is not injective.
bool hom_cech_exactness(const Cover& c, const FPModule& k, std::size_t d);

// Lift of a section (a, b) of A^S x_{A^R} A^T to A^{S x_R T}, built fibre by
// fibre from the coefficient matrix with z in the corner, x_i + y_i on the
// diagonal and -y_i, -x_j on the first row and column.  Pairs (s, t) are
// listed in lexicographic order.  Throws std::invalid_argument if (a, b) is
// not in the fiber product, and std::domain_error if some fibre is empty on
// one side while the other side carries a nonzero coefficient.
struct FiberProductLift {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  Row coefficients;
};
std::vector<std::pair<std::size_t, std::size_t>> fiber_pairs(const std::vector<std::size_t>& s_to_r,
                                                             const std::vector<std::size_t>& t_to_r);
FiberProductLift lift_fiber_product(Int n, const std::vector<std::size_t>& s_to_r,
                                    const std::vector<std::size_t>& t_to_r, std::size_t r_size,
                                    const Row& a, const Row& b);
// The two projections A^{S x_R T} -> A^S and -> A^T applied to coefficients.
std::pair<Row, Row> project_pairs(Int n, const FiberProductLift& x, std::size_t s_size,
                                  std::size_t t_size);

}  // namespace homalg
