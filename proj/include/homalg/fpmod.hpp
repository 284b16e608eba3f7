#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "homalg/zn_matrix.hpp"

namespace homalg {

inline constexpr std::size_t kDefaultElementCap = 4096;

// Finitely presented module over Z/N: (Z/N)^ngens modulo the row span of the
// relations, which are kept in Howell form.
class FPModule {
 public:
  FPModule() : FPModule(2, 0) {}
  FPModule(Int n, std::size_t ngens);
  FPModule(Int n, std::size_t ngens, const MatZN& relations);

  static FPModule free(Int n, std::size_t rank) { return FPModule(n, rank); }
  static FPModule zero(Int n) { return FPModule(n, 0); }
  // Z/d as a Z/N-module; d must divide N.
  static FPModule cyclic(Int n, Int d);

  Int modulus() const { return n_; }
  std::size_t ngens() const { return ngens_; }
  const MatZN& relations() const { return rel_; }

  // Canonical coset representative.
  Row reduce(const Row& x) const;
  bool is_zero_element(const Row& x) const;
  bool same_element(const Row& a, const Row& b) const;
  Row unit_vector(std::size_t i) const;

  // Group order; throws std::overflow_error above 2^62.
  Int order() const;
  bool is_zero() const;
  bool is_free() const { return rel_.rows() == 0; }

  // All canonical representatives; throws std::length_error if order > cap.
  std::vector<Row> elements(std::size_t cap = kDefaultElementCap) const;

  bool operator==(const FPModule& o) const {
    return n_ == o.n_ && ngens_ == o.ngens_ && rel_ == o.rel_;
  }

  std::string to_string() const;

 private:
  Int n_;
  std::size_t ngens_;
  MatZN rel_;
};

// Morphism given by the images of the source generators (one row each).
class ModuleMap {
 public:
  ModuleMap() = default;
  // Throws std::invalid_argument if not well defined.
  ModuleMap(FPModule source, FPModule target, MatZN matrix);

  static ModuleMap identity(const FPModule& m);
  static ModuleMap zero(const FPModule& s, const FPModule& t);

  const FPModule& source() const { return src_; }
  const FPModule& target() const { return tgt_; }
  const MatZN& matrix() const { return mat_; }

  Row apply(const Row& x) const;
  bool equals(const ModuleMap& o) const;
  bool is_zero() const;

  ModuleMap operator+(const ModuleMap& o) const;
  ModuleMap operator-(const ModuleMap& o) const;
  ModuleMap operator-() const;
  ModuleMap scaled(Int k) const;

 private:
  FPModule src_;
  FPModule tgt_;
  MatZN mat_;
};

// g after f.
ModuleMap compose(const ModuleMap& g, const ModuleMap& f);

bool is_well_defined(const FPModule& s, const FPModule& t, const MatZN& matrix);
bool is_injective(const ModuleMap& f);
bool is_surjective(const ModuleMap& f);
bool is_isomorphism(const ModuleMap& f);

// Element x of target with x in image; returns a preimage or nullopt.
std::optional<Row> preimage(const ModuleMap& f, const Row& y);

// h with along∘h = f, solving generator by generator.  Returns nullopt if some
// generator does not lift or the lift is not well defined.
std::optional<ModuleMap> lift(const ModuleMap& f, const ModuleMap& along);

// h with h∘along = f, for along surjective; nullopt if f does not factor.
std::optional<ModuleMap> factor_through(const ModuleMap& f, const ModuleMap& along);

struct KernelResult {
  FPModule module;
  ModuleMap inclusion;
};
struct CokernelResult {
  FPModule module;
  ModuleMap projection;
};
struct ImageResult {
  FPModule module;
  ModuleMap corestriction;  // source -> image
  ModuleMap inclusion;      // image -> target
};

KernelResult kernel_module(const ModuleMap& f);
CokernelResult cokernel_module(const ModuleMap& f);
ImageResult image_module(const ModuleMap& f);

struct DirectSum {
  FPModule module;
  std::vector<ModuleMap> injections;
  std::vector<ModuleMap> projections;
};
DirectSum direct_sum(const std::vector<FPModule>& ms);

// (f_1, ..., f_k): A -> B_1 + ... + B_k and [g_1 ... g_k]: A_1 + ... + A_k -> B.
ModuleMap map_into_sum(const DirectSum& target, const std::vector<ModuleMap>& fs);
ModuleMap map_out_of_sum(const DirectSum& source, const std::vector<ModuleMap>& gs);
ModuleMap sum_of_maps(const DirectSum& source, const DirectSum& target,
                      const std::vector<ModuleMap>& fs);

struct TensorProduct {
  FPModule module;
  FPModule left;
  FPModule right;
  // Generator (i, j) is index i * right.ngens() + j.
  Row element(const Row& x, const Row& y) const;
};
TensorProduct tensor(const FPModule& m1, const FPModule& m2);
// f ⊗ g between tensor products.
ModuleMap tensor_maps(const TensorProduct& s, const TensorProduct& t, const ModuleMap& f,
                      const ModuleMap& g);

// Presents span(sub)/span(quot) inside an ambient module, with a small
// (diagonalized) generating set.
struct Subquotient {
  FPModule module;
  FPModule ambient;
  MatZN lift;  // module generator -> ambient element
  MatZN stacked;         // sub over quot over ambient relations
  MatZN raw_to_module;   // coefficients on sub -> module coordinates
  std::size_t nsub = 0;
  // Coordinates of an ambient element lying in span(sub); nullopt otherwise.
  std::optional<Row> coords(const Row& x) const;
};
Subquotient subquotient(const FPModule& ambient, const MatZN& sub, const MatZN& quot);

struct HomModule {
  FPModule module;
  FPModule source;
  FPModule target;
  MatZN gens;  // generator -> row-major image matrix (source.ngens x target.ngens)
  ModuleMap to_map(const Row& element) const;
  Row from_map(const ModuleMap& f) const;
};
HomModule hom_group(const FPModule& m, const FPModule& k);

// Conditions on an unknown h: A -> B.  A Pre constraint (f, g) asks h∘f = g,
// a Post constraint (f, g) asks f∘h = g.
struct HomConstraints {
  std::vector<std::pair<ModuleMap, ModuleMap>> pre;
  std::vector<std::pair<ModuleMap, ModuleMap>> post;
};
// Some h satisfying every constraint, or nullopt.  Exact linear solve on Hom(A, B).
std::optional<ModuleMap> solve_hom(const FPModule& a, const FPModule& b,
                                   const HomConstraints& c);

// Isomorphic module of the form ⊕ Z/d_i (d_i | N, d_i > 1) plus free summands.
struct Simplified {
  FPModule module;
  ModuleMap to_simple;
  ModuleMap from_simple;
  std::vector<Int> cyclic_orders;  // order of each generator of module
};
Simplified simplify(const FPModule& m);

// Invariant factors d_1 | d_2 | ... of the underlying finite abelian group.
std::vector<Int> invariant_factors(const FPModule& m);

using Complex = std::vector<ModuleMap>;

struct ExactnessReport {
  bool exact = true;
  std::size_t failure_node = 0;  // index of the map whose target node fails
  std::string reason;
};
// Exact at each interior node: image of maps[i] = kernel of maps[i+1].
ExactnessReport check_exact(const Complex& c);
bool is_exact(const Complex& c);

// 0 -> A -> B -> C -> 0 as a complex including the zero end maps.
Complex short_sequence(const ModuleMap& i, const ModuleMap& p);

struct FreeResolution {
  FPModule base;
  std::vector<std::size_t> ranks;  // rank of F_0 .. F_depth
  std::vector<MatZN> d;            // d[i]: F_{i+1} -> F_i, ranks[i+1] x ranks[i]
  std::size_t depth() const { return ranks.empty() ? 0 : ranks.size() - 1; }
  FPModule F(std::size_t i) const { return FPModule::free(base.modulus(), ranks.at(i)); }
  ModuleMap differential(std::size_t i) const;  // F_i -> F_{i-1}, i >= 1
  ModuleMap augmentation() const;               // F_0 -> base
};
FreeResolution free_resolution(const FPModule& m, std::size_t depth);

// View an A-module (A = Z/N) as an A'-module (A' = Z/nprime, N | nprime).
FPModule restrict_scalars(const FPModule& m, Int nprime);
ModuleMap restrict_scalars(const ModuleMap& f, Int nprime);
// Inverse direction for A'-modules killed by N; throws if not killed.
FPModule descend_scalars(const FPModule& m, Int n);
ModuleMap descend_scalars(const ModuleMap& f, Int n);
bool is_killed_by(const FPModule& m, Int k);

}  // namespace homalg
