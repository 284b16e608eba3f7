#include "homalg/fpmod.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "generators.hpp"

using namespace homalg;

namespace {

ModuleMap times_k(const FPModule& m, Int k) { return ModuleMap::identity(m).scaled(k); }

}  // namespace

TEST(FPModule, OrderAndElements) {
  FPModule z2 = FPModule::cyclic(4, 2);
  EXPECT_EQ(z2.order(), 2);
  EXPECT_EQ(z2.elements().size(), 2u);
  EXPECT_EQ(FPModule::free(4, 2).order(), 16);
  EXPECT_TRUE(FPModule::zero(9).is_zero());
  EXPECT_TRUE(FPModule::cyclic(9, 1).is_zero());
  EXPECT_THROW(FPModule::cyclic(9, 2), std::invalid_argument);
  EXPECT_THROW(FPModule::free(16, 4).elements(), std::length_error);
}

TEST(FPModule, OrderMatchesBruteForce) {
  std::mt19937 rng(7);
  for (int t = 0; t < 100; ++t) {
    FPModule m = gen::random_module(rng, 2 + rng() % 8, 3, 3);
    EXPECT_EQ(static_cast<std::size_t>(m.order()), oracle::finite(m).order());
    EXPECT_EQ(m.elements().size(), oracle::finite(m).order());
  }
}

TEST(KernelModule, Examples) {
  FPModule z4 = FPModule::free(4, 1);
  auto k = kernel_module(times_k(z4, 2));
  EXPECT_EQ(k.module.order(), 2);
  EXPECT_TRUE(is_injective(k.inclusion));
  EXPECT_EQ(k.inclusion.apply(k.module.unit_vector(0)), Row{2});

  FPModule m = direct_sum({FPModule::cyclic(4, 2), FPModule::free(4, 1)}).module;
  EXPECT_TRUE(kernel_module(ModuleMap::identity(m)).module.is_zero());

  FPModule f2 = FPModule::free(4, 2);
  auto k2 = kernel_module(ModuleMap(f2, z4, MatZN(4, 2, 1, {1, 1})));
  EXPECT_EQ(k2.module.order(), 4);
  EXPECT_EQ(invariant_factors(k2.module), std::vector<Int>{4});
  // (1,-1) lies in the kernel and generates it.
  EXPECT_TRUE(preimage(k2.inclusion, {1, 3}).has_value());
}

TEST(CokernelModule, Examples) {
  FPModule z4 = FPModule::free(4, 1);
  EXPECT_EQ(cokernel_module(times_k(z4, 2)).module.order(), 2);
  FPModule m = FPModule::cyclic(4, 2);
  EXPECT_EQ(cokernel_module(ModuleMap::zero(m, m)).module, m);
  auto c = cokernel_module(ModuleMap(FPModule::cyclic(4, 2), z4, MatZN(4, 1, 1, {2})));
  EXPECT_EQ(c.module.order(), 2);
}

TEST(KernelCokernel, UniversalPropertiesAndCounts) {
  std::mt19937 rng(8);
  for (int t = 0; t < 80; ++t) {
    Int n = gen::pick(rng, {4, 6, 8, 9});
    FPModule a = gen::random_module(rng, n, 2, 2);
    FPModule b = gen::random_module(rng, n, 2, 2);
    ModuleMap f = gen::random_map(rng, a, b);
    auto k = kernel_module(f);
    auto c = cokernel_module(f);
    auto im = image_module(f);
    EXPECT_TRUE(is_injective(k.inclusion));
    EXPECT_TRUE(compose(f, k.inclusion).is_zero());
    EXPECT_TRUE(is_surjective(c.projection));
    EXPECT_TRUE(compose(c.projection, f).is_zero());
    EXPECT_EQ(k.module.order() * im.module.order(), a.order());
    EXPECT_EQ(c.module.order() * im.module.order(), b.order());
    EXPECT_TRUE(is_exact({k.inclusion, f, c.projection}));
    // Any map killed by f factors through the kernel.
    FPModule w = gen::random_module(rng, n, 2, 1);
    ModuleMap g = compose(k.inclusion, gen::random_map(rng, w, k.module));
    auto h = lift(g, k.inclusion);
    ASSERT_TRUE(h);
    EXPECT_TRUE(compose(k.inclusion, *h).equals(g));
    // Any map killing f factors through the cokernel.
    ModuleMap q = compose(gen::random_map(rng, c.module, w), c.projection);
    auto qq = factor_through(q, c.projection);
    ASSERT_TRUE(qq);
    EXPECT_TRUE(compose(*qq, c.projection).equals(q));
  }
}

TEST(KernelModule, ElementsMatchBruteForce) {
  std::mt19937 rng(9);
  for (int t = 0; t < 60; ++t) {
    Int n = gen::pick(rng, {4, 6, 8});
    FPModule a = gen::random_module(rng, n, 2, 2);
    FPModule b = gen::random_module(rng, n, 2, 2);
    ModuleMap f = gen::random_map(rng, a, b);
    std::size_t brute = 0;
    for (const Row& x : a.elements())
      if (b.is_zero_element(f.apply(x))) ++brute;
    EXPECT_EQ(static_cast<std::size_t>(kernel_module(f).module.order()), brute);
  }
}

TEST(DirectSum, BiproductIdentities) {
  std::mt19937 rng(10);
  for (int t = 0; t < 40; ++t) {
    Int n = gen::pick(rng, {4, 9, 12});
    std::vector<FPModule> ms;
    for (std::size_t i = 0, c = 1 + rng() % 3; i < c; ++i)
      ms.push_back(gen::random_module(rng, n, 2, 2));
    DirectSum s = direct_sum(ms);
    ModuleMap total = ModuleMap::zero(s.module, s.module);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      for (std::size_t j = 0; j < ms.size(); ++j) {
        ModuleMap pi = compose(s.projections[i], s.injections[j]);
        if (i == j) {
          EXPECT_TRUE(pi.equals(ModuleMap::identity(ms[i])));
        } else {
          EXPECT_TRUE(pi.is_zero());
        }
      }
      total = total + compose(s.injections[i], s.projections[i]);
    }
    EXPECT_TRUE(total.equals(ModuleMap::identity(s.module)));
  }
}

TEST(DirectSum, Examples) {
  EXPECT_TRUE(direct_sum({FPModule::zero(4), FPModule::zero(4)}).module.is_zero());
  FPModule s = direct_sum({FPModule::cyclic(4, 2), FPModule::cyclic(4, 2)}).module;
  EXPECT_EQ(s.ngens(), 2u);
  EXPECT_EQ(s.relations(), MatZN(4, 2, 2, {2, 0, 0, 2}));
  FPModule f = direct_sum({FPModule::free(9, 1), FPModule::free(9, 1), FPModule::free(9, 1)}).module;
  EXPECT_TRUE(f.is_free());
  EXPECT_EQ(f.ngens(), 3u);
}

TEST(Tensor, Examples) {
  EXPECT_EQ(tensor(FPModule::cyclic(4, 2), FPModule::cyclic(4, 2)).module.order(), 2);
  EXPECT_TRUE(tensor(FPModule::cyclic(6, 2), FPModule::cyclic(6, 3)).module.is_zero());
  FPModule m = direct_sum({FPModule::cyclic(8, 4), FPModule::cyclic(8, 2)}).module;
  EXPECT_EQ(invariant_factors(tensor(m, FPModule::free(8, 1)).module), invariant_factors(m));
}

// A ⊗ B has the universal property: its order equals the number of bilinear
// maps to Z/N (Hom(A⊗B, Z/N) ≅ Bil(A×B, Z/N) and |Hom(X, Z/N)| = |X|).
TEST(Tensor, OrderMatchesBilinearCount) {
  std::mt19937 rng(12);
  for (int t = 0; t < 30; ++t) {
    Int n = gen::pick(rng, {4, 6, 8, 9});
    FPModule a = gen::random_module(rng, n, 2, 2);
    FPModule b = gen::random_module(rng, n, 1, 1);
    // Bilinear maps are determined by values on generator pairs; count by brute force.
    std::size_t count = 0;
    std::size_t cells = a.ngens() * b.ngens();
    oracle::for_each_vector(cells, n, [&](const Row& vals) {
      auto form = [&](const Row& x, const Row& y) {
        Int s = 0;
        for (std::size_t i = 0; i < a.ngens(); ++i)
          for (std::size_t j = 0; j < b.ngens(); ++j) s += x[i] * y[j] * vals[i * b.ngens() + j];
        return mod(s, n);
      };
      bool ok = true;
      for (const Row& r : a.relations().row_list())
        for (std::size_t j = 0; j < b.ngens() && ok; ++j)
          if (form(r, b.unit_vector(j)) != 0) ok = false;
      for (const Row& r : b.relations().row_list())
        for (std::size_t i = 0; i < a.ngens() && ok; ++i)
          if (form(a.unit_vector(i), r) != 0) ok = false;
      if (ok) ++count;
    });
    EXPECT_EQ(static_cast<std::size_t>(tensor(a, b).module.order()), count);
  }
}

TEST(Tensor, RightExact) {
  std::mt19937 rng(13);
  for (int t = 0; t < 30; ++t) {
    Int n = gen::pick(rng, {4, 8, 9});
    FPModule m = gen::random_module(rng, n, 2, 2);
    FPModule x = gen::random_module(rng, n, 2, 1);
    auto q = cokernel_module(gen::random_map(rng, gen::random_module(rng, n, 1, 1), m));
    TensorProduct s = tensor(x, m), tt = tensor(x, q.module);
    ModuleMap idf = tensor_maps(s, tt, ModuleMap::identity(x), q.projection);
    EXPECT_TRUE(is_surjective(idf));
  }
}

TEST(Hom, Examples) {
  FPModule z2 = FPModule::cyclic(4, 2), z4 = FPModule::free(4, 1);
  HomModule h = hom_group(z2, z4);
  EXPECT_EQ(h.module.order(), 2);
  EXPECT_TRUE(hom_group(z2, FPModule::zero(4)).module.is_zero());
  EXPECT_EQ(hom_group(z2, z2).module.order(), 2);
}

TEST(Hom, OrderMatchesEnumerationAndRoundTrips) {
  std::mt19937 rng(14);
  for (int t = 0; t < 60; ++t) {
    Int n = gen::pick(rng, {4, 6, 8, 9});
    FPModule a = gen::random_module(rng, n, 2, 2);
    FPModule b = gen::random_module(rng, n, 2, 2);
    HomModule h = hom_group(a, b);
    EXPECT_EQ(static_cast<std::size_t>(h.module.order()), oracle::count_homs(a, b));
    if (h.module.order() <= 4096)
      for (const Row& e : h.module.elements()) EXPECT_EQ(h.from_map(h.to_map(e)), e);
    ModuleMap g = gen::random_map(rng, a, b);
    EXPECT_TRUE(h.to_map(h.from_map(g)).equals(g));
  }
}

TEST(Simplify, IsIsomorphism) {
  std::mt19937 rng(15);
  for (int t = 0; t < 100; ++t) {
    Int n = gen::pick(rng, {4, 8, 12, 18, 27});
    FPModule m = gen::random_module(rng, n, 3, 3);
    Simplified s = simplify(m);
    EXPECT_TRUE(compose(s.from_simple, s.to_simple).equals(ModuleMap::identity(m)));
    EXPECT_TRUE(compose(s.to_simple, s.from_simple).equals(ModuleMap::identity(s.module)));
    Int prod = 1;
    for (Int d : s.cyclic_orders) prod *= d;
    EXPECT_EQ(prod, m.order());
    Int prod2 = 1;
    auto inv = invariant_factors(m);
    for (std::size_t i = 0; i < inv.size(); ++i) {
      prod2 *= inv[i];
      if (i) EXPECT_EQ(inv[i] % inv[i - 1], 0);
    }
    EXPECT_EQ(prod2, m.order());
  }
}

TEST(IsExact, Examples) {
  FPModule z2 = FPModule::cyclic(4, 2), z4 = FPModule::free(4, 1);
  ModuleMap i(z2, z4, MatZN(4, 1, 1, {2}));
  ModuleMap p(z4, z2, MatZN(4, 1, 1, {1}));
  EXPECT_TRUE(is_exact(short_sequence(i, p)));

  DirectSum s = direct_sum({z2, z2});
  EXPECT_TRUE(is_exact(short_sequence(s.injections[0], s.projections[1])));

  // 0 -> Z/2 -> Z/4 -> Z/4 -> 0 cannot be exact for any maps.
  for (Int a : {0, 2})
    for (Int b = 0; b < 4; ++b) {
      ModuleMap f(z2, z4, MatZN(4, 1, 1, {a}));
      ModuleMap g(z4, z4, MatZN(4, 1, 1, {b}));
      EXPECT_FALSE(is_exact(short_sequence(f, g)));
    }
  EXPECT_THROW(is_exact({p, p}), std::invalid_argument);
}

TEST(FreeResolution, Examples) {
  auto r0 = free_resolution(FPModule::free(4, 2), 3);
  EXPECT_EQ(r0.ranks, (std::vector<std::size_t>{2, 0, 0, 0}));

  auto r = free_resolution(FPModule::cyclic(4, 2), 2);
  EXPECT_EQ(r.ranks, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(r.d[0], MatZN(4, 1, 1, {2}));
  EXPECT_EQ(r.d[1], MatZN(4, 1, 1, {2}));

  auto r9 = free_resolution(FPModule::cyclic(9, 3), 1);
  EXPECT_EQ(r9.d[0], MatZN(9, 1, 1, {3}));
}

TEST(FreeResolution, AlwaysExact) {
  std::mt19937 rng(16);
  for (int t = 0; t < 60; ++t) {
    Int n = gen::pick(rng, {4, 8, 9, 12, 16, 27});
    FPModule m = gen::random_module(rng, n, 3, 3);
    auto r = free_resolution(m, 4);
    Complex c;
    for (std::size_t i = r.depth(); i >= 1; --i) c.push_back(r.differential(i));
    c.push_back(r.augmentation());
    c.push_back(ModuleMap::zero(m, FPModule::zero(n)));
    EXPECT_TRUE(is_exact(c));
  }
}

TEST(RestrictScalars, Examples) {
  FPModule m = restrict_scalars(FPModule::free(2, 1), 4);
  EXPECT_EQ(m.modulus(), 4);
  EXPECT_EQ(m.relations(), MatZN(4, 1, 1, {2}));
  EXPECT_TRUE(restrict_scalars(FPModule::zero(2), 4).is_zero());
  FPModule s = restrict_scalars(direct_sum({FPModule::cyclic(4, 2), FPModule::cyclic(4, 2)}).module, 8);
  EXPECT_EQ(s.relations(), MatZN(8, 2, 2, {2, 0, 0, 2}));
  EXPECT_TRUE(is_killed_by(s, 4));
  EXPECT_EQ(descend_scalars(s, 4), direct_sum({FPModule::cyclic(4, 2), FPModule::cyclic(4, 2)}).module);
  EXPECT_THROW(restrict_scalars(FPModule::free(3, 1), 4), std::invalid_argument);
  EXPECT_THROW(descend_scalars(FPModule::free(8, 1), 4), std::invalid_argument);
}

TEST(ModuleMap, RejectsIllDefined) {
  EXPECT_THROW(ModuleMap(FPModule::cyclic(4, 2), FPModule::free(4, 1), MatZN(4, 1, 1, {1})),
               std::invalid_argument);
}
