#include "homalg/squarezero.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <iterator>
#include <random>
#include <set>

#include "generators.hpp"
#include "homalg/hooks.hpp"

using namespace homalg;

namespace {

FPModule z(Int n, Int d) { return FPModule::cyclic(n, d); }

// 0 -> Z/2 -> Z/4 -> Z/2 -> 0 over Z/N' for any 4 | N'.
Extension z4_extension(Int np) {
  FPModule k = z(np, 2), e = z(np, 4), m = z(np, 2);
  return make_extension(ModuleMap(k, e, MatZN(np, 1, 1, {2})),
                        ModuleMap(e, m, MatZN(np, 1, 1, {1})));
}

std::vector<ModuleMap> all_homs(const FPModule& a, const FPModule& b) {
  HomModule h = hom_group(a, b);
  std::vector<ModuleMap> out;
  for (const Row& e : h.module.elements()) out.push_back(h.to_map(e));
  return out;
}

SquareZeroPair random_pair(std::mt19937& rng) {
  static const std::pair<Int, Int> pairs[] = {{4, 2}, {8, 4}, {9, 3}, {16, 4}, {12, 6}, {27, 9}};
  auto [np, n] = pairs[rng() % std::size(pairs)];
  return make_square_zero_pair(np, n);
}

ModuleMap random_u(std::mt19937& rng, const SquareZeroPair& p, const FPModule& m,
                   const FPModule& k) {
  return gen::random_map(rng, j_tensor(p, m), k);
}

Extension random_ext(std::mt19937& rng, const FPModule& m, const FPModule& k) {
  auto g = ext_group(1, m, k);
  return extension_of_class(g->element_class(gen::random_element(rng, g->module())));
}

// Brute force over A'-extensions 0 -> Z/kd -> E -> Z/md -> 0 with E a sum of
// cyclic groups: the set of theta values, each recorded as the image k of
// the generator j ⊗ 1.
std::set<Int> realizable_thetas(const SquareZeroPair& p, Int kd, Int md) {
  const Int np = p.nprime, order = kd * md;
  FPModule kres = restrict_scalars(z(p.n, kd), np), mres = restrict_scalars(z(p.n, md), np);
  std::vector<std::vector<Int>> shapes;
  std::vector<Int> cur;
  std::function<void(Int, Int)> grow = [&](Int left, Int lo) {
    if (left == 1) {
      shapes.push_back(cur);
      return;
    }
    for (Int d : gen::divisors(np))
      if (d >= lo && d > 1 && left % d == 0) {
        cur.push_back(d);
        grow(left / d, d);
        cur.pop_back();
      }
  };
  grow(order, 2);
  std::set<Int> out;
  for (const auto& shape : shapes) {
    std::vector<FPModule> parts;
    for (Int d : shape) parts.push_back(z(np, d));
    FPModule e = direct_sum(parts).module;
    std::vector<Row> elems = e.elements();
    for (const Row& ie : elems) {
      if (!is_well_defined(kres, e, MatZN::from_rows(np, e.ngens(), {ie}))) continue;
      // i injective: ie has order kd.
      std::set<Row> multiples;
      for (Int t = 0; t < kd; ++t) multiples.insert(e.reduce(vec_scale(ie, t, np)));
      if (static_cast<Int>(multiples.size()) != kd) continue;
      // p: one image in Z/md per generator of E.
      std::vector<Int> img(e.ngens(), 0);
      while (true) {
        MatZN pm(np, e.ngens(), 1);
        for (std::size_t g = 0; g < img.size(); ++g) pm.set(g, 0, img[g]);
        bool ok = is_well_defined(e, mres, pm);
        Row pie = ok ? ModuleMap(e, mres, pm).apply(ie) : Row{};
        if (ok && mres.is_zero_element(pie)) {
          ModuleMap pp(e, mres, pm);
          // Surjective, and |E| = |K||M| with p∘i = 0 and i injective gives exactness
          // once ker p has exactly kd elements, all multiples of ie.
          std::size_t kernel = 0;
          const Row* lift = nullptr;
          for (const Row& x : elems) {
            Row y = pp.apply(x);
            if (mres.is_zero_element(y)) ++kernel;
            if (mres.same_element(y, mres.unit_vector(0)) && !lift) lift = &x;
          }
          if (lift && static_cast<Int>(kernel) == kd) {
            Row nx = e.reduce(vec_scale(*lift, p.n, np));
            for (Int t = 0; t < kd; ++t)
              if (e.reduce(vec_scale(ie, t, np)) == nx) out.insert(t);
          }
        }
        std::size_t g = 0;
        while (g < img.size() && ++img[g] == md) img[g++] = 0;
        if (g == img.size()) break;
      }
    }
  }
  return out;
}

}  // namespace

TEST(SquareZeroPair, Validation) {
  EXPECT_NO_THROW(make_square_zero_pair(4, 2));
  EXPECT_NO_THROW(make_square_zero_pair(12, 6));
  EXPECT_NO_THROW(make_square_zero_pair(27, 9));
  EXPECT_THROW(make_square_zero_pair(8, 2), std::invalid_argument);
  EXPECT_THROW(make_square_zero_pair(9, 2), std::invalid_argument);
  EXPECT_EQ(make_square_zero_pair(16, 4).J.order(), 4);
}

TEST(JTensor, Examples) {
  auto p42 = make_square_zero_pair(4, 2), p84 = make_square_zero_pair(8, 4);
  EXPECT_EQ(j_tensor(p42, z(2, 2)).order(), 2);
  EXPECT_TRUE(j_tensor(p42, FPModule::zero(2)).is_zero());
  EXPECT_EQ(j_tensor(p84, z(4, 2)).order(), 2);
  EXPECT_EQ(j_tensor(p84, z(4, 4)).order(), 2);
  EXPECT_THROW(j_tensor(p84, z(8, 2)), std::invalid_argument);
}

TEST(JTensor, OrderMatchesQuotient) {
  // J ≅ A'/(N'/N), so J ⊗ M ≅ M / (N'/N) M.
  std::mt19937 rng(60);
  for (int t = 0; t < 40; ++t) {
    SquareZeroPair p = random_pair(rng);
    FPModule m = gen::random_module(rng, p.n, 2, 2);
    std::set<Row> multiples;
    for (const Row& x : m.elements()) multiples.insert(m.reduce(vec_scale(x, p.nprime / p.n, p.n)));
    EXPECT_EQ(j_tensor(p, m).order(), m.order() / static_cast<Int>(multiples.size()));
  }
}

TEST(Theta, Examples) {
  auto p42 = make_square_zero_pair(4, 2), p84 = make_square_zero_pair(8, 4);
  ModuleMap t = theta(p42, z4_extension(4));
  EXPECT_FALSE(t.is_zero());
  EXPECT_TRUE(theta(p84, z4_extension(8)).is_zero());
  FPModule z2 = z(4, 2);
  EXPECT_TRUE(theta(p42, split_extension(z2, z2)).is_zero());
  // K = Z/4 is not killed by N = 2.
  EXPECT_THROW(theta(p42, split_extension(z2, z(4, 4))), std::invalid_argument);
}

TEST(Theta, Naturality) {
  std::mt19937 rng(61);
  for (int t = 0; t < 40; ++t) {
    SquareZeroPair p = random_pair(rng);
    const Int np = p.nprime;
    FPModule m = gen::random_module(rng, p.n, 2, 1), k = gen::random_module(rng, p.n, 2, 1);
    Extension xi = random_ext(rng, restrict_scalars(m, np), restrict_scalars(k, np));
    ModuleMap th = theta(p, xi);
    FPModule nn = gen::random_module(rng, p.n, 2, 1), l = gen::random_module(rng, p.n, 2, 1);
    ModuleMap f = gen::random_map(rng, nn, m), g = gen::random_map(rng, k, l);
    // J ⊗ f on generators j ⊗ g_i is the matrix of f.
    ModuleMap jf(j_tensor(p, nn), j_tensor(p, m), f.matrix());
    EXPECT_TRUE(theta(p, pullback_extension(xi, restrict_scalars(f, np))).equals(compose(th, jf)));
    EXPECT_TRUE(theta(p, pushout_extension(xi, restrict_scalars(g, np))).equals(compose(g, th)));
  }
}

TEST(Omega, SmallExample) {
  auto p = make_square_zero_pair(4, 2);
  TwoExtension w = omega(p, z(2, 2));
  for (const FPModule* x : {&w.K(), &w.X(), &w.Y(), &w.M()}) EXPECT_EQ(x->order(), 2);
  EXPECT_TRUE(w.b.is_zero());
}

TEST(Omega, FreeModuleHasZeroClass) {
  for (auto [np, n] : std::vector<std::pair<Int, Int>>{{4, 2}, {8, 4}, {9, 3}, {12, 6}}) {
    auto p = make_square_zero_pair(np, n);
    TwoExtension w = omega(p, FPModule::free(n, 2));
    EXPECT_TRUE(class_of_two_extension(w).is_zero());
    EXPECT_TRUE(solve_deformation(p, FPModule::free(n, 2),
                                  ModuleMap::identity(j_tensor(p, FPModule::free(n, 2)))));
  }
}

TEST(Omega, NonzeroOverZ8) {
  auto p = make_square_zero_pair(8, 4);
  EXPECT_FALSE(class_of_two_extension(omega(p, z(4, 2))).is_zero());
}

TEST(Omega, IndependentOfCover) {
  std::mt19937 rng(62);
  for (int t = 0; t < 30; ++t) {
    SquareZeroPair p = random_pair(rng);
    const Int np = p.nprime, n = p.n;
    FPModule m = gen::random_module(rng, n, 2, 2);
    // Second cover: the free module on M's generators plus one extra generator.
    Row extra = gen::random_row(rng, np, m.ngens());
    MatZN cover = vstack(MatZN::identity(np, m.ngens()), MatZN::from_rows(np, m.ngens(), {extra}));
    Omega w1 = omega_data(p, m), w2 = omega_data(p, m, cover);
    // H2 -> H1 over M: identity on the old generators, extra |-> extra.
    ModuleMap phi(w2.H, w1.H, cover);
    ModuleMap fl = *lift(compose(phi, w2.L_to_H), w1.L_to_H);
    ModuleMap fl_bar = descend_scalars(*factor_through(compose(w1.L_to_Lbar, fl), w2.L_to_Lbar), n);
    ModuleMap fh_bar = descend_scalars(*factor_through(compose(w1.H_to_Hbar, phi), w2.H_to_Hbar), n);
    ChainMap f = make_chain_map(w2.two, w1.two, fl_bar, fh_bar, ModuleMap::identity(m));
    Butterfly b = induced_butterfly(f);
    EXPECT_TRUE(validate_butterfly(b));
    EXPECT_EQ(class_of_two_extension(w1.two), class_of_two_extension(w2.two));
  }
}

TEST(CupOmega, Examples) {
  auto p = make_square_zero_pair(8, 4);
  FPModule z2 = z(4, 2);
  FPModule jm = j_tensor(p, z2);
  EXPECT_TRUE(class_of_two_extension(cup_omega(p, z2, ModuleMap::zero(jm, z2))).is_zero());
  ModuleMap u(jm, z2, MatZN(4, 1, 1, {1}));
  EXPECT_FALSE(class_of_two_extension(cup_omega(p, z2, u)).is_zero());
  EXPECT_THROW(cup_omega(p, z2, ModuleMap::zero(z(4, 4), z2)),
               std::invalid_argument);
}

TEST(CupOmega, Linear) {
  std::mt19937 rng(63);
  for (int t = 0; t < 40; ++t) {
    SquareZeroPair p = random_pair(rng);
    FPModule m = gen::random_module(rng, p.n, 2, 1), k = gen::random_module(rng, p.n, 2, 1);
    ModuleMap u1 = random_u(rng, p, m, k), u2 = random_u(rng, p, m, k);
    auto g = ext_group(2, m, k);
    EXPECT_EQ(class_of_two_extension(cup_omega(p, m, u1 + u2)),
              g->add(class_of_two_extension(cup_omega(p, m, u1)),
                     class_of_two_extension(cup_omega(p, m, u2))));
  }
}

TEST(RestrictExt, Examples) {
  auto p = make_square_zero_pair(8, 4);
  FPModule z2 = z(4, 2);
  EXPECT_TRUE(splitting(restrict_ext(p, split_extension(z2, z2))).has_value());
  Extension r = restrict_ext(p, z4_extension(4));
  EXPECT_FALSE(splitting(r).has_value());
  EXPECT_TRUE(theta(p, r).is_zero());
}

TEST(RestrictExt, ThetaVanishes) {
  std::mt19937 rng(64);
  for (int t = 0; t < 40; ++t) {
    SquareZeroPair p = random_pair(rng);
    FPModule m = gen::random_module(rng, p.n, 2, 1), k = gen::random_module(rng, p.n, 2, 1);
    EXPECT_TRUE(theta(p, restrict_ext(p, random_ext(rng, m, k))).is_zero());
  }
}

TEST(ThetaMatrix, Examples) {
  auto p42 = make_square_zero_pair(4, 2), p84 = make_square_zero_pair(8, 4);
  ThetaMatrix a = theta_matrix(p42, z(2, 2), z(2, 2));
  EXPECT_TRUE(is_isomorphism(a.map));
  EXPECT_EQ(a.ext->module().order(), 2);
  ThetaMatrix b = theta_matrix(p84, z(4, 2), z(4, 2));
  EXPECT_TRUE(b.map.is_zero());
  // M free over A: Ext^1_A and Ext^2_A vanish, so theta is an isomorphism.
  ThetaMatrix c = theta_matrix(p84, FPModule::free(4, 1), z(4, 2));
  EXPECT_TRUE(is_isomorphism(c.map));
  EXPECT_EQ(c.ext->module().order(), 2);
}

TEST(SolveDeformation, Examples) {
  auto p42 = make_square_zero_pair(4, 2), p84 = make_square_zero_pair(8, 4);
  FPModule z2 = z(2, 2);
  auto d0 = solve_deformation(p42, z2, ModuleMap::zero(j_tensor(p42, z2), z2));
  ASSERT_TRUE(d0);
  EXPECT_TRUE(splitting(d0->xi).has_value());
  auto d1 = solve_deformation(p42, z2, ModuleMap(j_tensor(p42, z2), z2, MatZN(2, 1, 1, {1})));
  ASSERT_TRUE(d1);
  EXPECT_EQ(invariant_factors(d1->xi.E()), std::vector<Int>{4});
  FPModule y2 = z(4, 2);
  EXPECT_FALSE(solve_deformation(p84, y2, ModuleMap(j_tensor(p84, y2), y2, MatZN(4, 1, 1, {1}))));
}

TEST(SolveDeformation, AgreesWithExhaustiveSearch) {
  for (auto [np, n] : std::vector<std::pair<Int, Int>>{{4, 2}, {8, 4}, {9, 3}, {16, 4}}) {
    auto p = make_square_zero_pair(np, n);
    for (Int kd : gen::divisors(n))
      for (Int md : gen::divisors(n)) {
        if (kd == 1 || md == 1) continue;
        FPModule k = z(n, kd), m = z(n, md);
        std::set<Int> want = realizable_thetas(p, kd, md);
        std::set<Int> got;
        for (const ModuleMap& u : all_homs(j_tensor(p, m), k))
          if (solve_deformation(p, m, u)) got.insert(k.reduce(u.matrix().row(0))[0]);
        EXPECT_EQ(got, want) << np << " " << n << " " << kd << " " << md;
      }
  }
}

TEST(SolveDeformation, ObstructionConsistencyRandom) {
  std::mt19937 rng(65);
  for (int t = 0; t < 30; ++t) {
    SquareZeroPair p = random_pair(rng);
    FPModule m = gen::random_module(rng, p.n, 2, 1), k = gen::random_module(rng, p.n, 1, 1);
    // Throws on disagreement between the two criteria.
    for (const ModuleMap& u : all_homs(j_tensor(p, m), k)) {
      auto d = solve_deformation(p, m, u);
      if (d) EXPECT_TRUE(theta(p, d->xi).equals(u));
    }
  }
}

TEST(ExtensionFromSplitting, SplitCase) {
  auto p = make_square_zero_pair(4, 2);
  FPModule z2 = z(2, 2);
  ModuleMap u = ModuleMap::zero(j_tensor(p, z2), z2);
  auto b = find_splitting_butterfly(cup_omega(p, z2, u));
  ASSERT_TRUE(b);
  Extension xi = extension_from_splitting(p, z2, u, *b);
  EXPECT_TRUE(theta(p, xi).is_zero());
}

TEST(ExtensionFromSplitting, IdentityOverZ4) {
  auto p = make_square_zero_pair(4, 2);
  FPModule z2 = z(2, 2);
  ModuleMap u(j_tensor(p, z2), z2, MatZN(2, 1, 1, {1}));
  auto b = find_splitting_butterfly(cup_omega(p, z2, u));
  ASSERT_TRUE(b);
  Extension xi = extension_from_splitting(p, z2, u, *b);
  EXPECT_EQ(invariant_factors(xi.E()), std::vector<Int>{4});
  EXPECT_TRUE(theta(p, xi).equals(u));
  EXPECT_THROW(extension_from_splitting(p, z2, u, identity_butterfly(cup_omega(p, z2, u))),
               std::invalid_argument);
}

TEST(ExtensionFromSplitting, ThetaRecoversU) {
  std::mt19937 rng(66);
  int built = 0;
  for (int t = 0; t < 40; ++t) {
    SquareZeroPair p = random_pair(rng);
    FPModule m = gen::random_module(rng, p.n, 2, 1), k = gen::random_module(rng, p.n, 1, 1);
    for (const ModuleMap& u : all_homs(j_tensor(p, m), k)) {
      auto b = find_splitting_butterfly(cup_omega(p, m, u));
      EXPECT_EQ(b.has_value(), solve_deformation(p, m, u).has_value());
      if (!b) continue;
      EXPECT_TRUE(theta(p, extension_from_splitting(p, m, u, *b)).equals(u));
      ++built;
    }
  }
  EXPECT_GT(built, 40);
}

TEST(Mutation, FlippedCupOmegaIsCaught) {
  auto p = make_square_zero_pair(9, 3);
  FPModule z3 = z(3, 3);
  ModuleMap u(j_tensor(p, z3), z3, MatZN(3, 1, 1, {1}));
  hooks::ScopedFlip flip(hooks::flip_cup_omega);
  auto b = find_splitting_butterfly(cup_omega(p, z3, u));
  ASSERT_TRUE(b);
  EXPECT_THROW(extension_from_splitting(p, z3, u, *b), std::logic_error);
}
