#include "homalg/zn_matrix.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace homalg;

TEST(HowellForm, AlreadyCanonical) {
  EXPECT_EQ(howell_form(MatZN(4, 1, 1, {2})), MatZN(4, 1, 1, {2}));
  EXPECT_EQ(howell_form(MatZN(9, 1, 1, {3})), MatZN(9, 1, 1, {3}));
  EXPECT_EQ(howell_form(MatZN(4, 2, 2, {1, 1, 0, 2})), MatZN(4, 2, 2, {1, 1, 0, 2}));
}

TEST(HowellForm, NormalizesPivotToGcd) {
  EXPECT_EQ(howell_form(MatZN(4, 1, 1, {3})), MatZN(4, 1, 1, {1}));
  EXPECT_EQ(howell_form(MatZN(12, 1, 1, {10})), MatZN(12, 1, 1, {2}));
}

TEST(HowellForm, AddsAnnihilatorRow) {
  // (2,1) over Z/4 spans (2,1),(0,2),(2,3),(0,0).
  EXPECT_EQ(howell_form(MatZN(4, 1, 2, {2, 1})), MatZN(4, 2, 2, {2, 1, 0, 2}));
}

TEST(HowellForm, TransformReproducesForm) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Int n = 2 + static_cast<Int>(rng() % 15);
    MatZN m = oracle::random_matrix(rng, n, 1 + rng() % 5, 1 + rng() % 5);
    auto hr = howell_form_with_transform(m);
    EXPECT_EQ(hr.T * m, hr.H);
    EXPECT_EQ(howell_form(m), hr.H);
  }
}

TEST(HowellForm, IdempotentAndSpanPreserving) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    Int n = 2 + static_cast<Int>(rng() % 15);
    std::size_t cols = 1 + rng() % 3, rows = 1 + rng() % 4;
    if (n > 9) cols = std::min<std::size_t>(cols, 2);
    MatZN m = oracle::random_matrix(rng, n, rows, cols);
    MatZN h = howell_form(m);
    EXPECT_EQ(howell_form(h), h);
    EXPECT_EQ(oracle::span(m), oracle::span(h)) << m.to_string();
    EXPECT_EQ(static_cast<std::size_t>(row_span_order(m)), oracle::span(m).size());
  }
}

TEST(HowellForm, UniqueForSameSpan) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    Int n = 2 + static_cast<Int>(rng() % 30);
    MatZN m = oracle::random_matrix(rng, n, 1 + rng() % 5, 1 + rng() % 5);
    // Mix the rows with a random combination and append redundant rows.
    MatZN mix = oracle::random_matrix(rng, n, 3, m.rows());
    MatZN m2 = vstack(mix * m, m.scaled(static_cast<Int>(rng() % n)));
    m2 = vstack(m2, m);
    EXPECT_EQ(howell_form(m2), howell_form(m));
  }
}

TEST(HowellForm, StructuralInvariants) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Int n = 2 + static_cast<Int>(rng() % 60);
    MatZN h = howell_form(oracle::random_matrix(rng, n, 1 + rng() % 6, 1 + rng() % 6));
    auto piv = pivot_columns(h);
    for (std::size_t r = 0; r < h.rows(); ++r) {
      ASSERT_LT(piv[r], h.cols());
      if (r > 0) EXPECT_GT(piv[r], piv[r - 1]);
      Int p = h.at(r, piv[r]);
      EXPECT_EQ(n % p, 0);
      for (std::size_t a = 0; a < r; ++a) EXPECT_LT(h.at(a, piv[r]), p);
    }
  }
}

TEST(Solve, Examples) {
  EXPECT_EQ(solve(MatZN(4, 1, 1, {2}), {2}), Row{1});
  EXPECT_FALSE(solve(MatZN(4, 1, 1, {2}), {1}));
  // Brute force over all 16 vectors finds (1,1) and (1,3),(3,1),(3,3); canonical is (1,1).
  auto x = solve(MatZN(4, 2, 2, {2, 0, 0, 2}), {2, 2});
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, (Row{1, 1}));
  EXPECT_THROW(solve(MatZN(4, 1, 2, {1, 1}), {1}), std::invalid_argument);
}

TEST(Solve, SoundAndComplete) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    Int n = 2 + static_cast<Int>(rng() % 11);
    std::size_t rows = 1 + rng() % 3, cols = 1 + rng() % 3;
    MatZN m = oracle::random_matrix(rng, n, rows, cols);
    Row b = oracle::random_matrix(rng, n, 1, cols).row(0);
    auto x = solve(m, b);
    if (x) {
      EXPECT_EQ(vec_mul(*x, m), b);
    } else {
      EXPECT_FALSE(oracle::has_solution(m, b));
    }
    EXPECT_EQ(row_span_contains(m, b), x.has_value());
  }
}

TEST(Kernel, Examples) {
  EXPECT_EQ(oracle::span(kernel(MatZN(4, 1, 1, {2}))), (std::set<Row>{{0}, {2}}));
  EXPECT_EQ(kernel(MatZN(4, 1, 1, {1})).rows(), 0u);
  EXPECT_EQ(oracle::span(kernel(MatZN(9, 1, 1, {3}))), (std::set<Row>{{0}, {3}, {6}}));
}

TEST(Kernel, MatchesBruteForce) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Int n = 2 + static_cast<Int>(rng() % 11);
    MatZN m = oracle::random_matrix(rng, n, 1 + rng() % 3, 1 + rng() % 3);
    MatZN k = kernel(m);
    EXPECT_EQ(howell_form(k), k);
    for (const Row& r : k.row_list()) EXPECT_TRUE(vec_is_zero(vec_mul(r, m)));
    EXPECT_EQ(oracle::span(k), oracle::kernel_set(m)) << m.to_string();
  }
}

TEST(RowSpanContains, Examples) {
  EXPECT_TRUE(row_span_contains(MatZN(4, 1, 1, {2}), {0}));
  EXPECT_FALSE(row_span_contains(MatZN(4, 1, 1, {2}), {3}));
  EXPECT_FALSE(row_span_contains(MatZN(4, 1, 2, {2, 2}), {0, 2}));
  EXPECT_TRUE(row_span_contains(MatZN(4, 1, 2, {2, 2}), {2, 2}));
}

TEST(Arithmetic, NormalizingUnit) {
  for (Int n : {2, 12, 30, 97, 360}) {
    for (Int a = 0; a < n; ++a) {
      Int w = normalizing_unit(a, n);
      EXPECT_EQ(gcd(w, n), 1);
      if (a != 0) EXPECT_EQ(mulmod(w, a, n), gcd(a, n));
    }
  }
}

TEST(Arithmetic, LargeModulusNoOverflow) {
  const Int n = kMaxModulus;
  MatZN m(n, 2, 2, {n - 1, n - 2, n - 3, 5});
  auto x = solve(m, {1, 1});
  ASSERT_TRUE(x);
  EXPECT_EQ(vec_mul(*x, m), (Row{1, 1}));
}
