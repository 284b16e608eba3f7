#include "homalg/verifier.hpp"

#include <gtest/gtest.h>

#include "homalg/hooks.hpp"
#include "homalg/instance_io.hpp"

using namespace homalg;
using namespace homalg::verify;

namespace {

FPModule z(Int n, Int d) { return FPModule::cyclic(n, d); }

SuiteConfig only(Int np, Int n) {
  SuiteConfig c;
  c.pairs = {{np, n}};
  c.timing = false;
  return c;
}

}  // namespace

TEST(Instances, DefaultFamily) {
  auto insts = enumerate_instances(SuiteConfig{});
  // 2, 2, 5, 5, 8, 5 module choices for the six pairs; over Z/6 the sum
  // Z/2 ⊕ Z/3 repeats Z/6
  EXPECT_EQ(insts.size(), 4u + 4u + 25u + 25u + 64u + 25u);
  EXPECT_GE(insts.size(), 60u);
  EXPECT_EQ(enumerate_instances(only(4, 2)).size(), 4u);
  std::set<std::string> labels;
  for (const auto& i : insts) labels.insert(i.label);
  EXPECT_EQ(labels.size(), insts.size());
}

TEST(Instances, InvalidPairIsNamed) {
  try {
    enumerate_instances(only(8, 2));
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("N^2"), std::string::npos);
  }
  EXPECT_THROW(make_instance(8, 4, z(2, 2), z(4, 2)), std::invalid_argument);
}

TEST(Illusie, Examples) {
  auto r = build_illusie_sequence(make_instance(4, 2, z(2, 2), z(2, 2)));
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.failure;
  EXPECT_EQ(r.groups, (std::vector<std::vector<Int>>{{}, {2}, {2}, {}}));
  EXPECT_EQ(r.maps[1].at(0, 0), 1);  // theta is an isomorphism

  r = build_illusie_sequence(make_instance(8, 4, z(4, 2), z(4, 2)));
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.failure;
  EXPECT_EQ(r.groups, (std::vector<std::vector<Int>>{{2}, {2}, {2}, {2}}));
  EXPECT_EQ(r.maps[0].at(0, 0), 1);  // restriction iso
  EXPECT_EQ(r.maps[1].at(0, 0), 0);  // theta zero
  EXPECT_EQ(r.maps[2].at(0, 0), 1);  // cup_omega injective
  EXPECT_TRUE(r.rightward);
}

TEST(Illusie, FreeModule) {
  // M = Z/4 over A = Z/4: every u deforms through the free A'-module.
  auto r = build_illusie_sequence(make_instance(8, 4, z(4, 4), z(4, 2)));
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.failure;
  EXPECT_TRUE(r.groups[0].empty());
  EXPECT_TRUE(r.groups[3].empty());
  auto o = check_obstructions(make_instance(8, 4, z(4, 4), z(4, 2)));
  EXPECT_EQ(o.solvable, o.homs);
}

TEST(Illusie, SkipAboveCap) {
  auto r = build_illusie_sequence(make_instance(4, 2, z(2, 2), z(2, 2)), 1);
  EXPECT_EQ(r.verdict, Verdict::Skip);
}

TEST(Illusie, WitnessOnBrokenSequence) {
  FPModule a = z(4, 4);
  ModuleMap f = ModuleMap(a, a, MatZN(4, 1, 1, {2}));
  // Z/4 -2-> Z/4 -2-> Z/4 is exact; -0-> is not.
  EXPECT_FALSE(exactness_witness("x", f, f));
  auto w = exactness_witness("x", f, ModuleMap::zero(a, a));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->witness_kind, "ker_not_in_im");
  EXPECT_EQ(w->witness, Row{1});
  w = exactness_witness("x", ModuleMap::identity(a), f);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->witness_kind, "im_not_in_ker");
}

TEST(Obstructions, Z8OverZ4) {
  auto o = check_obstructions(make_instance(8, 4, z(4, 2), z(4, 2)));
  EXPECT_EQ(o.verdict, Verdict::Pass) << o.failure;
  EXPECT_EQ(o.homs, 2u);
  EXPECT_EQ(o.solvable, 1u);  // only u = 0
}

TEST(Obstructions, FlippedCupOmegaFails) {
  hooks::ScopedFlip flip(hooks::flip_cup_omega);
  auto o = check_obstructions(make_instance(9, 3, z(3, 3), z(3, 3)));
  EXPECT_EQ(o.verdict, Verdict::Fail);
  EXPECT_FALSE(o.beta);
}

TEST(Suite, DeterministicReport) {
  SuiteConfig c = only(9, 3);
  c.seed = 5;
  SuiteResult a = run_suite(c), b = run_suite(c);
  EXPECT_TRUE(a.pass());
  EXPECT_EQ(report_json(a), report_json(b));
  EXPECT_EQ(report_json(a).find("timing_ms"), std::string::npos);
}

TEST(Suite, FlippedProjectionFails) {
  hooks::ScopedFlip flip(hooks::flip_induced_projection);
  SuiteResult r = run_suite(only(9, 3));
  EXPECT_FALSE(r.butterflies.pass);
  EXPECT_FALSE(r.pass());
}

TEST(InstanceIo, ParseAndErrors) {
  auto f = io::parse_instance(R"({"ring": {"n": 4},
    "modules": {"A": {"gens": 1, "relations": [[2]]}, "B": {"gens": 1}},
    "maps": {"f": {"source": "A", "target": "B", "matrix": [[2]]}},
    "covers": [{"target": "B", "maps": ["f"]}]})");
  EXPECT_EQ(f.modules.at("A"), z(4, 2));
  EXPECT_EQ(f.maps.at("f").matrix().at(0, 0), 2);
  EXPECT_FALSE(is_cover(f.covers[0].family, f.covers[0].M));
  EXPECT_THROW(io::parse_instance("{"), io::ParseError);
  EXPECT_THROW(io::parse_instance(R"({"ring": {"n": 4}, "modules": {"A": {"gens": 1}},
    "maps": {"f": {"source": "A", "target": "C", "matrix": [[1]]}}})"),
               io::ParseError);
  // 1 -> 1 is not well defined from Z/2 to Z/4
  EXPECT_THROW(io::parse_instance(R"({"ring": {"n": 4},
    "modules": {"A": {"gens": 1, "relations": [[2]]}, "B": {"gens": 1}},
    "maps": {"f": {"source": "A", "target": "B", "matrix": [[1]]}}})"),
               io::ParseError);
  EXPECT_THROW(io::load_instance("/nonexistent/file.json"), io::IoError);
  EXPECT_EQ(io::parse_module("2,4", 4), direct_sum({z(4, 2), z(4, 4)}).module);
  EXPECT_EQ(io::parse_module("free:2", 3), FPModule::free(3, 2));
  EXPECT_THROW(io::parse_module("3", 4), io::ParseError);
  EXPECT_EQ(io::parse_matrix("[[1,2],[3,0]]", 4).at(1, 0), 3);
}
