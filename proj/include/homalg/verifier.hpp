#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homalg/squarezero.hpp"

namespace homalg::verify {

struct Instance {
  SquareZeroPair pair;
  FPModule M;  // over Z/N
  FPModule K;  // over Z/N
  std::string label;
};

inline const std::vector<std::pair<Int, Int>> kDefaultPairs = {{4, 2}, {9, 3},  {8, 4},
                                                               {16, 4}, {12, 6}, {27, 9}};

struct SuiteConfig {
  std::vector<std::pair<Int, Int>> pairs = kDefaultPairs;  // (N', N)
  std::uint64_t seed = 1;
  std::size_t max_order = kDefaultElementCap;
  unsigned threads = 0;  // 0: hardware concurrency
  bool timing = true;
};

// Z/d for d | N, d > 1, then Z/d1 ⊕ Z/d2 for d1 <= d2, up to isomorphism.
std::vector<FPModule> module_choices(Int n);
std::string module_label(const FPModule& m);
// Throws std::invalid_argument naming the violated condition for a bad pair.
std::vector<Instance> enumerate_instances(const SuiteConfig& cfg);
Instance make_instance(Int nprime, Int n, const FPModule& m, const FPModule& k);

// Failure witness at a node: an element of the middle group.
struct NodeCheck {
  std::string node;
  bool exact = true;
  std::string witness_kind;  // "ker_not_in_im" or "im_not_in_ker"
  Row witness;
};

// Exactness of A -f-> B -g-> C at B: nullopt, or an image element g does not
// kill, or a kernel generator outside the image of f.
std::optional<NodeCheck> exactness_witness(const std::string& node, const ModuleMap& f,
                                           const ModuleMap& g);

enum class Verdict { Pass, Fail, Skip };
const char* verdict_name(Verdict v);

struct SequenceReport {
  std::string label;
  Verdict verdict = Verdict::Pass;
  std::vector<std::vector<Int>> groups;  // Ext1_A, Ext1_A', Hom_A(J⊗M,K), Ext2_A
  std::vector<MatZN> maps;               // restriction, theta, class∘cup_omega
  std::vector<NodeCheck> nodes;
  bool rightward = true;  // Ext2_A -> Ext2_A' kills the image of cup_omega
  std::string failure;
  double millis = 0;
};

// The four groups and three maps of 0 -> Ext1_A -> Ext1_A' -> Hom -> Ext2_A
// with exactness at the first three nodes.
SequenceReport build_illusie_sequence(const Instance& inst, std::size_t max_order = kDefaultElementCap);

struct ObstructionReport {
  std::string label;
  Verdict verdict = Verdict::Pass;
  std::size_t homs = 0;
  std::size_t solvable = 0;
  bool consistent = true;  // deformation exists iff class(cup_omega(u)) = 0
  bool beta = true;        // extension_from_splitting recovers u
  std::string failure;
};
// Runs over every u in Hom_A(J⊗M, K).
ObstructionReport check_obstructions(const Instance& inst, std::size_t max_order = kDefaultElementCap);

struct SuiteCheck {
  std::string name;
  bool pass = true;
  std::size_t cases = 0;
  std::string failure;  // first failure
};
SuiteCheck butterfly_suite(const std::vector<Instance>& insts, std::uint64_t seed);
SuiteCheck cech_suite(const std::vector<Instance>& insts, std::uint64_t seed, std::size_t degree = 3);

struct SuiteResult {
  SuiteConfig config;
  std::vector<SequenceReport> sequences;
  std::vector<ObstructionReport> obstructions;
  SuiteCheck butterflies;
  SuiteCheck cech;
  bool pass() const;
};
SuiteResult run_suite(const SuiteConfig& cfg);

// Deterministic JSON text; timing fields only when cfg.timing is set.
std::string report_json(const SuiteResult& r);
std::string sequence_json(const SequenceReport& r, bool timing);

}  // namespace homalg::verify
