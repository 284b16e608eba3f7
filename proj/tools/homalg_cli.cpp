// Command-line front end: the full verification suite and single computations.

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "homalg/hooks.hpp"
#include "homalg/instance_io.hpp"
#include "homalg/verifier.hpp"
#include "json.hpp"

using namespace homalg;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct Globals {
  std::string report;
  std::uint64_t seed = 1;
  std::size_t max_order = kDefaultElementCap;
};

struct ModuleArgs {
  Int nprime = 0;
  Int n = 0;
  std::string module;
  std::string coeff;
};

void add_module_args(CLI::App* sub, ModuleArgs& a, bool need_nprime) {
  auto* np = sub->add_option("--nprime", a.nprime, "modulus N' of A'");
  if (need_nprime) np->required();
  sub->add_option("--n", a.n, "modulus N of A")->required();
  sub->add_option("--module", a.module, "M: JSON file or literal like 2,4")->required();
  sub->add_option("--coeff", a.coeff, "K: JSON file or literal like 2,4")->required();
}

Json rows(const MatZN& m) {
  Json j = Json::array();
  for (const Row& r : m.row_list()) j.push_back(r);
  return j;
}

int emit(const Globals& g, const std::string& text) {
  if (g.report.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    io::write_file(g.report, text + (text.empty() || text.back() != '\n' ? "\n" : ""));
  }
  return kPass;
}

int run_verify(const Globals& g, const std::vector<std::string>& pairs, unsigned threads,
               bool no_timing, const std::string& mutate) {
  verify::SuiteConfig cfg;
  cfg.seed = g.seed;
  cfg.max_order = g.max_order;
  cfg.threads = threads;
  cfg.timing = !no_timing;
  if (!pairs.empty()) {
    cfg.pairs.clear();
    for (const auto& p : pairs) {
      auto comma = p.find(',');
      if (comma == std::string::npos) throw io::ParseError("--pair expects N',N");
      cfg.pairs.emplace_back(std::stoll(p.substr(0, comma)), std::stoll(p.substr(comma + 1)));
    }
  }
  // Checks the output path before any work is done.
  if (!g.report.empty()) io::write_file(g.report, "");
  std::optional<hooks::ScopedFlip> flip;
  if (mutate == "cup-omega") flip.emplace(hooks::flip_cup_omega);
  else if (mutate == "projection") flip.emplace(hooks::flip_induced_projection);
  else if (!mutate.empty()) throw io::ParseError("--mutate expects cup-omega or projection");

  verify::SuiteResult r = verify::run_suite(cfg);
  std::string report = verify::report_json(r);
  if (!g.report.empty()) io::write_file(g.report, report);
  std::size_t fails = 0, skips = 0;
  for (std::size_t i = 0; i < r.sequences.size(); ++i) {
    bool f = r.sequences[i].verdict == verify::Verdict::Fail ||
             r.obstructions[i].verdict == verify::Verdict::Fail;
    if (f) {
      ++fails;
      std::cout << "FAIL " << r.sequences[i].label << ": "
                << (r.sequences[i].failure.empty() ? r.obstructions[i].failure : r.sequences[i].failure)
                << '\n';
    }
    skips += r.sequences[i].verdict == verify::Verdict::Skip;
  }
  for (const auto* s : {&r.butterflies, &r.cech})
    std::cout << (s->pass ? "PASS " : "FAIL ") << s->name << " (" << s->cases << " cases)"
              << (s->pass ? "" : ": " + s->failure) << '\n';
  std::cout << r.sequences.size() << " instances, " << fails << " failed, " << skips << " skipped: "
            << (r.pass() ? "PASS" : "FAIL") << '\n';
  return r.pass() ? kPass : kFail;
}

int run_illusie(const Globals& g, const ModuleArgs& a) {
  auto inst = verify::make_instance(a.nprime, a.n, io::parse_module(a.module, a.n),
                                    io::parse_module(a.coeff, a.n));
  auto r = verify::build_illusie_sequence(inst, g.max_order);
  emit(g, verify::sequence_json(r, false));
  return r.verdict == verify::Verdict::Fail ? kFail : kPass;
}

int run_ext(const Globals& g, std::size_t p, const ModuleArgs& a) {
  FPModule m = io::parse_module(a.module, a.n), k = io::parse_module(a.coeff, a.n);
  auto e = ext_group(p, m, k);
  Json j;
  j["p"] = p;
  j["invariant_factors"] = invariant_factors(e->module());
  j["order"] = e->module().order();
  return emit(g, j.dump(2));
}

int run_theta(const Globals& g, const ModuleArgs& a) {
  auto pair = make_square_zero_pair(a.nprime, a.n);
  ThetaMatrix t = theta_matrix(pair, io::parse_module(a.module, a.n), io::parse_module(a.coeff, a.n));
  Json j;
  j["ext1_Aprime"] = invariant_factors(t.ext->module());
  j["hom_JM_K"] = invariant_factors(t.hom.module);
  j["matrix"] = rows(t.map.matrix());
  return emit(g, j.dump(2));
}

int run_deform(const Globals& g, const ModuleArgs& a, const std::string& u_text) {
  auto pair = make_square_zero_pair(a.nprime, a.n);
  FPModule m = io::parse_module(a.module, a.n), k = io::parse_module(a.coeff, a.n);
  ModuleMap u;
  try {
    u = ModuleMap(j_tensor(pair, m), k, io::parse_matrix(u_text, a.n));
  } catch (const io::ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw io::ParseError(std::string("--u: ") + e.what());
  }
  Json j;
  j["obstruction_zero"] = class_of_two_extension(cup_omega(pair, m, u)).is_zero();
  auto d = solve_deformation(pair, m, u);
  j["solvable"] = d.has_value();
  if (d) {
    Json e;
    e["middle"] = invariant_factors(d->xi.E());
    e["i"] = rows(d->xi.i.matrix());
    e["p"] = rows(d->xi.p.matrix());
    e["theta_is_u"] = theta(pair, d->xi).equals(u);
    j["deformation"] = e;
  }
  return emit(g, j.dump(2));
}

int run_cech(const Globals& g, const std::string& path, std::size_t degree) {
  io::InstanceFile f = io::load_instance(path);
  if (f.covers.empty()) throw io::ParseError(path + ": no covers");
  Json out = Json::array();
  bool ok = true;
  for (const Cover& c : f.covers) {
    Json j;
    bool cover = is_cover(c.family, c.M);
    j["cover"] = cover;
    j["baby_exact"] = is_exact(baby_cech_family(c.M, c.family));
    if (cover) {
      bool ex = is_exact(cech_complex(c, degree).maps);
      bool hom = hom_cech_exactness(c, FPModule::cyclic(c.M.modulus(), c.M.modulus()), degree);
      j["cech_exact"] = ex;
      j["hom_ZN_exact"] = hom;
      ok = ok && ex && hom && j["baby_exact"].get<bool>();
    }
    out.push_back(j);
  }
  emit(g, out.dump(2));
  return ok ? kPass : kFail;
}

Json check_json(const Butterfly& b) {
  Json j;
  ButterflyCheck ok = validate_butterfly(b);
  j["valid"] = ok.valid;
  if (!ok.valid) j["failure"] = ok.failure;
  else j["over_identity"] = is_over_identity(b);
  return j;
}

const Butterfly& named(const io::InstanceFile& f, const std::string& name) {
  auto it = f.butterflies.find(name);
  if (it == f.butterflies.end()) throw io::ParseError("no butterfly named '" + name + "'");
  return it->second;
}

int run_butterfly(const Globals& g, const std::string& op, const std::string& path,
                  const std::vector<std::string>& names) {
  io::InstanceFile f = io::load_instance(path);
  if (op == "validate") {
    Json out;
    bool ok = true;
    for (const auto& [name, b] : f.butterflies) {
      if (!names.empty() && std::find(names.begin(), names.end(), name) == names.end()) continue;
      out[name] = check_json(b);
      ok = ok && out[name]["valid"].get<bool>();
    }
    emit(g, out.dump(2));
    return ok ? kPass : kFail;
  }
  Butterfly r;
  if (op == "invert") {
    if (names.size() != 1) throw io::ParseError("invert takes one --name");
    r = invert(named(f, names[0]));
  } else {
    if (names.size() != 2) throw io::ParseError("compose takes two --name (first, then second)");
    r = compose(named(f, names[0]), named(f, names[1]));
  }
  Json j = check_json(r);
  j["butterfly"] = Json::parse(io::butterfly_json(r));
  emit(g, j.dump(2));
  return j["valid"].get<bool>() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ext, deformation and butterfly verifier over Z/N"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--report", g.report, "write output to this path");
  app.add_option("--seed", g.seed, "seed for randomized sampling");
  app.add_option("--max-order", g.max_order, "element enumeration cap");

  auto* verify_cmd = app.add_subcommand("verify", "run the full suite over the instance family");
  std::vector<std::string> pairs;
  unsigned threads = 0;
  bool no_timing = false;
  std::string mutate;
  verify_cmd->add_option("--pair", pairs, "restrict to N',N (repeatable)");
  verify_cmd->add_option("--threads", threads, "worker threads (0: all cores)");
  verify_cmd->add_flag("--no-timing", no_timing, "omit timing fields");
  verify_cmd->add_option("--mutate", mutate, "flip a sign hook: cup-omega or projection")
      ->group("");

  ModuleArgs ma;
  auto* illusie_cmd = app.add_subcommand("illusie", "the exact sequence for one instance");
  add_module_args(illusie_cmd, ma, true);

  std::size_t p = 1;
  auto* ext_cmd = app.add_subcommand("ext", "Ext^p(M, K) over Z/N");
  ext_cmd->add_option("--p", p, "degree")->required()->check(CLI::Range(0, 2));
  add_module_args(ext_cmd, ma, false);

  auto* theta_cmd = app.add_subcommand("theta", "theta: Ext1_A'(M, K) -> Hom_A(J⊗M, K)");
  add_module_args(theta_cmd, ma, true);

  std::string u_text;
  auto* deform_cmd = app.add_subcommand("deform", "decide and build a deformation for u");
  add_module_args(deform_cmd, ma, true);
  deform_cmd->add_option("--u", u_text, "matrix of u: J⊗M -> K, e.g. [[1]]")->required();

  std::string cover_path;
  std::size_t degree = 2;
  auto* cech_cmd = app.add_subcommand("cech", "cover and Čech exactness checks");
  cech_cmd->add_option("--cover", cover_path, "instance JSON file with covers")->required();
  cech_cmd->add_option("--degree", degree, "top Čech degree");

  std::string bf_op, bf_input;
  std::vector<std::string> bf_names;
  auto* bf_cmd = app.add_subcommand("butterfly", "validate, compose or invert butterflies");
  bf_cmd->add_option("op", bf_op, "compose, invert or validate")
      ->required()
      ->check(CLI::IsMember({"compose", "invert", "validate"}));
  bf_cmd->add_option("--input", bf_input, "instance JSON file with butterflies")->required();
  bf_cmd->add_option("--name", bf_names, "butterfly names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify_cmd) return run_verify(g, pairs, threads, no_timing, mutate);
    if (*illusie_cmd) return run_illusie(g, ma);
    if (*ext_cmd) return run_ext(g, p, ma);
    if (*theta_cmd) return run_theta(g, ma);
    if (*deform_cmd) return run_deform(g, ma, u_text);
    if (*cech_cmd) return run_cech(g, cover_path, degree);
    if (*bf_cmd) return run_butterfly(g, bf_op, bf_input, bf_names);
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "verification error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
