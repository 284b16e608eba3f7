#include "homalg/cech.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace homalg {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

ModuleMap must(std::optional<ModuleMap> m, const char* what) {
  if (!m) throw std::logic_error(what);
  return std::move(*m);
}

std::vector<FPModule> sources(const std::vector<ModuleMap>& maps) {
  std::vector<FPModule> out;
  for (const auto& f : maps) out.push_back(f.source());
  return out;
}

// Hom(B, K) -> Hom(A, K) for f: A -> B.
ModuleMap dualize(const ModuleMap& f, const FPModule& k) {
  HomModule ha = hom_group(f.source(), k);
  HomModule hb = hom_group(f.target(), k);
  MatZN rows(k.modulus(), hb.module.ngens(), ha.module.ngens());
  for (std::size_t g = 0; g < hb.module.ngens(); ++g)
    rows.set_row(g, ha.from_map(compose(hb.to_map(hb.module.unit_vector(g)), f)));
  return ModuleMap(hb.module, ha.module, rows);
}

std::vector<FiberProduct> tuple_pieces(const Cover& c,
                                       const std::vector<std::vector<std::size_t>>& tuples) {
  std::vector<FiberProduct> out;
  for (const auto& t : tuples) {
    std::vector<ModuleMap> maps;
    for (std::size_t i : t) maps.push_back(c.family[i]);
    out.push_back(fiber_product(maps));
  }
  return out;
}

// Drops factor j: the face N_{i_0..i_p} -> N_{i_0..^i_j..i_p}.
ModuleMap drop_factor(const FiberProduct& from, const FiberProduct& to, std::size_t j) {
  std::vector<ModuleMap> keep;
  for (std::size_t k = 0; k < from.projections.size(); ++k)
    if (k != j) keep.push_back(from.projections[k]);
  std::vector<FPModule> factors;
  for (const auto& pr : to.projections) factors.push_back(pr.target());
  DirectSum target = direct_sum(factors);
  return must(lift(map_into_sum(target, keep), to.inclusion), "cech: face does not lift");
}

}  // namespace

bool is_cover(const std::vector<ModuleMap>& family, const FPModule& m) {
  for (const auto& f : family) require(f.target() == m, "is_cover: map does not land in M");
  // A simultaneous lift of the generators of M to N_i makes N_i -> M onto,
  // and then every tuple lifts to that same N_i.
  for (const auto& f : family)
    if (is_surjective(f)) return true;
  return false;
}

Cover make_cover(const FPModule& m, std::vector<ModuleMap> family) {
  require(is_cover(family, m), "make_cover: family does not cover M");
  return {m, std::move(family)};
}

FreeOnSet free_on_set(Int n, std::size_t s) { return {s, FPModule::free(n, s)}; }

Cover tautological_cover(const FPModule& m) {
  std::vector<Row> elts = m.elements();
  FreeOnSet f = free_on_set(m.modulus(), elts.size());
  return make_cover(m, {ModuleMap(f.module, m, MatZN::from_rows(m.modulus(), m.ngens(), elts))});
}

FiberProduct fiber_product(const std::vector<ModuleMap>& maps) {
  require(!maps.empty(), "fiber_product: empty family");
  const FPModule& m = maps.front().target();
  for (const auto& f : maps) require(f.target() == m, "fiber_product: targets differ");
  const std::size_t p = maps.size() - 1;
  DirectSum factors = direct_sum(sources(maps));
  DirectSum diffs = direct_sum(std::vector<FPModule>(p, m));
  // (x_k) -> (f_k x_k - f_{k+1} x_{k+1})_k
  std::vector<ModuleMap> gs;
  for (std::size_t k = 0; p > 0 && k <= p; ++k) {
    ModuleMap g = ModuleMap::zero(maps[k].source(), diffs.module);
    if (k < p) g = g + compose(diffs.injections[k], maps[k]);
    if (k > 0) g = g - compose(diffs.injections[k - 1], maps[k]);
    gs.push_back(g);
  }
  if (p == 0) return {maps[0].source(), factors.injections[0], {ModuleMap::identity(maps[0].source())}};
  KernelResult ker = kernel_module(map_out_of_sum(factors, gs));
  FiberProduct out{ker.module, ker.inclusion, {}};
  for (const auto& pr : factors.projections) out.projections.push_back(compose(pr, ker.inclusion));
  return out;
}

Complex baby_cech_family(const FPModule& m, const std::vector<ModuleMap>& family) {
  require(!family.empty(), "baby_cech: empty family");
  for (const auto& f : family) require(f.target() == m, "baby_cech: map does not land in M");
  const std::size_t n = family.size();
  DirectSum mid = direct_sum(sources(family));
  std::vector<FiberProduct> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pairs.push_back(fiber_product({family[i], family[j]}));
  std::vector<FPModule> pair_mods;
  for (const auto& fp : pairs) pair_mods.push_back(fp.module);
  DirectSum left = direct_sum(pair_mods);
  std::vector<ModuleMap> diffs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const FiberProduct& fp = pairs[i * n + j];
      diffs.push_back(compose(mid.injections[i], fp.projections[0]) -
                      compose(mid.injections[j], fp.projections[1]));
    }
  return {map_out_of_sum(left, diffs), map_out_of_sum(mid, family),
          ModuleMap::zero(m, FPModule::zero(m.modulus()))};
}

Complex baby_cech(const Cover& c) {
  require(is_cover(c.family, c.M), "baby_cech: family does not cover M");
  return baby_cech_family(c.M, c.family);
}

std::vector<std::vector<std::size_t>> cech_tuples(std::size_t ncover, std::size_t p) {
  std::vector<std::vector<std::size_t>> out;
  if (ncover == 0) return out;
  std::vector<std::size_t> t(p + 1, 0);
  while (true) {
    out.push_back(t);
    // next weakly increasing tuple in lexicographic order
    std::size_t k = p + 1;
    while (k > 0 && t[k - 1] == ncover - 1) --k;
    if (k == 0) break;
    ++t[k - 1];
    for (std::size_t l = k; l <= p; ++l) t[l] = t[k - 1];
  }
  return out;
}

CechComplex cech_complex(const Cover& c, std::size_t d) {
  require(is_cover(c.family, c.M), "cech_complex: family does not cover M");
  const std::size_t n = c.family.size();
  std::vector<std::vector<std::vector<std::size_t>>> tuples;
  std::vector<std::vector<FiberProduct>> pieces;
  std::vector<DirectSum> sums;
  CechComplex out;
  for (std::size_t p = 0; p <= d; ++p) {
    tuples.push_back(cech_tuples(n, p));
    pieces.push_back(tuple_pieces(c, tuples.back()));
    std::vector<FPModule> mods;
    for (const auto& fp : pieces.back()) mods.push_back(fp.module);
    sums.push_back(direct_sum(mods));
    out.terms.push_back(sums.back().module);
  }
  for (std::size_t p = d; p >= 1; --p) {
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < tuples[p - 1].size(); ++k) index[tuples[p - 1][k]] = k;
    ModuleMap dp = ModuleMap::zero(out.terms[p], out.terms[p - 1]);
    for (std::size_t k = 0; k < tuples[p].size(); ++k)
      for (std::size_t j = 0; j <= p; ++j) {
        std::vector<std::size_t> face = tuples[p][k];
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(j));
        std::size_t idx = index.at(face);
        ModuleMap term = compose(sums[p - 1].injections[idx],
                                 compose(drop_factor(pieces[p][k], pieces[p - 1][idx], j),
                                         sums[p].projections[k]));
        dp = j % 2 == 0 ? dp + term : dp - term;
      }
    out.maps.push_back(dp);
  }
  std::vector<ModuleMap> aug;
  for (std::size_t k = 0; k < n; ++k) aug.push_back(compose(c.family[k], pieces[0][k].projections[0]));
  out.maps.push_back(map_out_of_sum(sums[0], aug));
  out.maps.push_back(ModuleMap::zero(c.M, FPModule::zero(c.M.modulus())));
  return out;
}

ShearingIso shearing_iso(const ModuleMap& f, std::size_t p) {
  require(is_surjective(f), "shearing_iso: T -> M is not onto");
  const FPModule& t = f.source();
  KernelResult s = kernel_module(f);
  auto model_of = [&](std::size_t q) {
    std::vector<FPModule> mods{t};
    for (std::size_t l = 0; l < q; ++l) mods.push_back(s.module);
    return direct_sum(mods);
  };
  DirectSum model = model_of(p);
  ShearingIso out;
  out.model = model.module;
  out.fiber = fiber_product(std::vector<ModuleMap>(p + 1, f));

  DirectSum factors = direct_sum(std::vector<FPModule>(p + 1, t));
  std::vector<ModuleMap> partial;
  for (std::size_t k = 0; k <= p; ++k) {
    ModuleMap sum = model.projections[0];
    for (std::size_t l = 1; l <= k; ++l) sum = sum + compose(s.inclusion, model.projections[l]);
    partial.push_back(sum);
  }
  out.to_fiber = must(lift(map_into_sum(factors, partial), out.fiber.inclusion),
                      "shearing_iso: partial sums leave the fiber product");

  std::vector<ModuleMap> diffs{out.fiber.projections[0]};
  for (std::size_t k = 1; k <= p; ++k)
    diffs.push_back(must(lift(out.fiber.projections[k] - out.fiber.projections[k - 1], s.inclusion),
                         "shearing_iso: difference not in S"));
  out.from_fiber = map_into_sum(model, diffs);

  if (p == 0) return out;
  DirectSum lower = model_of(p - 1);
  for (std::size_t i = 0; i <= p; ++i) {
    // component maps model_p -> each summand of model_{p-1}
    std::vector<ModuleMap> comps;
    if (i == 0) {
      comps.push_back(model.projections[0] + compose(s.inclusion, model.projections[1]));
      for (std::size_t l = 2; l <= p; ++l) comps.push_back(model.projections[l]);
    } else {
      comps.push_back(model.projections[0]);
      for (std::size_t l = 1; l < p; ++l) {
        if (l < i) comps.push_back(model.projections[l]);
        else if (l == i) comps.push_back(model.projections[l] + model.projections[l + 1]);
        else comps.push_back(model.projections[l + 1]);
      }
    }
    out.faces.push_back(map_into_sum(lower, comps));
  }
  return out;
}

bool is_injective(const FPModule& k) {
  const Int n = k.modulus();
  ModuleMap id = ModuleMap::identity(k);
  for (Int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    // a map (d) -> K is an element killed by N/d; it extends iff it lies in dK
    KernelResult torsion = kernel_module(id.scaled(n / d));
    ModuleMap times_d = id.scaled(d);
    for (std::size_t g = 0; g < torsion.module.ngens(); ++g)
      if (!preimage(times_d, torsion.inclusion.apply(torsion.module.unit_vector(g)))) return false;
  }
  return true;
}

bool hom_cech_exactness(const Cover& c, const FPModule& k, std::size_t d) {
  require(k.modulus() == c.M.modulus(), "hom_cech_exactness: modulus mismatch");
  require(is_injective(k), "hom_cech_exactness: K is not injective");
  CechComplex cc = cech_complex(c, d);
  Complex dual;
  for (auto it = cc.maps.rbegin(); it != cc.maps.rend(); ++it) dual.push_back(dualize(*it, k));
  return is_exact(dual);
}

std::vector<std::pair<std::size_t, std::size_t>> fiber_pairs(const std::vector<std::size_t>& s_to_r,
                                                             const std::vector<std::size_t>& t_to_r) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t s = 0; s < s_to_r.size(); ++s)
    for (std::size_t t = 0; t < t_to_r.size(); ++t)
      if (s_to_r[s] == t_to_r[t]) out.emplace_back(s, t);
  return out;
}

FiberProductLift lift_fiber_product(Int n, const std::vector<std::size_t>& s_to_r,
                                    const std::vector<std::size_t>& t_to_r, std::size_t r_size,
                                    const Row& a, const Row& b) {
  require(a.size() == s_to_r.size() && b.size() == t_to_r.size(), "lift_fiber_product: size mismatch");
  std::vector<std::vector<std::size_t>> sr(r_size), tr(r_size);
  for (std::size_t s = 0; s < s_to_r.size(); ++s) {
    require(s_to_r[s] < r_size, "lift_fiber_product: S -> R out of range");
    sr[s_to_r[s]].push_back(s);
  }
  for (std::size_t t = 0; t < t_to_r.size(); ++t) {
    require(t_to_r[t] < r_size, "lift_fiber_product: T -> R out of range");
    tr[t_to_r[t]].push_back(t);
  }
  FiberProductLift out;
  out.pairs = fiber_pairs(s_to_r, t_to_r);
  out.coefficients.assign(out.pairs.size(), 0);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t k = 0; k < out.pairs.size(); ++k) index[out.pairs[k]] = k;

  for (std::size_t r = 0; r < r_size; ++r) {
    Int za = 0, zb = 0;
    for (std::size_t s : sr[r]) za = mod(za + a[s], n);
    for (std::size_t t : tr[r]) zb = mod(zb + b[t], n);
    require(za == zb, "lift_fiber_product: section is not in the fiber product");
    if (sr[r].empty() || tr[r].empty()) {
      for (std::size_t s : sr[r])
        if (mod(a[s], n) != 0) throw std::domain_error("lift_fiber_product: no pair over r");
      for (std::size_t t : tr[r])
        if (mod(b[t], n) != 0) throw std::domain_error("lift_fiber_product: no pair over r");
      continue;
    }
    // Pad the shorter side by repeating its first element with coefficient 0.
    const std::size_t len = std::max(sr[r].size(), tr[r].size());
    std::vector<std::size_t> ss(len, sr[r][0]), ts(len, tr[r][0]);
    Row x(len, 0), y(len, 0);
    for (std::size_t i = 0; i < sr[r].size(); ++i) ss[i] = sr[r][i], x[i] = a[sr[r][i]];
    for (std::size_t j = 0; j < tr[r].size(); ++j) ts[j] = tr[r][j], y[j] = b[tr[r][j]];
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j < len; ++j) {
        Int c = 0;
        if (i == 0 && j == 0) c = za;
        else if (i == j) c = x[i] + y[i];
        else if (j == 0) c = -y[i];
        else if (i == 0) c = -x[j];
        else continue;
        Int& slot = out.coefficients[index.at({ss[i], ts[j]})];
        slot = mod(slot + c, n);
      }
  }
  auto [pa, pb] = project_pairs(n, out, a.size(), b.size());
  for (std::size_t s = 0; s < a.size(); ++s)
    if (pa[s] != mod(a[s], n)) throw std::logic_error("lift_fiber_product: wrong S projection");
  for (std::size_t t = 0; t < b.size(); ++t)
    if (pb[t] != mod(b[t], n)) throw std::logic_error("lift_fiber_product: wrong T projection");
  return out;
}

std::pair<Row, Row> project_pairs(Int n, const FiberProductLift& x, std::size_t s_size,
                                  std::size_t t_size) {
  Row a(s_size, 0), b(t_size, 0);
  for (std::size_t k = 0; k < x.pairs.size(); ++k) {
    a[x.pairs[k].first] = mod(a[x.pairs[k].first] + x.coefficients[k], n);
    b[x.pairs[k].second] = mod(b[x.pairs[k].second] + x.coefficients[k], n);
  }
  return {a, b};
}

}  // namespace homalg
