#include "homalg/squarezero.hpp"

#include <stdexcept>

#include "homalg/hooks.hpp"

namespace homalg {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

ModuleMap must(std::optional<ModuleMap> m, const char* what) {
  if (!m) throw std::logic_error(what);
  return std::move(*m);
}

MatZN reduce_to(const MatZN& a, Int n) { return MatZN(n, a.rows(), a.cols(), a.entries()); }

struct CupData {
  TwoExtension two;
  ModuleMap Lbar_to_X;
};

CupData cup_omega_full(const Omega& w, const ModuleMap& u) {
  require(u.source() == w.two.K(), "cup_omega: source of u is not J⊗M");
  ModuleMap g = hooks::flip_cup_omega ? -u : u;
  PushoutResult po = pushout_extension_with_map(splice_pieces(w.two).first, g);
  return {make_two_extension(po.ext.i, compose(w.two.P_to_Y(), po.ext.p), w.two.c), po.middle};
}

}  // namespace

SquareZeroPair make_square_zero_pair(Int nprime, Int n) {
  require(n >= 2 && nprime >= n, "square-zero pair: need 2 <= N <= N'");
  require(nprime % n == 0, "square-zero pair: N must divide N'");
  require((n * n) % nprime == 0, "square-zero pair: N' must divide N^2");
  return {nprime, n, FPModule::cyclic(nprime, nprime / n)};
}

FPModule j_tensor(const SquareZeroPair& pair, const FPModule& m) {
  require(m.modulus() == pair.n, "j_tensor: module is not over Z/N");
  TensorProduct t = tensor(pair.J, restrict_scalars(m, pair.nprime));
  if (!is_killed_by(t.module, pair.n)) throw std::logic_error("j_tensor: J⊗M not killed by N");
  return descend_scalars(t.module, pair.n);
}

ModuleMap theta(const SquareZeroPair& pair, const Extension& xi) {
  require(xi.E().modulus() == pair.nprime, "theta: extension is not over Z/N'");
  require(is_killed_by(xi.K(), pair.n) && is_killed_by(xi.M(), pair.n),
          "theta: K and M must be killed by N");
  FPModule k = descend_scalars(xi.K(), pair.n);
  FPModule m = descend_scalars(xi.M(), pair.n);
  MatZN rows(pair.n, m.ngens(), k.ngens());
  for (std::size_t g = 0; g < m.ngens(); ++g) {
    auto lift = preimage(xi.p, xi.M().unit_vector(g));
    if (!lift) throw std::invalid_argument("theta: p is not surjective");
    auto kk = preimage(xi.i, vec_scale(*lift, pair.n, pair.nprime));
    if (!kk) throw std::invalid_argument("theta: N·lift is not in K");
    rows.set_row(g, reduce_to(MatZN::from_rows(pair.nprime, k.ngens(), {*kk}), pair.n).row(0));
  }
  return ModuleMap(j_tensor(pair, m), k, rows);
}

Extension restrict_ext(const SquareZeroPair& pair, const Extension& x) {
  return make_extension(restrict_scalars(x.i, pair.nprime), restrict_scalars(x.p, pair.nprime));
}

Omega omega_data(const SquareZeroPair& pair, const FPModule& m) {
  return omega_data(pair, m, MatZN::identity(pair.nprime, m.ngens()));
}

Omega omega_data(const SquareZeroPair& pair, const FPModule& m, const MatZN& cover) {
  require(m.modulus() == pair.n, "omega: module is not over Z/N");
  const Int np = pair.nprime, n = pair.n;
  FPModule mres = restrict_scalars(m, np);
  FPModule h = FPModule::free(np, cover.rows());
  ModuleMap aug(h, mres, cover);
  require(is_surjective(aug), "omega: cover is not surjective");
  KernelResult l = kernel_module(aug);
  // L/JL = L/NL, then viewed over Z/N.
  CokernelResult lq = cokernel_module(ModuleMap::identity(l.module).scaled(n));
  FPModule lbar = descend_scalars(lq.module, n);
  FPModule hbar = FPModule::free(n, h.ngens());
  ModuleMap l_to_lbar(l.module, restrict_scalars(lbar, np), lq.projection.matrix());
  ModuleMap h_to_hbar(h, restrict_scalars(hbar, np), MatZN::identity(np, h.ngens()));
  ModuleMap lbar_to_hbar = descend_scalars(
      must(factor_through(compose(h_to_hbar, l.inclusion), l_to_lbar), "omega: L̄ -> H̄"), n);
  ModuleMap hbar_to_m(hbar, m, reduce_to(cover, n));
  FPModule jm = j_tensor(pair, m);
  MatZN jrows(n, m.ngens(), lbar.ngens());
  for (std::size_t g = 0; g < m.ngens(); ++g) {
    auto s = preimage(aug, mres.unit_vector(g));
    if (!s) throw std::logic_error("omega: generator does not lift to H");
    auto ell = preimage(l.inclusion, vec_scale(*s, n, np));
    if (!ell) throw std::logic_error("omega: N·lift is not in L");
    Row v = l_to_lbar.apply(*ell);
    jrows.set_row(g, reduce_to(MatZN::from_rows(np, v.size(), {v}), n).row(0));
  }
  ModuleMap j_to_lbar(jm, lbar, jrows);
  TwoExtension two;
  try {
    two = make_two_extension(j_to_lbar, lbar_to_hbar, hbar_to_m);
  } catch (const std::invalid_argument& e) {
    throw std::logic_error(std::string("omega: J⊗M -> ker(L̄ -> H̄) is not an isomorphism: ") +
                           e.what());
  }
  return {two, m, h, aug, l.inclusion, l_to_lbar, h_to_hbar};
}

TwoExtension omega(const SquareZeroPair& pair, const FPModule& m) {
  return omega_data(pair, m).two;
}

TwoExtension cup_omega(const SquareZeroPair& pair, const FPModule& m, const ModuleMap& u) {
  return cup_omega_full(omega_data(pair, m), u).two;
}

ThetaMatrix theta_matrix(const SquareZeroPair& pair, const FPModule& m, const FPModule& k) {
  require(m.modulus() == pair.n && k.modulus() == pair.n, "theta_matrix: modules not over Z/N");
  auto g = ext_group(1, restrict_scalars(m, pair.nprime), restrict_scalars(k, pair.nprime));
  HomModule hom = hom_group(j_tensor(pair, m), k);
  FPModule hres = restrict_scalars(hom.module, pair.nprime);
  MatZN rows(pair.nprime, g->module().ngens(), hres.ngens());
  for (std::size_t i = 0; i < g->module().ngens(); ++i) {
    Extension xi = extension_of_class(g->element_class(g->module().unit_vector(i)));
    Row r = hom.from_map(theta(pair, xi));
    rows.set_row(i, MatZN::from_rows(pair.nprime, hres.ngens(), {r}).row(0));
  }
  return {g, hom, ModuleMap(g->module(), hres, rows)};
}

std::optional<Deformation> solve_deformation(const SquareZeroPair& pair, const FPModule& m,
                                             const ModuleMap& u) {
  ThetaMatrix tm = theta_matrix(pair, m, u.target());
  Row want = tm.hom.from_map(u);
  auto x = preimage(tm.map, MatZN::from_rows(pair.nprime, want.size(), {want}).row(0));
  bool obstructed = !class_of_two_extension(cup_omega(pair, m, u)).is_zero();
  if (x.has_value() == obstructed)
    throw std::logic_error("solve_deformation: theta image and cup_omega class disagree");
  if (!x) return std::nullopt;
  Extension xi = extension_of_class(tm.ext->element_class(*x));
  if (!theta(pair, xi).equals(u)) throw std::logic_error("solve_deformation: theta(xi) != u");
  return Deformation{u, xi};
}

Extension extension_from_splitting(const SquareZeroPair& pair, const FPModule& m,
                                   const ModuleMap& u, const Butterfly& b) {
  Omega w = omega_data(pair, m);
  CupData cup = cup_omega_full(w, u);
  require(b.source == cup.two, "extension_from_splitting: butterfly source is not cup_omega(u)");
  require(is_trivial_two_extension(b.target), "extension_from_splitting: target is not trivial");
  require(is_over_identity(b), "extension_from_splitting: invalid butterfly");
  const Int np = pair.nprime;
  auto res = [np](const ModuleMap& f) { return restrict_scalars(f, np); };
  // L -> L̄ -> X -> Q over Z/N'.
  ModuleMap ell = compose(res(compose(b.nw, cup.Lbar_to_X)), w.L_to_Lbar);
  DirectSum s = direct_sum({w.H, restrict_scalars(b.Q(), np)});
  CokernelResult po = cokernel_module(map_into_sum(s, {w.L_to_H, -ell}));
  ModuleMap to_hbar = must(factor_through(map_out_of_sum(s, {w.H_to_Hbar, res(b.ne)}),
                                          po.projection),
                           "extension_from_splitting: H ⊕_L Q -> H̄");
  ModuleMap q_zero = ModuleMap::zero(s.injections[1].source(), w.cover.target());
  ModuleMap h = must(factor_through(map_out_of_sum(s, {w.cover, q_zero}), po.projection),
                     "extension_from_splitting: h");
  KernelResult mp = kernel_module(to_hbar);
  ModuleMap k_in = must(lift(compose(po.projection, compose(s.injections[1], res(b.sw))),
                             mp.inclusion),
                        "extension_from_splitting: K -> M'");
  Extension xi = make_extension(k_in, compose(h, mp.inclusion));
  if (!theta(pair, xi).equals(u)) throw std::logic_error("extension_from_splitting: theta(xi) != u");
  return xi;
}

}  // namespace homalg
