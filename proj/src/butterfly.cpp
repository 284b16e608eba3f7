#include "homalg/butterfly.hpp"

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

bool same_map(const ModuleMap& f, const ModuleMap& g) {
  return f.source() == g.source() && f.target() == g.target() && f.equals(g);
}

// Keeps the middle module small; wings are transported along the iso.
Butterfly shrink(Butterfly b) {
  Simplified s = simplify(b.Q());
  b.nw = compose(s.to_simple, b.nw);
  b.sw = compose(s.to_simple, b.sw);
  b.ne = compose(b.ne, s.from_simple);
  b.se = compose(b.se, s.from_simple);
  return b;
}

struct Restricted {
  TwoExtension t;
  ModuleMap to_Y;  // Y x_M N -> Y
};

Restricted restrict_with_map(const TwoExtension& t, const ModuleMap& f) {
  require(f.target() == t.M(), "restrict_two_extension: target mismatch");
  Extension m = splice_pieces(t).second;
  PullbackResult pb = pullback_extension_with_map(m, f);
  return {make_two_extension(t.a, compose(pb.ext.i, t.to_P()), pb.ext.p), pb.middle};
}

}  // namespace

// ---------------------------------------------------------------- 2-extensions

const ModuleMap& TwoExtension::to_P() const {
  if (!p_) throw std::logic_error("TwoExtension: not built by make_two_extension");
  return p_->first;
}

const ModuleMap& TwoExtension::P_to_Y() const {
  if (!p_) throw std::logic_error("TwoExtension: not built by make_two_extension");
  return p_->second;
}

bool TwoExtension::operator==(const TwoExtension& o) const {
  return same_map(a, o.a) && same_map(b, o.b) && same_map(c, o.c);
}

TwoExtension make_two_extension(ModuleMap a, ModuleMap b, ModuleMap c) {
  require(a.target() == b.source() && b.target() == c.source(),
          "make_two_extension: maps do not compose");
  const Int n = a.source().modulus();
  Complex cx{ModuleMap::zero(FPModule::zero(n), a.source()), a, b, c,
             ModuleMap::zero(c.target(), FPModule::zero(n))};
  require(is_exact(cx), "make_two_extension: sequence is not exact");
  CokernelResult p = cokernel_module(a);
  ModuleMap into = must(factor_through(b, p.projection), "make_two_extension: P");
  TwoExtension t;
  t.a = std::move(a);
  t.b = std::move(b);
  t.c = std::move(c);
  t.p_ = std::make_shared<const std::pair<ModuleMap, ModuleMap>>(p.projection, into);
  return t;
}

TwoExtension trivial_two_extension(const FPModule& m, const FPModule& k) {
  return make_two_extension(ModuleMap::identity(k), ModuleMap::zero(k, m),
                            ModuleMap::identity(m));
}

bool is_trivial_two_extension(const TwoExtension& t) {
  return t.X() == t.K() && t.Y() == t.M() && same_map(t.a, ModuleMap::identity(t.K())) &&
         t.b.is_zero() && same_map(t.c, ModuleMap::identity(t.M()));
}

TwoExtension yoneda_splice(const Extension& gamma, const Extension& m) {
  require(gamma.M() == m.K(), "yoneda_splice: P mismatch");
  return make_two_extension(gamma.i, compose(m.i, gamma.p), m.p);
}

std::pair<Extension, Extension> splice_pieces(const TwoExtension& t) {
  return {make_extension(t.a, t.to_P()), make_extension(t.P_to_Y(), t.c)};
}

ExtClass class_of_two_extension(const TwoExtension& t) {
  auto res = cached_resolution(t.M(), 3);
  ModuleMap y0 = must(lift(res->augmentation(), t.c), "class_of_two_extension: F0");
  ModuleMap x1 = must(lift(compose(y0, res->differential(1)), t.b), "class_of_two_extension: F1");
  ModuleMap k2 = must(lift(compose(x1, res->differential(2)), t.a), "class_of_two_extension: F2");
  return ext_group(2, t.M(), t.K())->make_class(k2);
}

TwoExtension restrict_two_extension(const TwoExtension& t, const ModuleMap& f) {
  return restrict_with_map(t, f).t;
}

TwoExtension pushout_two_extension(const TwoExtension& t, const ModuleMap& g) {
  require(g.source() == t.K(), "pushout_two_extension: source mismatch");
  PushoutResult po = pushout_extension_with_map(splice_pieces(t).first, g);
  return make_two_extension(po.ext.i, compose(t.P_to_Y(), po.ext.p), t.c);
}

TwoExtension baer_sum_two(const TwoExtension& x, const TwoExtension& y) {
  require(x.K() == y.K() && x.M() == y.M(), "baer_sum_two: boundary mismatch");
  DirectSum k = direct_sum({x.K(), y.K()}), xx = direct_sum({x.X(), y.X()}),
            yy = direct_sum({x.Y(), y.Y()}), m = direct_sum({x.M(), y.M()});
  TwoExtension s = make_two_extension(sum_of_maps(k, xx, {x.a, y.a}),
                                      sum_of_maps(xx, yy, {x.b, y.b}),
                                      sum_of_maps(yy, m, {x.c, y.c}));
  ModuleMap id_m = ModuleMap::identity(x.M()), id_k = ModuleMap::identity(x.K());
  TwoExtension r = restrict_two_extension(s, map_into_sum(m, {id_m, id_m}));
  return pushout_two_extension(r, map_out_of_sum(k, {id_k, id_k}));
}

ChainMap make_chain_map(TwoExtension s, TwoExtension t, ModuleMap fX, ModuleMap fY,
                        ModuleMap fM) {
  require(s.K() == t.K(), "make_chain_map: K differs");
  require(fX.source() == s.X() && fX.target() == t.X() && fY.source() == s.Y() &&
              fY.target() == t.Y() && fM.source() == s.M() && fM.target() == t.M(),
          "make_chain_map: shape mismatch");
  require(compose(fX, s.a).equals(t.a), "make_chain_map: K square");
  require(compose(t.b, fX).equals(compose(fY, s.b)), "make_chain_map: X square");
  require(compose(t.c, fY).equals(compose(fM, s.c)), "make_chain_map: Y square");
  return {std::move(s), std::move(t), std::move(fX), std::move(fY), std::move(fM)};
}

// ---------------------------------------------------------------- butterflies

namespace {

ButterflyCheck check_butterfly(const Butterfly& b, const ModuleMap* f) {
  const Int n = b.source.K().modulus();
  for (const FPModule* m : {&b.target.K(), &b.Q(), &b.source.M(), &b.target.M()})
    require(m->modulus() == n, "validate_butterfly: modulus mismatch");
  auto fail = [](std::string why) { return ButterflyCheck{false, std::move(why)}; };
  const TwoExtension& s = b.source;
  const TwoExtension& t = b.target;
  if (!(s.K() == t.K())) return fail("K differs between source and target");
  if (!(b.nw.source() == s.X()) || !(b.nw.target() == b.Q())) return fail("NW wing shape");
  if (!(b.sw.source() == t.X()) || !(b.sw.target() == b.Q())) return fail("SW wing shape");
  if (!(b.ne.source() == b.Q()) || !(b.ne.target() == s.Y())) return fail("NE wing shape");
  if (!(b.se.source() == b.Q()) || !(b.se.target() == t.Y())) return fail("SE wing shape");
  if (!is_short_exact(b.sw, b.ne)) return fail("diagonal X' -> Q -> Y not short exact");
  if (!f) {
    if (!is_short_exact(b.nw, b.se)) return fail("diagonal X -> Q -> Y' not short exact");
  } else {
    if (!(f->source() == s.M()) || !(f->target() == t.M())) return fail("base map shape");
    ModuleMap cne = compose(s.c, b.ne);
    if (!compose(t.c, b.se).equals(-compose(*f, cne))) return fail("base map is not -f");
    // Q -> Y' x_M N is (se, -c∘ne).
    DirectSum yn = direct_sum({t.Y(), s.M()});
    KernelResult pb = kernel_module(map_out_of_sum(yn, {t.c, -*f}));
    auto into = lift(map_into_sum(yn, {b.se, -cne}), pb.inclusion);
    if (!into) return fail("Q does not map to Y' x_M N");
    if (!is_short_exact(b.nw, *into)) return fail("diagonal X -> Q -> Y'|N not short exact");
  }
  if (!compose(b.ne, b.nw).equals(s.b)) return fail("North diamond");
  if (!compose(b.nw, s.a).equals(compose(b.sw, t.a))) return fail("West diamond");
  if (!compose(b.se, b.sw).equals(t.b)) return fail("South diamond");
  return {};
}

}  // namespace

ButterflyCheck validate_butterfly(const Butterfly& b) { return check_butterfly(b, nullptr); }

ButterflyCheck validate_butterfly_over(const Butterfly& b, const ModuleMap& f) {
  return check_butterfly(b, &f);
}

ModuleMap base_map(const Butterfly& b) {
  return must(factor_through(compose(b.target.c, b.se), compose(b.source.c, b.ne)),
              "base_map: M' map does not factor");
}

bool is_over_identity(const Butterfly& b) {
  if (!validate_butterfly(b) || !(b.source.M() == b.target.M())) return false;
  return base_map(b).equals(-ModuleMap::identity(b.source.M()));
}

Butterfly induced_butterfly(const ChainMap& f) {
  const TwoExtension& s = f.source;
  const TwoExtension& t = f.target;
  DirectSum q = direct_sum({t.X(), s.Y()});
  ModuleMap fy = hooks::flip_induced_projection ? f.fY : -f.fY;
  return {s, t, map_into_sum(q, {f.fX, s.b}), q.injections[0], q.projections[1],
          map_out_of_sum(q, {t.b, fy})};
}

Butterfly identity_butterfly(const TwoExtension& t) {
  return induced_butterfly(make_chain_map(t, t, ModuleMap::identity(t.X()),
                                          ModuleMap::identity(t.Y()),
                                          ModuleMap::identity(t.M())));
}

Butterfly compose(const Butterfly& b1, const Butterfly& b2) {
  require(b1.target == b2.source, "compose: middle 2-extensions differ");
  DirectSum s = direct_sum({b1.Q(), b2.Q()});
  KernelResult f = kernel_module(map_out_of_sum(s, {b1.se, -b2.ne}));
  auto into_f = [&](const ModuleMap& g) { return must(lift(g, f.inclusion), "compose: lift"); };
  ModuleMap xp = into_f(map_into_sum(s, {b1.sw, b2.nw}));
  CokernelResult c = cokernel_module(xp);
  Butterfly out{b1.source,
                b2.target,
                compose(c.projection, into_f(compose(s.injections[0], b1.nw))),
                compose(c.projection, into_f(compose(s.injections[1], -b2.sw))),
                must(factor_through(compose(b1.ne, compose(s.projections[0], f.inclusion)),
                                    c.projection),
                     "compose: NE"),
                must(factor_through(compose(-b2.se, compose(s.projections[1], f.inclusion)),
                                    c.projection),
                     "compose: SE")};
  out = shrink(std::move(out));
  ButterflyCheck ok = validate_butterfly_over(out, -base_map(out));
  if (!ok) throw std::runtime_error("compose: composite fails validation: " + ok.failure);
  return out;
}

Butterfly invert(const Butterfly& b) { return {b.target, b.source, b.sw, b.nw, b.se, b.ne}; }

std::optional<ModuleMap> find_two_isomorphism(const Butterfly& b1, const Butterfly& b2) {
  require(b1.source == b2.source && b1.target == b2.target,
          "find_two_isomorphism: different ends");
  auto phi = solve_hom(b1.Q(), b2.Q(), {{{b1.nw, b2.nw}, {b1.sw, b2.sw}},
                                        {{b2.ne, b1.ne}, {b2.se, b1.se}}});
  if (phi && !is_isomorphism(*phi)) return std::nullopt;
  return phi;
}

std::optional<ChainMap> chain_map_of(const Butterfly& b) {
  if (!validate_butterfly(b)) return std::nullopt;
  auto sec = splitting(make_extension(b.sw, b.ne));
  if (!sec) return std::nullopt;
  ModuleMap fY = -compose(b.se, *sec);
  ModuleMap fX = must(lift(b.nw - compose(*sec, b.source.b), b.sw), "chain_map_of: X");
  return make_chain_map(b.source, b.target, fX, fY, -base_map(b));
}

std::optional<SplittingData> is_split_butterfly(const Butterfly& b) {
  require(is_trivial_two_extension(b.target), "is_split_butterfly: target is not trivial");
  if (!is_over_identity(b)) return std::nullopt;
  return SplittingData{make_extension(b.nw, -b.se), b.ne};
}

std::optional<Butterfly> find_splitting_butterfly(const TwoExtension& t) {
  if (!class_of_two_extension(t).is_zero()) return std::nullopt;
  Extension m = splice_pieces(t).second;
  const ModuleMap& pi = t.to_P();
  // Lift [m] along Ext^1(M, X) -> Ext^1(M, P).
  auto g1 = ext_group(1, t.M(), t.X());
  auto g2 = ext_group(1, t.M(), t.P());
  MatZN lin(t.K().modulus(), g1->module().ngens(), g2->module().ngens());
  for (std::size_t i = 0; i < g1->module().ngens(); ++i)
    lin.set_row(i, g2->coordinates(
                       pushout_class(g1->element_class(g1->module().unit_vector(i)), pi)));
  auto e = preimage(ModuleMap(g1->module(), g2->module(), lin),
                    g2->coordinates(class_of_extension(m)));
  if (!e) throw std::logic_error("find_splitting_butterfly: class vanishes but no lift");
  Extension q = extension_of_class(g1->element_class(*e));
  PushoutResult po = pushout_extension_with_map(q, pi);
  ModuleMap h = must(find_extension_isomorphism(po.ext, m), "find_splitting_butterfly: iso");
  Butterfly b{t, trivial_two_extension(t.M(), t.K()), q.i, compose(q.i, t.a),
              compose(h, po.middle), -q.p};
  ButterflyCheck ok = validate_butterfly(b);
  if (!ok) throw std::logic_error("find_splitting_butterfly: " + ok.failure);
  return b;
}

std::optional<Butterfly> local_existence_butterfly(const TwoExtension& xi,
                                                   const TwoExtension& eta) {
  require(xi.K() == eta.K() && xi.M() == eta.M(), "local_existence_butterfly: boundary mismatch");
  auto s = splitting(splice_pieces(xi).second);
  auto s2 = splitting(splice_pieces(eta).second);
  if (!s || !s2) return std::nullopt;
  DirectSum xs = direct_sum({eta.X(), xi.X()});
  CokernelResult po = cokernel_module(map_into_sum(xs, {eta.a, -xi.a}));
  DirectSum q = direct_sum({po.module, xi.M()});
  ModuleMap to_y = must(
      factor_through(map_out_of_sum(xs, {ModuleMap::zero(eta.X(), xi.Y()), xi.b}), po.projection),
      "local_existence_butterfly: Y");
  ModuleMap to_y2 = must(
      factor_through(map_out_of_sum(xs, {eta.b, ModuleMap::zero(xi.X(), eta.Y())}), po.projection),
      "local_existence_butterfly: Y'");
  ModuleMap into = compose(q.injections[0], po.projection);
  Butterfly b{xi,
              eta,
              compose(into, xs.injections[1]),
              compose(into, xs.injections[0]),
              map_out_of_sum(q, {to_y, *s}),
              map_out_of_sum(q, {to_y2, -*s2})};
  return shrink(std::move(b));
}

Butterfly restriction_butterfly(const TwoExtension& eta, const ModuleMap& f) {
  Restricted r = restrict_with_map(eta, f);
  return induced_butterfly(
      make_chain_map(r.t, eta, ModuleMap::identity(eta.X()), r.to_Y, f));
}

Butterfly restriction_composite(const Butterfly& b, const TwoExtension& eta, const ModuleMap& f) {
  Restricted r = restrict_with_map(eta, f);
  require(b.target == r.t, "restriction_composite: target is not the restriction");
  const FPModule& xp = eta.X();
  DirectSum s = direct_sum({b.Q(), xp});
  // X' enters through the sum of its two natural maps.
  CokernelResult c = cokernel_module(map_into_sum(s, {b.sw, ModuleMap::identity(xp)}));
  Butterfly out{b.source,
                eta,
                compose(c.projection, compose(s.injections[0], b.nw)),
                compose(c.projection, -s.injections[1]),
                must(factor_through(compose(b.ne, s.projections[0]), c.projection),
                     "restriction_composite: NE"),
                must(factor_through(map_out_of_sum(s, {compose(r.to_Y, b.se), -eta.b}),
                                    c.projection),
                     "restriction_composite: SE")};
  return shrink(std::move(out));
}

}  // namespace homalg
