#include "homalg/ext.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace homalg {

namespace {

using ModuleKey = std::tuple<Int, std::size_t, std::size_t, std::vector<Int>>;

ModuleKey key_of(const FPModule& m) {
  return {m.modulus(), m.ngens(), m.relations().rows(), m.relations().entries()};
}

// Write-once slots behind a mutex-protected index.
template <typename Key, typename Value>
class OnceCache {
 public:
  template <typename Make>
  std::shared_ptr<const Value> get(const Key& key, Make make) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto& s = slots_[key];
      if (!s) s = std::make_shared<Slot>();
      slot = s;
    }
    std::call_once(slot->once, [&] { slot->value = std::make_shared<const Value>(make()); });
    return slot->value;
  }

 private:
  struct Slot {
    std::once_flag once;
    std::shared_ptr<const Value> value;
  };
  std::mutex mu_;
  std::map<Key, std::shared_ptr<Slot>> slots_;
};

// Rows of f (elements of a free module) lifted through along: x*along = row.
MatZN lift_rows_free(const MatZN& f, const MatZN& along) {
  MatZN out(f.modulus(), f.rows(), along.rows());
  for (std::size_t r = 0; r < f.rows(); ++r) {
    auto x = solve(along, f.row(r));
    if (!x) throw std::logic_error("lift_rows_free: row not in image");
    out.set_row(r, *x);
  }
  return out;
}

FPModule power(const FPModule& k, std::size_t r) {
  if (r == 0) return FPModule::zero(k.modulus());
  return direct_sum(std::vector<FPModule>(r, k)).module;
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

bool is_short_exact(const ModuleMap& i, const ModuleMap& p) {
  if (!(i.target() == p.source())) return false;
  return is_exact(short_sequence(i, p));
}

Extension make_extension(ModuleMap i, ModuleMap p) {
  require(is_short_exact(i, p), "make_extension: sequence is not short exact");
  return {std::move(i), std::move(p)};
}

Extension split_extension(const FPModule& m, const FPModule& k) {
  DirectSum s = direct_sum({k, m});
  return {s.injections[0], s.projections[1]};
}

std::shared_ptr<const FreeResolution> cached_resolution(const FPModule& m, std::size_t depth) {
  static OnceCache<std::tuple<ModuleKey, std::size_t>, FreeResolution> cache;
  return cache.get({key_of(m), depth}, [&] { return free_resolution(m, depth); });
}

std::vector<MatZN> lift_chain_map(const ModuleMap& f, const FreeResolution& src,
                                  const FreeResolution& tgt, std::size_t depth) {
  require(f.source() == src.base && f.target() == tgt.base, "lift_chain_map: base mismatch");
  require(src.depth() >= depth && tgt.depth() >= depth, "lift_chain_map: depth too small");
  std::vector<MatZN> phi{f.matrix()};
  for (std::size_t i = 1; i <= depth; ++i)
    phi.push_back(lift_rows_free(src.d[i - 1] * phi.back(), tgt.d[i - 1]));
  return phi;
}

MatZN precompose_matrix(const MatZN& d, std::size_t k) {
  const std::size_t rn = d.rows(), rq = d.cols();
  MatZN out(d.modulus(), rq * k, rn * k);
  for (std::size_t i = 0; i < rq; ++i)
    for (std::size_t a = 0; a < rn; ++a) {
      Int v = d.at(a, i);
      if (v == 0) continue;
      for (std::size_t j = 0; j < k; ++j) out.set(i * k + j, a * k + j, v);
    }
  return out;
}

// ---------------------------------------------------------------- ExtGroup

ExtGroup::ExtGroup(std::size_t p, FPModule m, FPModule k)
    : p_(p), m_(std::move(m)), k_(std::move(k)) {
  require(m_.modulus() == k_.modulus(), "ext_group: modulus mismatch");
  const Int n = m_.modulus();
  const std::size_t kg = k_.ngens();
  res_ = cached_resolution(m_, p + 1);
  const std::size_t rp = res_->ranks[p];
  cochains_ = power(k_, rp);
  next_cochains_ = power(k_, res_->ranks[p + 1]);
  dnext_ = precompose_matrix(res_->d[p], kg);
  MatZN ker = kernel(vstack(dnext_, next_cochains_.relations()));
  MatZN cocycles = ker.block(0, ker.rows(), 0, rp * kg);
  MatZN cobound(n, 0, rp * kg);
  if (p > 0) {
    cobound = precompose_matrix(res_->d[p - 1], kg);
    prev_size_ = cobound.rows();
  }
  bounds_ = howell_form(vstack(cobound, cochains_.relations()));
  sq_ = subquotient(cochains_, cocycles, cobound);
}

Row ExtGroup::vec(const ModuleMap& cocycle) const { return cocycle.matrix().entries(); }

ExtClass ExtGroup::make_class(const ModuleMap& cocycle) const {
  require(cocycle.source() == res_->F(p_) && cocycle.target() == k_,
          "ExtGroup::make_class: wrong source or target");
  Row v = vec(cocycle);
  require(next_cochains_.is_zero_element(vec_mul(v, dnext_)),
          "ExtGroup::make_class: not a cocycle");
  return {p_, m_, k_, cocycle, howell_reduce(bounds_, v)};
}

ExtClass ExtGroup::element_class(const Row& e) const {
  Row v = vec_mul(e, sq_.lift);
  MatZN phi(m_.modulus(), res_->ranks[p_], k_.ngens(), v);
  return make_class(ModuleMap(res_->F(p_), k_, phi));
}

void ExtGroup::check_class(const ExtClass& c) const {
  require(c.p == p_ && c.M == m_ && c.K == k_, "ExtGroup: class from another group");
}

Row ExtGroup::coordinates(const ExtClass& c) const {
  check_class(c);
  auto x = sq_.coords(vec(c.cocycle));
  if (!x) throw std::logic_error("ExtGroup::coordinates: cocycle outside cocycle span");
  return *x;
}

ExtClass ExtGroup::zero() const {
  return make_class(ModuleMap::zero(res_->F(p_), k_));
}

ExtClass ExtGroup::add(const ExtClass& a, const ExtClass& b) const {
  check_class(a);
  check_class(b);
  return make_class(a.cocycle + b.cocycle);
}

ExtClass ExtGroup::negate(const ExtClass& a) const {
  check_class(a);
  return make_class(-a.cocycle);
}

ExtClass ExtGroup::scale(const ExtClass& a, Int k) const {
  check_class(a);
  return make_class(a.cocycle.scaled(k));
}

std::vector<ExtClass> ExtGroup::generator_classes() const {
  std::vector<ExtClass> out;
  for (std::size_t i = 0; i < module().ngens(); ++i)
    out.push_back(element_class(module().unit_vector(i)));
  return out;
}

std::optional<ModuleMap> ExtGroup::coboundary_preimage(const ModuleMap& cocycle) const {
  Row v = vec(cocycle);
  if (p_ == 0) {
    if (!cochains_.is_zero_element(v)) return std::nullopt;
    return ModuleMap::zero(FPModule::zero(m_.modulus()), k_);
  }
  MatZN cob = precompose_matrix(res_->d[p_ - 1], k_.ngens());
  auto x = solve(vstack(cob, cochains_.relations()), v);
  if (!x) return std::nullopt;
  x->resize(prev_size_);
  MatZN psi(m_.modulus(), res_->ranks[p_ - 1], k_.ngens(), *x);
  return ModuleMap(res_->F(p_ - 1), k_, psi);
}

std::shared_ptr<const ExtGroup> ext_group(std::size_t p, const FPModule& m, const FPModule& k) {
  static OnceCache<std::tuple<std::size_t, ModuleKey, ModuleKey>, ExtGroup> cache;
  return cache.get({p, key_of(m), key_of(k)}, [&] { return ExtGroup(p, m, k); });
}

// ---------------------------------------------------------------- functoriality

ExtClass pushout_class(const ExtClass& c, const ModuleMap& g) {
  require(g.source() == c.K, "pushout_class: source mismatch");
  return ext_group(c.p, c.M, g.target())->make_class(compose(g, c.cocycle));
}

ExtClass pullback_class(const ExtClass& c, const ModuleMap& f) {
  require(f.target() == c.M, "pullback_class: target mismatch");
  auto g = ext_group(c.p, f.source(), c.K);
  auto phi = lift_chain_map(f, g->resolution(), *cached_resolution(c.M, c.p + 1), c.p);
  const FreeResolution& r = g->resolution();
  return g->make_class(ModuleMap(r.F(c.p), c.K, phi[c.p] * c.cocycle.matrix()));
}

ExtClass yoneda_product(const ExtClass& gamma, const ExtClass& m) {
  require(gamma.p == 1, "yoneda_product: gamma must have degree 1");
  require(m.K == gamma.M, "yoneda_product: middle module mismatch");
  const std::size_t q = m.p;
  auto out = ext_group(q + 1, m.M, gamma.K);
  const FreeResolution& rm = out->resolution();
  const FreeResolution& rp = *cached_resolution(gamma.M, 2);
  // phi0 lifts the cocycle F_q(M) -> P to F_0(P); phi1 covers it in degree one.
  MatZN phi0 = m.cocycle.matrix();
  MatZN phi1 = lift_rows_free(rm.d[q] * phi0, rp.d[0]);
  return out->make_class(ModuleMap(rm.F(q + 1), gamma.K, phi1 * gamma.cocycle.matrix()));
}

// ---------------------------------------------------------------- extensions

namespace {

struct ClassData {
  std::shared_ptr<const ExtGroup> group;
  ModuleMap s0;  // F_0 -> E lifting the augmentation
  ModuleMap cocycle;
};

ClassData class_data(const Extension& x) {
  require(is_short_exact(x.i, x.p), "class_of_extension: input is not exact");
  auto g = ext_group(1, x.M(), x.K());
  const FreeResolution& r = g->resolution();
  auto s0 = lift(r.augmentation(), x.p);
  if (!s0) throw std::logic_error("class_of_extension: augmentation does not lift");
  auto c = lift(compose(*s0, r.differential(1)), x.i);
  if (!c) throw std::logic_error("class_of_extension: boundary does not land in K");
  return {g, *s0, *c};
}

}  // namespace

ExtClass class_of_extension(const Extension& x) {
  ClassData d = class_data(x);
  return d.group->make_class(d.cocycle);
}

Extension extension_of_class(const ExtClass& c) {
  require(c.p == 1, "extension_of_class: degree must be 1");
  const Int n = c.M.modulus();
  const FreeResolution& r = *cached_resolution(c.M, 2);
  const std::size_t kg = c.K.ngens(), r0 = r.ranks[0];
  // Pushout of 0 -> im d_1 -> F_0 -> M -> 0 along the cocycle: K ⊕ F_0 modulo
  // (-c(a), d_1(a)) for each generator a of F_1.
  MatZN rel = block_diag(c.K.relations(), MatZN(n, 0, r0));
  MatZN glue = hstack(-c.cocycle.matrix(), r.d[0]);
  FPModule e(n, kg + r0, vstack(rel, glue));
  MatZN im(n, kg, kg + r0), pm(n, kg + r0, c.M.ngens());
  for (std::size_t j = 0; j < kg; ++j) im.set(j, j, 1);
  for (std::size_t j = 0; j < r0; ++j) pm.set(kg + j, j, 1);
  return make_extension(ModuleMap(c.K, e, im), ModuleMap(e, c.M, pm));
}

Extension direct_sum_extension(const Extension& x, const Extension& y) {
  DirectSum k = direct_sum({x.K(), y.K()});
  DirectSum e = direct_sum({x.E(), y.E()});
  DirectSum m = direct_sum({x.M(), y.M()});
  return {sum_of_maps(k, e, {x.i, y.i}), sum_of_maps(e, m, {x.p, y.p})};
}

Extension pullback_extension(const Extension& x, const ModuleMap& f) {
  return pullback_extension_with_map(x, f).ext;
}

Extension pushout_extension(const Extension& x, const ModuleMap& g) {
  return pushout_extension_with_map(x, g).ext;
}

Extension baer_sum(const Extension& x, const Extension& y) {
  require(x.K() == y.K() && x.M() == y.M(), "baer_sum: boundary modules differ");
  Extension s = direct_sum_extension(x, y);
  DirectSum mm = direct_sum({x.M(), x.M()});
  DirectSum kk = direct_sum({x.K(), x.K()});
  ModuleMap diag = map_into_sum(mm, {ModuleMap::identity(x.M()), ModuleMap::identity(x.M())});
  ModuleMap plus = map_out_of_sum(kk, {ModuleMap::identity(x.K()), ModuleMap::identity(x.K())});
  return pushout_extension(pullback_extension(s, diag), plus);
}

std::optional<ModuleMap> splitting(const Extension& x) {
  ClassData d = class_data(x);
  auto psi = d.group->coboundary_preimage(d.cocycle);
  if (!psi) return std::nullopt;
  const FreeResolution& r = d.group->resolution();
  auto s = factor_through(d.s0 - compose(x.i, *psi), r.augmentation());
  if (!s || !compose(x.p, *s).equals(ModuleMap::identity(x.M())))
    throw std::logic_error("splitting: section construction failed");
  return s;
}

std::optional<ModuleMap> find_extension_isomorphism(const Extension& x, const Extension& y) {
  require(x.K() == y.K() && x.M() == y.M(), "find_extension_isomorphism: boundary mismatch");
  return solve_hom(x.E(), y.E(), {{{x.i, y.i}}, {{y.p, x.p}}});
}

PushoutResult pushout_extension_with_map(const Extension& x, const ModuleMap& g) {
  require(g.source() == x.K(), "pushout_extension: source mismatch");
  DirectSum s = direct_sum({x.E(), g.target()});
  CokernelResult po = cokernel_module(map_into_sum(s, {x.i, -g}));
  ModuleMap i = compose(po.projection, s.injections[1]);
  auto p = factor_through(map_out_of_sum(s, {x.p, ModuleMap::zero(g.target(), x.M())}),
                          po.projection);
  if (!p) throw std::logic_error("pushout_extension: projection does not factor");
  return {make_extension(i, *p), compose(po.projection, s.injections[0])};
}

PullbackResult pullback_extension_with_map(const Extension& x, const ModuleMap& f) {
  require(f.target() == x.M(), "pullback_extension: target mismatch");
  DirectSum s = direct_sum({x.E(), f.source()});
  KernelResult pb = kernel_module(map_out_of_sum(s, {x.p, -f}));
  auto i = lift(compose(s.injections[0], x.i), pb.inclusion);
  if (!i) throw std::logic_error("pullback_extension: K does not lift");
  ModuleMap p = compose(s.projections[1], pb.inclusion);
  return {make_extension(*i, p), compose(s.projections[0], pb.inclusion)};
}

}  // namespace homalg
