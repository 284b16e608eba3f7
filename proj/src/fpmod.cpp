#include "homalg/fpmod.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace homalg {

namespace {

void require_same_modulus(Int a, Int b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": modulus mismatch");
}

MatZN stack_all(Int n, std::size_t cols, const std::vector<const MatZN*>& parts) {
  MatZN out(n, 0, cols);
  for (const MatZN* p : parts) out = vstack(out, *p);
  return out;
}

// Leading coordinates of each row.
MatZN take_cols(const MatZN& m, std::size_t count) { return m.block(0, m.rows(), 0, count); }

}  // namespace

// ---------------------------------------------------------------- FPModule

FPModule::FPModule(Int n, std::size_t ngens) : n_(n), ngens_(ngens), rel_(n, 0, ngens) {}

FPModule::FPModule(Int n, std::size_t ngens, const MatZN& relations)
    : n_(n), ngens_(ngens), rel_(howell_form(relations)) {
  require_same_modulus(n, relations.modulus(), "FPModule");
  if (relations.cols() != ngens) throw std::invalid_argument("FPModule: relation width mismatch");
}

FPModule FPModule::cyclic(Int n, Int d) {
  if (d <= 0 || n % d != 0) throw std::invalid_argument("FPModule::cyclic: d must divide N");
  return FPModule(n, 1, MatZN(n, 1, 1, {d}));
}

Row FPModule::reduce(const Row& x) const {
  if (x.size() != ngens_) throw std::invalid_argument("FPModule::reduce: length mismatch");
  return howell_reduce(rel_, x);
}

bool FPModule::is_zero_element(const Row& x) const { return vec_is_zero(reduce(x)); }

bool FPModule::same_element(const Row& a, const Row& b) const {
  return is_zero_element(vec_sub(a, b, n_));
}

Row FPModule::unit_vector(std::size_t i) const {
  Row e(ngens_, 0);
  e.at(i) = 1 % n_;
  return e;
}

Int FPModule::order() const {
  const Int limit = Int{1} << 62;
  auto piv = pivot_columns(rel_);
  std::vector<Int> per_col(ngens_, n_);
  for (std::size_t r = 0; r < rel_.rows(); ++r) per_col[piv[r]] = rel_.at(r, piv[r]);
  Int order = 1;
  for (Int c : per_col) {
    if (order > limit / c) throw std::overflow_error("FPModule::order: overflow");
    order *= c;
  }
  return order;
}

bool FPModule::is_zero() const {
  for (std::size_t i = 0; i < ngens_; ++i)
    if (!is_zero_element(unit_vector(i))) return false;
  return true;
}

std::vector<Row> FPModule::elements(std::size_t cap) const {
  auto piv = pivot_columns(rel_);
  std::vector<Int> radix(ngens_, n_);
  for (std::size_t r = 0; r < rel_.rows(); ++r) radix[piv[r]] = rel_.at(r, piv[r]);
  std::size_t total = 1;
  for (Int r : radix) {
    if (total > cap / static_cast<std::size_t>(r))
      throw std::length_error("FPModule::elements: order exceeds cap");
    total *= static_cast<std::size_t>(r);
  }
  std::vector<Row> out;
  out.reserve(total);
  Row cur(ngens_, 0);
  for (std::size_t k = 0; k < total; ++k) {
    out.push_back(cur);
    for (std::size_t i = ngens_; i-- > 0;) {
      if (++cur[i] < radix[i]) break;
      cur[i] = 0;
    }
  }
  return out;
}

std::string FPModule::to_string() const {
  std::ostringstream os;
  os << "Z/" << n_ << "-module(gens=" << ngens_ << ", rel=" << rel_.to_string() << ")";
  return os.str();
}

// ---------------------------------------------------------------- ModuleMap

bool is_well_defined(const FPModule& s, const FPModule& t, const MatZN& matrix) {
  if (matrix.rows() != s.ngens() || matrix.cols() != t.ngens()) return false;
  const MatZN& rel = s.relations();
  for (std::size_t r = 0; r < rel.rows(); ++r)
    if (!t.is_zero_element(vec_mul(rel.row(r), matrix))) return false;
  return true;
}

ModuleMap::ModuleMap(FPModule source, FPModule target, MatZN matrix)
    : src_(std::move(source)), tgt_(std::move(target)), mat_(std::move(matrix)) {
  require_same_modulus(src_.modulus(), tgt_.modulus(), "ModuleMap");
  require_same_modulus(src_.modulus(), mat_.modulus(), "ModuleMap");
  if (mat_.rows() != src_.ngens() || mat_.cols() != tgt_.ngens())
    throw std::invalid_argument("ModuleMap: matrix shape mismatch");
  if (!is_well_defined(src_, tgt_, mat_))
    throw std::invalid_argument("ModuleMap: relations do not map to zero");
  for (std::size_t r = 0; r < mat_.rows(); ++r) mat_.set_row(r, tgt_.reduce(mat_.row(r)));
}

ModuleMap ModuleMap::identity(const FPModule& m) {
  return ModuleMap(m, m, MatZN::identity(m.modulus(), m.ngens()));
}

ModuleMap ModuleMap::zero(const FPModule& s, const FPModule& t) {
  return ModuleMap(s, t, MatZN(s.modulus(), s.ngens(), t.ngens()));
}

Row ModuleMap::apply(const Row& x) const { return tgt_.reduce(vec_mul(x, mat_)); }

bool ModuleMap::equals(const ModuleMap& o) const {
  if (!(src_ == o.src_) || !(tgt_ == o.tgt_)) return false;
  return (*this - o).is_zero();
}

bool ModuleMap::is_zero() const {
  for (std::size_t r = 0; r < mat_.rows(); ++r)
    if (!tgt_.is_zero_element(mat_.row(r))) return false;
  return true;
}

ModuleMap ModuleMap::operator+(const ModuleMap& o) const {
  if (!(src_ == o.src_) || !(tgt_ == o.tgt_))
    throw std::invalid_argument("ModuleMap::+: different source or target");
  return ModuleMap(src_, tgt_, mat_ + o.mat_);
}

ModuleMap ModuleMap::operator-(const ModuleMap& o) const { return *this + (-o); }
ModuleMap ModuleMap::operator-() const { return scaled(-1); }
ModuleMap ModuleMap::scaled(Int k) const { return ModuleMap(src_, tgt_, mat_.scaled(k)); }

ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  if (!(f.target() == g.source())) throw std::invalid_argument("compose: not composable");
  return ModuleMap(f.source(), g.target(), f.matrix() * g.matrix());
}

std::optional<Row> preimage(const ModuleMap& f, const Row& y) {
  MatZN sys = vstack(f.matrix(), f.target().relations());
  auto x = solve(sys, y);
  if (!x) return std::nullopt;
  x->resize(f.source().ngens());
  return f.source().reduce(*x);
}

bool is_surjective(const ModuleMap& f) {
  for (std::size_t i = 0; i < f.target().ngens(); ++i)
    if (!preimage(f, f.target().unit_vector(i))) return false;
  return true;
}

bool is_injective(const ModuleMap& f) { return kernel_module(f).module.is_zero(); }

bool is_isomorphism(const ModuleMap& f) { return is_injective(f) && is_surjective(f); }

std::optional<ModuleMap> lift(const ModuleMap& f, const ModuleMap& along) {
  if (!(f.target() == along.target())) throw std::invalid_argument("lift: target mismatch");
  MatZN h(f.source().modulus(), f.source().ngens(), along.source().ngens());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    auto x = preimage(along, f.matrix().row(r));
    if (!x) return std::nullopt;
    h.set_row(r, *x);
  }
  if (!is_well_defined(f.source(), along.source(), h)) return std::nullopt;
  return ModuleMap(f.source(), along.source(), h);
}

std::optional<ModuleMap> factor_through(const ModuleMap& f, const ModuleMap& along) {
  if (!(f.source() == along.source()))
    throw std::invalid_argument("factor_through: source mismatch");
  const FPModule& t = along.target();
  MatZN h(t.modulus(), t.ngens(), f.target().ngens());
  for (std::size_t j = 0; j < t.ngens(); ++j) {
    auto x = preimage(along, t.unit_vector(j));
    if (!x) return std::nullopt;
    h.set_row(j, f.apply(*x));
  }
  if (!is_well_defined(t, f.target(), h)) return std::nullopt;
  ModuleMap hm(t, f.target(), h);
  if (!compose(hm, along).equals(f)) return std::nullopt;
  return hm;
}

// ---------------------------------------------------------------- subquotients

std::optional<Row> Subquotient::coords(const Row& x) const {
  auto c = solve(stacked, x);
  if (!c) return std::nullopt;
  c->resize(nsub);
  return module.reduce(vec_mul(*c, raw_to_module));
}

Subquotient subquotient(const FPModule& ambient, const MatZN& sub, const MatZN& quot) {
  const Int n = ambient.modulus();
  const std::size_t cols = ambient.ngens();
  if (sub.cols() != cols || quot.cols() != cols)
    throw std::invalid_argument("subquotient: width mismatch");
  Subquotient out;
  out.ambient = ambient;
  out.nsub = sub.rows();
  out.stacked = stack_all(n, cols, {&sub, &quot, &ambient.relations()});
  MatZN rel = take_cols(kernel(out.stacked), sub.rows());
  FPModule raw(n, sub.rows(), rel);
  Simplified s = simplify(raw);
  out.module = s.module;
  out.raw_to_module = s.to_simple.matrix();
  out.lift = s.from_simple.matrix() * sub;
  for (std::size_t r = 0; r < out.lift.rows(); ++r)
    out.lift.set_row(r, ambient.reduce(out.lift.row(r)));
  return out;
}

KernelResult kernel_module(const ModuleMap& f) {
  const FPModule& s = f.source();
  const Int n = s.modulus();
  MatZN sys = vstack(f.matrix(), f.target().relations());
  MatZN gens = take_cols(kernel(sys), s.ngens());
  Subquotient sq = subquotient(s, gens, MatZN(n, 0, s.ngens()));
  return {sq.module, ModuleMap(sq.module, s, sq.lift)};
}

CokernelResult cokernel_module(const ModuleMap& f) {
  const FPModule& t = f.target();
  FPModule c(t.modulus(), t.ngens(), vstack(t.relations(), f.matrix()));
  return {c, ModuleMap(t, c, MatZN::identity(t.modulus(), t.ngens()))};
}

ImageResult image_module(const ModuleMap& f) {
  const FPModule& t = f.target();
  Subquotient sq = subquotient(t, f.matrix(), MatZN(t.modulus(), 0, t.ngens()));
  MatZN co(t.modulus(), f.source().ngens(), sq.module.ngens());
  for (std::size_t r = 0; r < co.rows(); ++r) co.set_row(r, *sq.coords(f.matrix().row(r)));
  return {sq.module, ModuleMap(f.source(), sq.module, co), ModuleMap(sq.module, t, sq.lift)};
}

// ---------------------------------------------------------------- sums and tensors

DirectSum direct_sum(const std::vector<FPModule>& ms) {
  Int n = ms.empty() ? 2 : ms.front().modulus();
  MatZN rel(n, 0, 0);
  std::size_t total = 0;
  for (const auto& m : ms) {
    require_same_modulus(n, m.modulus(), "direct_sum");
    rel = block_diag(rel, m.relations());
    total += m.ngens();
  }
  DirectSum out{FPModule(n, total, rel), {}, {}};
  std::size_t off = 0;
  for (const auto& m : ms) {
    MatZN inj(n, m.ngens(), total), proj(n, total, m.ngens());
    for (std::size_t i = 0; i < m.ngens(); ++i) {
      inj.set(i, off + i, 1);
      proj.set(off + i, i, 1);
    }
    out.injections.emplace_back(m, out.module, inj);
    out.projections.emplace_back(out.module, m, proj);
    off += m.ngens();
  }
  return out;
}

ModuleMap map_into_sum(const DirectSum& target, const std::vector<ModuleMap>& fs) {
  if (fs.size() != target.injections.size() || fs.empty())
    throw std::invalid_argument("map_into_sum: arity mismatch");
  MatZN m = fs.front().matrix();
  for (std::size_t i = 1; i < fs.size(); ++i) m = hstack(m, fs[i].matrix());
  return ModuleMap(fs.front().source(), target.module, m);
}

ModuleMap map_out_of_sum(const DirectSum& source, const std::vector<ModuleMap>& gs) {
  if (gs.size() != source.injections.size() || gs.empty())
    throw std::invalid_argument("map_out_of_sum: arity mismatch");
  MatZN m = gs.front().matrix();
  for (std::size_t i = 1; i < gs.size(); ++i) m = vstack(m, gs[i].matrix());
  return ModuleMap(source.module, gs.front().target(), m);
}

ModuleMap sum_of_maps(const DirectSum& source, const DirectSum& target,
                      const std::vector<ModuleMap>& fs) {
  if (fs.size() != source.injections.size() || fs.size() != target.injections.size())
    throw std::invalid_argument("sum_of_maps: arity mismatch");
  MatZN m(source.module.modulus(), 0, 0);
  for (const auto& f : fs) m = block_diag(m, f.matrix());
  return ModuleMap(source.module, target.module, m);
}

Row TensorProduct::element(const Row& x, const Row& y) const {
  const Int n = module.modulus();
  Row out(left.ngens() * right.ngens(), 0);
  for (std::size_t i = 0; i < left.ngens(); ++i)
    for (std::size_t j = 0; j < right.ngens(); ++j)
      out[i * right.ngens() + j] = mulmod(mod(x.at(i), n), mod(y.at(j), n), n);
  return module.reduce(out);
}

TensorProduct tensor(const FPModule& m1, const FPModule& m2) {
  require_same_modulus(m1.modulus(), m2.modulus(), "tensor");
  const Int n = m1.modulus();
  const std::size_t a = m1.ngens(), b = m2.ngens();
  std::vector<Row> rel;
  for (const Row& r : m1.relations().row_list())
    for (std::size_t j = 0; j < b; ++j) {
      Row v(a * b, 0);
      for (std::size_t i = 0; i < a; ++i) v[i * b + j] = r[i];
      rel.push_back(v);
    }
  for (std::size_t i = 0; i < a; ++i)
    for (const Row& s : m2.relations().row_list()) {
      Row v(a * b, 0);
      for (std::size_t j = 0; j < b; ++j) v[i * b + j] = s[j];
      rel.push_back(v);
    }
  return {FPModule(n, a * b, MatZN::from_rows(n, a * b, rel)), m1, m2};
}

ModuleMap tensor_maps(const TensorProduct& s, const TensorProduct& t, const ModuleMap& f,
                      const ModuleMap& g) {
  const std::size_t a = s.left.ngens(), b = s.right.ngens();
  MatZN m(s.module.modulus(), a * b, t.module.ngens());
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j)
      m.set_row(i * b + j, t.element(f.matrix().row(i), g.matrix().row(j)));
  return ModuleMap(s.module, t.module, m);
}

// ---------------------------------------------------------------- Hom

ModuleMap HomModule::to_map(const Row& element) const {
  Row phi = vec_mul(element, gens);
  return ModuleMap(source, target,
                   MatZN(source.modulus(), source.ngens(), target.ngens(), phi));
}

Row HomModule::from_map(const ModuleMap& f) const {
  if (!(f.source() == source) || !(f.target() == target))
    throw std::invalid_argument("HomModule::from_map: wrong source or target");
  FPModule ambient = source.ngens() == 0
                        ? FPModule::zero(source.modulus())
                        : direct_sum(std::vector<FPModule>(source.ngens(), target)).module;
  MatZN stacked = vstack(gens, ambient.relations());
  auto c = solve(stacked, f.matrix().entries());
  if (!c) throw std::logic_error("HomModule::from_map: map not in span");
  c->resize(gens.rows());
  return module.reduce(*c);
}

HomModule hom_group(const FPModule& m, const FPModule& k) {
  require_same_modulus(m.modulus(), k.modulus(), "hom_group");
  const Int n = m.modulus();
  const std::size_t gm = m.ngens(), gk = k.ngens();
  const MatZN& r = m.relations();
  const MatZN& kr = k.relations();
  const std::size_t s = r.rows(), t = kr.rows();
  // Unknowns (Phi, Y) with R*Phi - Y*Krel = 0.
  MatZN sys(n, gm * gk + s * t, s * gk);
  for (std::size_t i = 0; i < gm; ++i)
    for (std::size_t j = 0; j < gk; ++j)
      for (std::size_t a = 0; a < s; ++a) sys.set(i * gk + j, a * gk + j, r.at(a, i));
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t l = 0; l < t; ++l)
      for (std::size_t j = 0; j < gk; ++j) sys.set(gm * gk + a * t + l, a * gk + j, -kr.at(l, j));
  MatZN phis = take_cols(kernel(sys), gm * gk);
  FPModule ambient =
      gm == 0 ? FPModule::zero(n) : direct_sum(std::vector<FPModule>(gm, k)).module;
  Subquotient sq = subquotient(ambient, phis, MatZN(n, 0, gm * gk));
  return {sq.module, m, k, sq.lift};
}

std::optional<ModuleMap> solve_hom(const FPModule& a, const FPModule& b,
                                   const HomConstraints& c) {
  HomModule h = hom_group(a, b);
  std::vector<HomModule> targets;
  Row want;
  for (const auto& [f, g] : c.pre) {
    if (!(f.target() == a) || !(g.target() == b) || !(f.source() == g.source()))
      throw std::invalid_argument("solve_hom: bad pre constraint");
    targets.push_back(hom_group(f.source(), b));
    Row w = targets.back().from_map(g);
    want.insert(want.end(), w.begin(), w.end());
  }
  for (const auto& [f, g] : c.post) {
    if (!(f.source() == b) || !(g.source() == a) || !(f.target() == g.target()))
      throw std::invalid_argument("solve_hom: bad post constraint");
    targets.push_back(hom_group(a, f.target()));
    Row w = targets.back().from_map(g);
    want.insert(want.end(), w.begin(), w.end());
  }
  std::vector<FPModule> parts;
  for (const auto& t : targets) parts.push_back(t.module);
  FPModule total = parts.empty() ? FPModule::zero(a.modulus()) : direct_sum(parts).module;
  MatZN lin(a.modulus(), h.module.ngens(), total.ngens());
  for (std::size_t g = 0; g < h.module.ngens(); ++g) {
    ModuleMap x = h.to_map(h.module.unit_vector(g));
    Row row;
    std::size_t t = 0;
    for (const auto& pc : c.pre) {
      Row r = targets[t++].from_map(compose(x, pc.first));
      row.insert(row.end(), r.begin(), r.end());
    }
    for (const auto& pc : c.post) {
      Row r = targets[t++].from_map(compose(pc.first, x));
      row.insert(row.end(), r.begin(), r.end());
    }
    lin.set_row(g, row);
  }
  auto e = preimage(ModuleMap(h.module, total, lin), want);
  if (!e) return std::nullopt;
  ModuleMap out = h.to_map(*e);
  for (const auto& [f, g] : c.pre)
    if (!compose(out, f).equals(g)) throw std::logic_error("solve_hom: check failed");
  for (const auto& [f, g] : c.post)
    if (!compose(f, out).equals(g)) throw std::logic_error("solve_hom: check failed");
  return out;
}

// ---------------------------------------------------------------- simplification

Simplified simplify(const FPModule& m) {
  const Int n = m.modulus();
  const std::size_t k = m.ngens();
  MatZN r = m.relations();
  MatZN v = MatZN::identity(n, k), vi = MatZN::identity(n, k);

  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      Int x = r.at(i, a);
      r.set(i, a, r.at(i, b));
      r.set(i, b, x);
    }
    for (std::size_t i = 0; i < k; ++i) {
      Int x = v.at(i, a);
      v.set(i, a, v.at(i, b));
      v.set(i, b, x);
    }
    Row ra = vi.row(a);
    vi.set_row(a, vi.row(b));
    vi.set_row(b, ra);
  };
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    Row ra = r.row(a);
    r.set_row(a, r.row(b));
    r.set_row(b, ra);
  };
  // Row ops (a, b) <- (s a + t b, u a + w b).
  auto row_op = [&](std::size_t a, std::size_t b, Int s, Int t, Int u, Int w) {
    Row ra = r.row(a), rb = r.row(b);
    r.set_row(a, vec_add(vec_scale(ra, s, n), vec_scale(rb, t, n), n));
    r.set_row(b, vec_add(vec_scale(ra, u, n), vec_scale(rb, w, n), n));
  };
  // Column ops (a, b) <- (s a + t b, u a + w b); det = s w - t u = 1.
  auto col_op = [&](std::size_t a, std::size_t b, Int s, Int t, Int u, Int w) {
    for (MatZN* mat : {&r, &v})
      for (std::size_t i = 0; i < mat->rows(); ++i) {
        Int x = mat->at(i, a), y = mat->at(i, b);
        mat->set(i, a, mod(s, n) * x % n + mod(t, n) * y % n);
        mat->set(i, b, mod(u, n) * x % n + mod(w, n) * y % n);
      }
    Row ra = vi.row(a), rb = vi.row(b);
    vi.set_row(a, vec_add(vec_scale(ra, w, n), vec_scale(rb, -u, n), n));
    vi.set_row(b, vec_add(vec_scale(ra, -t, n), vec_scale(rb, s, n), n));
  };

  std::size_t rank = 0;
  std::vector<Int> diag;
  for (std::size_t p = 0; p < std::min(r.rows(), k); ++p) {
    std::size_t bi = 0, bj = 0;
    Int best = 0;
    for (std::size_t i = p; i < r.rows(); ++i)
      for (std::size_t j = p; j < k; ++j)
        if (r.at(i, j) != 0) {
          Int g = gcd(r.at(i, j), n);
          if (best == 0 || g < best) {
            best = g;
            bi = i;
            bj = j;
          }
        }
    if (best == 0) break;
    swap_rows(p, bi);
    swap_cols(p, bj);
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = p + 1; i < r.rows(); ++i) {
        Int a = r.at(p, p), b = r.at(i, p);
        if (b == 0) continue;
        if (b % a == 0) {
          row_op(p, i, 1, 0, -(b / a), 1);
        } else {
          Int s, t;
          Int g = xgcd(a, b, s, t);
          row_op(p, i, s, t, -(b / g), a / g);
        }
      }
      for (std::size_t j = p + 1; j < k; ++j) {
        Int a = r.at(p, p), b = r.at(p, j);
        if (b == 0) continue;
        if (b % a == 0) {
          col_op(p, j, 1, 0, -(b / a), 1);
        } else {
          Int s, t;
          Int g = xgcd(a, b, s, t);
          col_op(p, j, s, t, -(b / g), a / g);
          dirty = true;
        }
      }
    }
    Int w = normalizing_unit(r.at(p, p), n);
    Int wi = inverse_mod(w, n);
    for (std::size_t i = 0; i < r.rows(); ++i) r.set(i, p, mulmod(r.at(i, p), w, n));
    for (std::size_t i = 0; i < k; ++i) v.set(i, p, mulmod(v.at(i, p), w, n));
    vi.set_row(p, vec_scale(vi.row(p), wi, n));
    diag.push_back(r.at(p, p));
    ++rank;
  }

  std::vector<std::size_t> kept;
  std::vector<Int> orders;
  for (std::size_t p = 0; p < k; ++p) {
    Int d = p < rank ? diag[p] : n;
    if (d == 1) continue;
    kept.push_back(p);
    orders.push_back(d);
  }
  MatZN rel(n, 0, kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (orders[i] != n) {
      Row e(kept.size(), 0);
      e[i] = orders[i];
      rel = vstack(rel, MatZN::from_rows(n, kept.size(), {e}));
    }
  FPModule simple(n, kept.size(), rel);
  ModuleMap to(m, simple, v.select_cols(kept));
  ModuleMap from(simple, m, vi.select_rows(kept));
  return {simple, to, from, orders};
}

std::vector<Int> invariant_factors(const FPModule& m) {
  std::map<Int, std::vector<Int>> by_prime;  // prime -> prime powers
  for (Int d : simplify(m).cyclic_orders) {
    Int x = d;
    for (Int p = 2; p * p <= x; ++p) {
      if (x % p) continue;
      Int q = 1;
      while (x % p == 0) {
        x /= p;
        q *= p;
      }
      by_prime[p].push_back(q);
    }
    if (x > 1) by_prime[x].push_back(x);
  }
  std::size_t len = 0;
  for (auto& [p, qs] : by_prime) {
    std::sort(qs.begin(), qs.end(), std::greater<>());
    len = std::max(len, qs.size());
  }
  std::vector<Int> out(len, 1);
  for (auto& [p, qs] : by_prime)
    for (std::size_t i = 0; i < qs.size(); ++i) out[len - 1 - i] *= qs[i];
  return out;
}

// ---------------------------------------------------------------- exactness

ExactnessReport check_exact(const Complex& c) {
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (!(c[i].target() == c[i + 1].source()))
      throw std::invalid_argument("check_exact: maps not composable");
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const ModuleMap& f = c[i];
    const ModuleMap& g = c[i + 1];
    if (!compose(g, f).is_zero()) return {false, i + 1, "composite is nonzero"};
    KernelResult k = kernel_module(g);
    for (std::size_t j = 0; j < k.module.ngens(); ++j)
      if (!preimage(f, k.inclusion.matrix().row(j)))
        return {false, i + 1, "kernel not contained in image"};
  }
  return {};
}

bool is_exact(const Complex& c) { return check_exact(c).exact; }

Complex short_sequence(const ModuleMap& i, const ModuleMap& p) {
  FPModule z = FPModule::zero(i.source().modulus());
  return {ModuleMap::zero(z, i.source()), i, p, ModuleMap::zero(p.target(), z)};
}

// ---------------------------------------------------------------- resolutions

ModuleMap FreeResolution::differential(std::size_t i) const {
  if (i == 0 || i > depth()) throw std::out_of_range("FreeResolution::differential");
  return ModuleMap(F(i), F(i - 1), d[i - 1]);
}

ModuleMap FreeResolution::augmentation() const {
  return ModuleMap(F(0), base, MatZN::identity(base.modulus(), base.ngens()));
}

FreeResolution free_resolution(const FPModule& m, std::size_t depth) {
  FreeResolution res;
  res.base = m;
  res.ranks.push_back(m.ngens());
  MatZN prev = m.relations();
  for (std::size_t i = 1; i <= depth; ++i) {
    res.d.push_back(prev);
    res.ranks.push_back(prev.rows());
    prev = kernel(prev);
  }
  // The image of d[i] is the kernel of d[i-1] by construction; spot-check composites.
  for (std::size_t i = 1; i < res.d.size(); ++i)
    if (!(res.d[i] * res.d[i - 1]).is_zero())
      throw std::logic_error("free_resolution: d^2 != 0");
  return res;
}

// ---------------------------------------------------------------- change of rings

bool is_killed_by(const FPModule& m, Int k) {
  for (std::size_t i = 0; i < m.ngens(); ++i)
    if (!m.is_zero_element(vec_scale(m.unit_vector(i), k, m.modulus()))) return false;
  return true;
}

FPModule restrict_scalars(const FPModule& m, Int nprime) {
  const Int n = m.modulus();
  if (nprime % n != 0) throw std::invalid_argument("restrict_scalars: N must divide N'");
  MatZN lifted(nprime, m.relations().rows(), m.ngens(), m.relations().entries());
  MatZN killers = MatZN::identity(nprime, m.ngens()).scaled(n);
  return FPModule(nprime, m.ngens(), vstack(lifted, killers));
}

ModuleMap restrict_scalars(const ModuleMap& f, Int nprime) {
  MatZN lifted(nprime, f.matrix().rows(), f.matrix().cols(), f.matrix().entries());
  return ModuleMap(restrict_scalars(f.source(), nprime), restrict_scalars(f.target(), nprime),
                   lifted);
}

FPModule descend_scalars(const FPModule& m, Int n) {
  if (m.modulus() % n != 0) throw std::invalid_argument("descend_scalars: N must divide N'");
  if (!is_killed_by(m, n)) throw std::invalid_argument("descend_scalars: module not killed by N");
  const MatZN& r = m.relations();
  return FPModule(n, m.ngens(), MatZN(n, r.rows(), r.cols(), r.entries()));
}

ModuleMap descend_scalars(const ModuleMap& f, Int n) {
  const MatZN& a = f.matrix();
  return ModuleMap(descend_scalars(f.source(), n), descend_scalars(f.target(), n),
                   MatZN(n, a.rows(), a.cols(), a.entries()));
}

}  // namespace homalg
