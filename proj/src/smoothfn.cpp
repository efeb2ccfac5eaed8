#include "azu/smoothfn.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <mutex>
#include <sstream>

namespace azu {

MultiIndex::MultiIndex(std::vector<int> d) : d_(std::move(d)) {
  for (int x : d_)
    if (x < 0) fail(ErrorCode::input, "multi-index entries must be nonnegative");
}

int MultiIndex::total() const {
  int t = 0;
  for (int x : d_) t += x;
  return t;
}

MultiIndex MultiIndex::bumped(int i) const {
  std::vector<int> d = d_;
  d.at(i) += 1;
  return MultiIndex(std::move(d));
}

Rational MultiIndex::inverse_factorial_weight() const {
  Rational w(1);
  for (int x : d_) w /= factorial(static_cast<unsigned>(x));
  return w;
}

void for_each_multi_index(int arity, int total,
                          const std::function<void(const MultiIndex&)>& visit) {
  std::vector<int> cur(static_cast<size_t>(std::max(arity, 0)), 0);
  if (arity == 0) {
    if (total == 0) visit(MultiIndex({}));
    return;
  }
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == arity - 1) {
      cur[pos] = remaining;
      visit(MultiIndex(cur));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  rec(0, total);
}

// ---------------------------------------------------------------------------
// Expression trees for the elementary kind
// ---------------------------------------------------------------------------

namespace detail {

struct ExprNode {
  enum class Op { constant, var, add, mul, ipow, powr, exp, sin, cos, log };
  Op op;
  Coefficient cval;
  int var = -1;
  long ipw = 0;
  Rational rpw = Rational(0);
  std::vector<ExprPtr> kids;
};

struct DiffMemo {
  std::mutex mu;
  std::map<std::pair<const ExprNode*, int>, ExprPtr> cache;
};

using Op = ExprNode::Op;

ExprPtr make_const(Coefficient c) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::constant;
  n->cval = std::move(c);
  return n;
}

ExprPtr make_var(int i) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::var;
  n->var = i;
  return n;
}

bool is_const(const ExprPtr& e) { return e->op == Op::constant; }
bool is_const_zero(const ExprPtr& e) { return is_const(e) && e->cval.is_zero(); }
bool is_const_one(const ExprPtr& e) {
  return is_const(e) && e->cval == Coefficient::one(e->cval.backend());
}

Coefficient const_sum(const Coefficient& a, const Coefficient& b) {
  if (a.backend() == b.backend()) return a + b;
  return a.to_backend(Backend::numeric) + b.to_backend(Backend::numeric);
}

Coefficient const_prod(const Coefficient& a, const Coefficient& b) {
  if (a.backend() == b.backend()) return a * b;
  return a.to_backend(Backend::numeric) * b.to_backend(Backend::numeric);
}

ExprPtr make_add(std::vector<ExprPtr> kids) {
  std::vector<ExprPtr> flat;
  Coefficient c = Coefficient::exact(0);
  bool has_const = false;
  for (auto& k : kids) {
    if (k->op == Op::add) {
      for (const auto& kk : k->kids) {
        if (is_const(kk)) {
          c = has_const ? const_sum(c, kk->cval) : kk->cval;
          has_const = true;
        } else {
          flat.push_back(kk);
        }
      }
    } else if (is_const(k)) {
      c = has_const ? const_sum(c, k->cval) : k->cval;
      has_const = true;
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (has_const && !c.is_zero()) flat.insert(flat.begin(), make_const(c));
  if (flat.empty()) return make_const(Coefficient::exact(0));
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<ExprNode>();
  n->op = Op::add;
  n->kids = std::move(flat);
  return n;
}

ExprPtr make_mul(std::vector<ExprPtr> kids) {
  std::vector<ExprPtr> flat;
  Coefficient c = Coefficient::exact(1);
  bool has_const = false;
  for (auto& k : kids) {
    if (k->op == Op::mul) {
      for (const auto& kk : k->kids) {
        if (is_const(kk)) {
          c = has_const ? const_prod(c, kk->cval) : kk->cval;
          has_const = true;
        } else {
          flat.push_back(kk);
        }
      }
    } else if (is_const(k)) {
      c = has_const ? const_prod(c, k->cval) : k->cval;
      has_const = true;
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (has_const && c.is_zero()) return make_const(c);
  if (has_const && !(c == Coefficient::one(c.backend())))
    flat.insert(flat.begin(), make_const(c));
  if (flat.empty()) return make_const(has_const ? c : Coefficient::exact(1));
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<ExprNode>();
  n->op = Op::mul;
  n->kids = std::move(flat);
  return n;
}

ExprPtr make_ipow(ExprPtr base, long p) {
  if (p == 0) return make_const(Coefficient::exact(1));
  if (p == 1) return base;
  if (is_const(base)) {
    const Coefficient& c = base->cval;
    if (p > 0 || !c.is_zero()) {
      Coefficient acc = Coefficient::one(c.backend());
      for (long i = 0; i < std::labs(p); ++i) acc *= c;
      if (p < 0) acc = Coefficient::one(c.backend()) / acc;
      return make_const(acc);
    }
  }
  auto n = std::make_shared<ExprNode>();
  n->op = Op::ipow;
  n->ipw = p;
  n->kids = {std::move(base)};
  return n;
}

ExprPtr make_unary(Op op, ExprPtr kid) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->kids = {std::move(kid)};
  return n;
}

ExprPtr make_powr(ExprPtr base, Rational c) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::powr;
  n->rpw = std::move(c);
  n->kids = {std::move(base)};
  return n;
}

ExprPtr diff_node(const ExprPtr& e, int var, DiffMemo& memo);

ExprPtr diff_uncached(const ExprPtr& e, int var, DiffMemo& memo) {
  switch (e->op) {
    case Op::constant:
      return make_const(Coefficient::exact(0));
    case Op::var:
      return make_const(Coefficient::exact(e->var == var ? 1 : 0));
    case Op::add: {
      std::vector<ExprPtr> kids;
      for (const auto& k : e->kids) kids.push_back(diff_node(k, var, memo));
      return make_add(std::move(kids));
    }
    case Op::mul: {
      std::vector<ExprPtr> sum;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        std::vector<ExprPtr> prod;
        for (size_t j = 0; j < e->kids.size(); ++j)
          prod.push_back(j == i ? diff_node(e->kids[j], var, memo) : e->kids[j]);
        sum.push_back(make_mul(std::move(prod)));
      }
      return make_add(std::move(sum));
    }
    case Op::ipow: {
      ExprPtr u = e->kids[0];
      return make_mul({make_const(Coefficient::exact(e->ipw)),
                       make_ipow(u, e->ipw - 1), diff_node(u, var, memo)});
    }
    case Op::powr: {
      ExprPtr u = e->kids[0];
      return make_mul({make_const(Coefficient::exact(e->rpw)),
                       make_powr(u, e->rpw - 1), diff_node(u, var, memo)});
    }
    case Op::exp:
      return make_mul({make_unary(Op::exp, e->kids[0]), diff_node(e->kids[0], var, memo)});
    case Op::sin:
      return make_mul({make_unary(Op::cos, e->kids[0]), diff_node(e->kids[0], var, memo)});
    case Op::cos:
      return make_mul({make_const(Coefficient::exact(-1)),
                       make_unary(Op::sin, e->kids[0]), diff_node(e->kids[0], var, memo)});
    case Op::log:
      return make_mul({make_ipow(e->kids[0], -1), diff_node(e->kids[0], var, memo)});
  }
  fail(ErrorCode::internal, "unhandled expression op");
}

ExprPtr diff_node(const ExprPtr& e, int var, DiffMemo& memo) {
  {
    std::lock_guard<std::mutex> lk(memo.mu);
    auto it = memo.cache.find({e.get(), var});
    if (it != memo.cache.end()) return it->second;
  }
  ExprPtr d = diff_uncached(e, var, memo);
  std::lock_guard<std::mutex> lk(memo.mu);
  memo.cache.emplace(std::make_pair(e.get(), var), d);
  return d;
}

double const_to_real(const Coefficient& c) {
  if (!c.is_real()) fail(ErrorCode::domain, "elementary evaluation needs real values");
  return c.to_complex().real();
}

double eval_node(const ExprNode& e, std::span<const double> p) {
  switch (e.op) {
    case Op::constant:
      return const_to_real(e.cval);
    case Op::var:
      return p[static_cast<size_t>(e.var)];
    case Op::add: {
      double s = 0;
      for (const auto& k : e.kids) s += eval_node(*k, p);
      return s;
    }
    case Op::mul: {
      double s = 1;
      for (const auto& k : e.kids) s *= eval_node(*k, p);
      return s;
    }
    case Op::ipow: {
      double u = eval_node(*e.kids[0], p);
      if (e.ipw < 0 && u == 0.0) fail(ErrorCode::domain, "negative power at zero");
      return std::pow(u, static_cast<double>(e.ipw));
    }
    case Op::powr: {
      double u = eval_node(*e.kids[0], p);
      double c = e.rpw.get_d();
      if (u < 0.0 || (u == 0.0 && c <= 0.0))
        fail(ErrorCode::domain, "real power outside its domain");
      return std::pow(u, c);
    }
    case Op::exp:
      return std::exp(eval_node(*e.kids[0], p));
    case Op::sin:
      return std::sin(eval_node(*e.kids[0], p));
    case Op::cos:
      return std::cos(eval_node(*e.kids[0], p));
    case Op::log: {
      double u = eval_node(*e.kids[0], p);
      if (u <= 0.0) fail(ErrorCode::domain, "log at a nonpositive point");
      return std::log(u);
    }
  }
  fail(ErrorCode::internal, "unhandled expression op");
}

ExprPtr substitute(const ExprPtr& e, const std::vector<ExprPtr>& repl) {
  switch (e->op) {
    case Op::constant:
      return e;
    case Op::var:
      return repl.at(static_cast<size_t>(e->var));
    default: {
      std::vector<ExprPtr> kids;
      for (const auto& k : e->kids) kids.push_back(substitute(k, repl));
      switch (e->op) {
        case Op::add: return make_add(std::move(kids));
        case Op::mul: return make_mul(std::move(kids));
        case Op::ipow: return make_ipow(kids[0], e->ipw);
        case Op::powr: return make_powr(kids[0], e->rpw);
        case Op::exp: case Op::sin: case Op::cos: case Op::log:
          return make_unary(e->op, kids[0]);
        default: break;
      }
    }
  }
  fail(ErrorCode::internal, "unhandled expression op in substitute");
}

std::optional<PolyTerms> to_polynomial(const ExprPtr& e, int arity);

void expr_to_string(const ExprNode& e, std::ostringstream& out) {
  switch (e.op) {
    case Op::constant: out << e.cval.to_string(); return;
    case Op::var: out << "y" << (e.var + 1); return;
    case Op::add: {
      out << "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out << " + ";
        expr_to_string(*e.kids[i], out);
      }
      out << ")";
      return;
    }
    case Op::mul: {
      out << "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out << "*";
        expr_to_string(*e.kids[i], out);
      }
      out << ")";
      return;
    }
    case Op::ipow:
      expr_to_string(*e.kids[0], out);
      out << "^" << e.ipw;
      return;
    case Op::powr:
      out << "pow(";
      expr_to_string(*e.kids[0], out);
      out << "," << rational_to_string(e.rpw) << ")";
      return;
    case Op::exp: case Op::sin: case Op::cos: case Op::log: {
      const char* name = e.op == Op::exp   ? "exp"
                         : e.op == Op::sin ? "sin"
                         : e.op == Op::cos ? "cos"
                                           : "log";
      out << name << "(";
      expr_to_string(*e.kids[0], out);
      out << ")";
      return;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sparse polynomial helpers
// ---------------------------------------------------------------------------

namespace {

using detail::ExprPtr;

void pt_insert(PolyTerms& t, const std::vector<int>& e, const Coefficient& c) {
  if (c.is_zero()) return;
  auto it = t.find(e);
  if (it == t.end()) {
    t.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) t.erase(it);
  }
}

PolyTerms pt_convert(const PolyTerms& t, Backend b) {
  PolyTerms r;
  for (const auto& [e, c] : t) {
    Coefficient cc = c.to_backend(b);
    if (!cc.is_zero()) r.emplace(e, cc);
  }
  return r;
}

Backend pt_backend(const PolyTerms& t) {
  return t.empty() ? Backend::exact : t.begin()->second.backend();
}

PolyTerms pt_add(const PolyTerms& a, const PolyTerms& b) {
  PolyTerms r = a;
  for (const auto& [e, c] : b) pt_insert(r, e, c);
  return r;
}

PolyTerms pt_mul(const PolyTerms& a, const PolyTerms& b) {
  PolyTerms r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e = ea;
      for (size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      pt_insert(r, e, ca * cb);
    }
  return r;
}

PolyTerms pt_scale(const PolyTerms& a, const Coefficient& c) {
  PolyTerms r;
  if (c.is_zero()) return r;
  for (const auto& [e, x] : a) pt_insert(r, e, x * c);
  return r;
}

PolyTerms pt_one(int arity, Backend b) {
  PolyTerms r;
  r.emplace(std::vector<int>(static_cast<size_t>(arity), 0), Coefficient::one(b));
  return r;
}

PolyTerms pt_pow(const PolyTerms& a, int n, int arity, Backend b) {
  PolyTerms r = pt_one(arity, b);
  for (int i = 0; i < n; ++i) r = pt_mul(r, a);
  return r;
}

}  // namespace

namespace detail {

std::optional<PolyTerms> to_polynomial(const ExprPtr& e, int arity) {
  switch (e->op) {
    case Op::constant: {
      PolyTerms t;
      pt_insert(t, std::vector<int>(static_cast<size_t>(arity), 0), e->cval);
      return t;
    }
    case Op::var: {
      PolyTerms t;
      std::vector<int> exp(static_cast<size_t>(arity), 0);
      exp[static_cast<size_t>(e->var)] = 1;
      pt_insert(t, exp, Coefficient::one(e->cval.backend()));
      return t;
    }
    case Op::add: {
      PolyTerms t;
      for (const auto& k : e->kids) {
        auto sub = to_polynomial(k, arity);
        if (!sub) return std::nullopt;
        t = pt_add(t, *sub);
      }
      return t;
    }
    case Op::mul: {
      PolyTerms t = pt_one(arity, Backend::exact);
      for (const auto& k : e->kids) {
        auto sub = to_polynomial(k, arity);
        if (!sub) return std::nullopt;
        // unify backends before convolving
        Backend bt = pt_backend(t), bs = pt_backend(*sub);
        if (bt != bs) {
          t = pt_convert(t, Backend::numeric);
          *sub = pt_convert(*sub, Backend::numeric);
        }
        t = pt_mul(t, *sub);
      }
      return t;
    }
    case Op::ipow: {
      if (e->ipw < 0) return std::nullopt;
      auto sub = to_polynomial(e->kids[0], arity);
      if (!sub) return std::nullopt;
      return pt_pow(*sub, static_cast<int>(e->ipw), arity, pt_backend(*sub));
    }
    default:
      return std::nullopt;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SmoothFunction
// ---------------------------------------------------------------------------

SmoothFunction SmoothFunction::constant(int arity, Coefficient c) {
  PolyTerms t;
  pt_insert(t, std::vector<int>(static_cast<size_t>(arity), 0), c);
  return polynomial(arity, std::move(t), c.backend());
}

SmoothFunction SmoothFunction::variable(int arity, int index, Backend b) {
  if (index < 0 || index >= arity)
    fail(ErrorCode::input, "variable index out of range");
  PolyTerms t;
  std::vector<int> e(static_cast<size_t>(arity), 0);
  e[static_cast<size_t>(index)] = 1;
  pt_insert(t, e, Coefficient::one(b));
  return polynomial(arity, std::move(t), b);
}

SmoothFunction SmoothFunction::polynomial(int arity, PolyTerms terms, Backend b) {
  SmoothFunction f;
  f.arity_ = arity;
  f.kind_ = FnKind::polynomial;
  for (const auto& [e, c] : terms) {
    if (static_cast<int>(e.size()) != arity)
      fail(ErrorCode::input, "polynomial exponent arity mismatch");
    if (c.backend() != pt_backend(terms))
      fail(ErrorCode::backend_mismatch, "mixed backends inside one polynomial");
  }
  f.backend_ = terms.empty() ? b : pt_backend(terms);
  std::erase_if(terms, [](const auto& kv) { return kv.second.is_zero(); });
  f.terms_ = std::move(terms);
  return f;
}

SmoothFunction SmoothFunction::oracle(int arity, JetOracle fn, Backend b) {
  SmoothFunction f;
  f.arity_ = arity;
  f.kind_ = FnKind::oracle;
  f.backend_ = b;
  f.oracle_ = std::move(fn);
  return f;
}

SmoothFunction SmoothFunction::from_expr(int arity, detail::ExprPtr root) {
  if (auto poly = detail::to_polynomial(root, arity))
    return polynomial(arity, std::move(*poly), pt_backend(*poly));
  SmoothFunction f;
  f.arity_ = arity;
  f.kind_ = FnKind::elementary;
  f.backend_ = Backend::numeric;
  f.root_ = std::move(root);
  f.memo_ = std::make_shared<detail::DiffMemo>();
  return f;
}

const PolyTerms& SmoothFunction::poly_terms() const {
  if (kind_ != FnKind::polynomial)
    fail(ErrorCode::internal, "poly_terms on a non-polynomial function");
  return terms_;
}

detail::ExprPtr SmoothFunction::as_expr() const {
  using namespace detail;
  switch (kind_) {
    case FnKind::elementary:
      return root_;
    case FnKind::polynomial: {
      std::vector<ExprPtr> sum;
      for (const auto& [e, c] : terms_) {
        std::vector<ExprPtr> prod = {make_const(c)};
        for (size_t i = 0; i < e.size(); ++i)
          if (e[i] > 0) prod.push_back(make_ipow(make_var(static_cast<int>(i)), e[i]));
        sum.push_back(make_mul(std::move(prod)));
      }
      return make_add(std::move(sum));
    }
    case FnKind::oracle:
      fail(ErrorCode::input, "an external jet oracle has no expression form");
  }
  fail(ErrorCode::internal, "bad kind");
}

Coefficient SmoothFunction::jet(const MultiIndex& idx, std::span<const Coefficient> point) const {
  if (idx.arity() != arity_ || static_cast<int>(point.size()) != arity_)
    fail(ErrorCode::shape_mismatch, "jet arity mismatch");
  switch (kind_) {
    case FnKind::polynomial: {
      Backend wb = backend_;
      for (const auto& c : point)
        if (c.backend() == Backend::numeric) wb = Backend::numeric;
      Coefficient acc = Coefficient::zero(wb);
      for (const auto& [e, c] : terms_) {
        Rational fall(1);
        bool vanishes = false;
        for (int i = 0; i < arity_; ++i) {
          if (e[static_cast<size_t>(i)] < idx[i]) {
            vanishes = true;
            break;
          }
          for (int k = 0; k < idx[i]; ++k)
            fall *= Rational(e[static_cast<size_t>(i)] - k);
        }
        if (vanishes) continue;
        Coefficient term = c.to_backend(wb) * Coefficient::of_rational(fall, wb);
        for (int i = 0; i < arity_; ++i) {
          int p = e[static_cast<size_t>(i)] - idx[i];
          Coefficient base = point[static_cast<size_t>(i)].to_backend(wb);
          for (int k = 0; k < p; ++k) term *= base;
        }
        acc += term;
      }
      return acc;
    }
    case FnKind::elementary: {
      detail::ExprPtr node = root_;
      for (int i = 0; i < arity_; ++i)
        for (int k = 0; k < idx[i]; ++k) node = detail::diff_node(node, i, *memo_);
      std::vector<double> p;
      p.reserve(point.size());
      for (const auto& c : point) p.push_back(detail::const_to_real(c));
      return Coefficient::numeric(detail::eval_node(*node, p));
    }
    case FnKind::oracle:
      return oracle_(idx, point);
  }
  fail(ErrorCode::internal, "bad kind");
}

Coefficient SmoothFunction::value(std::span<const Coefficient> point) const {
  return jet(MultiIndex::zeros(arity_), point);
}

SmoothFunction SmoothFunction::derivative(int var) const {
  if (var < 0 || var >= arity_) fail(ErrorCode::input, "derivative variable out of range");
  switch (kind_) {
    case FnKind::polynomial: {
      PolyTerms t;
      for (const auto& [e, c] : terms_) {
        int p = e[static_cast<size_t>(var)];
        if (p == 0) continue;
        std::vector<int> ne = e;
        ne[static_cast<size_t>(var)] -= 1;
        pt_insert(t, ne, c * Coefficient::of_rational(Rational(p), backend_));
      }
      return polynomial(arity_, std::move(t), backend_);
    }
    case FnKind::elementary: {
      SmoothFunction f;
      f.arity_ = arity_;
      f.kind_ = FnKind::elementary;
      f.backend_ = Backend::numeric;
      f.root_ = detail::diff_node(root_, var, *memo_);
      f.memo_ = memo_;
      return f;
    }
    case FnKind::oracle: {
      JetOracle base = oracle_;
      int v = var;
      return oracle(
          arity_,
          [base, v](const MultiIndex& idx, std::span<const Coefficient> p) {
            return base(idx.bumped(v), p);
          },
          backend_);
    }
  }
  fail(ErrorCode::internal, "bad kind");
}

SmoothFunction SmoothFunction::taylor_polynomial(std::span<const Coefficient> q,
                                                 int degree) const {
  if (degree < 0) fail(ErrorCode::input, "Taylor degree must be nonnegative");
  if (static_cast<int>(q.size()) != arity_)
    fail(ErrorCode::shape_mismatch, "Taylor point arity mismatch");
  Backend wb = (kind_ == FnKind::polynomial) ? backend_ : Backend::numeric;
  for (const auto& c : q)
    if (c.backend() == Backend::numeric) wb = Backend::numeric;

  // coefficients in the shifted variables u = y - q
  PolyTerms shifted;
  for (int d = 0; d <= degree; ++d) {
    for_each_multi_index(arity_, d, [&](const MultiIndex& idx) {
      Coefficient w = jet(idx, q).to_backend(wb) *
                      Coefficient::of_rational(idx.inverse_factorial_weight(), wb);
      pt_insert(shifted, idx.values(), w);
    });
  }
  // expand back to the y basis by substituting u_i = y_i - q_i
  PolyTerms result;
  std::vector<std::vector<PolyTerms>> powers(static_cast<size_t>(arity_));
  auto linear = [&](int i) {
    PolyTerms t;
    std::vector<int> e(static_cast<size_t>(arity_), 0);
    e[static_cast<size_t>(i)] = 1;
    pt_insert(t, e, Coefficient::one(wb));
    pt_insert(t, std::vector<int>(static_cast<size_t>(arity_), 0),
              -q[static_cast<size_t>(i)].to_backend(wb));
    return t;
  };
  auto power_of = [&](int i, int p) -> const PolyTerms& {
    auto& cache = powers[static_cast<size_t>(i)];
    if (cache.empty()) cache.push_back(pt_one(arity_, wb));
    while (static_cast<int>(cache.size()) <= p)
      cache.push_back(pt_mul(cache.back(), linear(i)));
    return cache[static_cast<size_t>(p)];
  };
  for (const auto& [e, c] : shifted) {
    PolyTerms prod = pt_one(arity_, wb);
    for (int i = 0; i < arity_; ++i)
      if (e[static_cast<size_t>(i)] > 0)
        prod = pt_mul(prod, power_of(i, e[static_cast<size_t>(i)]));
    result = pt_add(result, pt_scale(prod, c));
  }
  return polynomial(arity_, std::move(result), wb);
}

SmoothFunction SmoothFunction::operator-() const {
  return Coefficient::of_rational(Rational(-1), backend_) * *this;
}

static void require_same_arity(const SmoothFunction& a, const SmoothFunction& b) {
  if (a.arity() != b.arity())
    fail(ErrorCode::shape_mismatch, "smooth function arity mismatch");
}

SmoothFunction operator+(const SmoothFunction& a, const SmoothFunction& b) {
  require_same_arity(a, b);
  if (a.is_polynomial() && b.is_polynomial()) {
    Backend wb = (a.backend() == b.backend()) ? a.backend() : Backend::numeric;
    return SmoothFunction::polynomial(
        a.arity(), pt_add(pt_convert(a.poly_terms(), wb), pt_convert(b.poly_terms(), wb)), wb);
  }
  return SmoothFunction::from_expr(a.arity(), detail::make_add({a.as_expr(), b.as_expr()}));
}

SmoothFunction operator-(const SmoothFunction& a, const SmoothFunction& b) { return a + (-b); }

SmoothFunction operator*(const SmoothFunction& a, const SmoothFunction& b) {
  require_same_arity(a, b);
  if (a.is_polynomial() && b.is_polynomial()) {
    Backend wb = (a.backend() == b.backend()) ? a.backend() : Backend::numeric;
    return SmoothFunction::polynomial(
        a.arity(), pt_mul(pt_convert(a.poly_terms(), wb), pt_convert(b.poly_terms(), wb)), wb);
  }
  return SmoothFunction::from_expr(a.arity(), detail::make_mul({a.as_expr(), b.as_expr()}));
}

SmoothFunction operator*(const Coefficient& c, const SmoothFunction& f) {
  if (f.is_polynomial()) {
    Backend wb = (c.backend() == f.backend()) ? f.backend() : Backend::numeric;
    return SmoothFunction::polynomial(
        f.arity(), pt_scale(pt_convert(f.poly_terms(), wb), c.to_backend(wb)), wb);
  }
  return SmoothFunction::from_expr(f.arity(),
                                   detail::make_mul({detail::make_const(c), f.as_expr()}));
}

SmoothFunction SmoothFunction::compose(const SmoothFunction& outer,
                                       std::vector<SmoothFunction> inner) {
  if (static_cast<int>(inner.size()) != outer.arity())
    fail(ErrorCode::shape_mismatch, "composition needs one inner function per outer variable");
  if (inner.empty()) return outer;
  int n = inner[0].arity();
  for (const auto& f : inner)
    if (f.arity() != n) fail(ErrorCode::shape_mismatch, "inner functions disagree on arity");

  bool all_poly = outer.is_polynomial();
  for (const auto& f : inner) all_poly = all_poly && f.is_polynomial();
  if (all_poly) {
    Backend wb = outer.backend();
    for (const auto& f : inner)
      if (f.backend() == Backend::numeric) wb = Backend::numeric;
    std::vector<PolyTerms> args;
    for (const auto& f : inner) args.push_back(pt_convert(f.poly_terms(), wb));
    std::vector<std::vector<PolyTerms>> powers(args.size());
    auto power_of = [&](size_t i, int p) -> const PolyTerms& {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(pt_one(n, wb));
      while (static_cast<int>(cache.size()) <= p)
        cache.push_back(pt_mul(cache.back(), args[i]));
      return cache[static_cast<size_t>(p)];
    };
    PolyTerms result;
    for (const auto& [e, c] : outer.poly_terms()) {
      PolyTerms prod = pt_one(n, wb);
      for (size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) prod = pt_mul(prod, power_of(i, e[i]));
      result = pt_add(result, pt_scale(prod, c.to_backend(wb)));
    }
    return polynomial(n, std::move(result), wb);
  }

  std::vector<detail::ExprPtr> repl;
  for (const auto& f : inner) repl.push_back(f.as_expr());
  return from_expr(n, detail::substitute(outer.as_expr(), repl));
}

SmoothFunction exp_of(const SmoothFunction& f) {
  return SmoothFunction::from_expr(
      f.arity(), detail::make_unary(detail::Op::exp, f.as_expr()));
}
SmoothFunction sin_of(const SmoothFunction& f) {
  return SmoothFunction::from_expr(
      f.arity(), detail::make_unary(detail::Op::sin, f.as_expr()));
}
SmoothFunction cos_of(const SmoothFunction& f) {
  return SmoothFunction::from_expr(
      f.arity(), detail::make_unary(detail::Op::cos, f.as_expr()));
}
SmoothFunction log_of(const SmoothFunction& f) {
  return SmoothFunction::from_expr(
      f.arity(), detail::make_unary(detail::Op::log, f.as_expr()));
}
SmoothFunction pow_int(const SmoothFunction& f, long n) {
  if (f.is_polynomial() && n >= 0)
    return SmoothFunction::polynomial(
        f.arity(), pt_pow(f.poly_terms(), static_cast<int>(n), f.arity(), f.backend()),
        f.backend());
  return SmoothFunction::from_expr(f.arity(), detail::make_ipow(f.as_expr(), n));
}
SmoothFunction pow_rat(const SmoothFunction& f, const Rational& c) {
  if (c.get_den() == 1 && c.get_num().fits_slong_p())
    return pow_int(f, c.get_num().get_si());
  return SmoothFunction::from_expr(f.arity(), detail::make_powr(f.as_expr(), c));
}

bool SmoothFunction::poly_equal(const SmoothFunction& o) const {
  return is_polynomial() && o.is_polynomial() && arity_ == o.arity_ && terms_ == o.terms_;
}

std::string SmoothFunction::to_string() const {
  if (kind_ == FnKind::oracle) return "<oracle/" + std::to_string(arity_) + ">";
  std::ostringstream out;
  detail::expr_to_string(*as_expr(), out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Expression parsing
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& src;
  size_t pos = 0;
  int arity;
  Backend backend;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorCode::parse, "expression parse error at position " + std::to_string(pos) +
                               ": " + what);
  }

  std::string lex_ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    return src.substr(start, pos - start);
  }

  Rational lex_number() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
      ++pos;
    if ((pos < src.size()) && (src[pos] == 'e' || src[pos] == 'E')) {
      size_t e = pos + 1;
      if (e < src.size() && (src[e] == '+' || src[e] == '-')) ++e;
      if (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
        pos = e;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      }
    }
    if (pos == start) error("expected a number");
    return rational_from_string(src.substr(start, pos - start));
  }

  long lex_integer_exponent() {
    bool paren = eat('(');
    bool neg = eat('-');
    skip_ws();
    size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == start) error("expected an integer exponent");
    long v = std::stol(src.substr(start, pos - start));
    if (paren && !eat(')')) error("missing ')' after exponent");
    return neg ? -v : v;
  }

  Rational lex_signed_rational() {
    bool neg = eat('-');
    Rational num = lex_number();
    if (eat('/')) {
      Rational den = lex_number();
      if (den == 0) error("zero denominator");
      num /= den;
    }
    return neg ? Rational(-num) : num;
  }

  SmoothFunction parse_expr() {
    SmoothFunction acc = parse_term();
    while (true) {
      if (eat('+'))
        acc = acc + parse_term();
      else if (eat('-'))
        acc = acc - parse_term();
      else
        return acc;
    }
  }

  SmoothFunction parse_term() {
    SmoothFunction acc = parse_unary();
    while (true) {
      if (eat('*'))
        acc = acc * parse_unary();
      else if (eat('/'))
        acc = acc * pow_int(parse_unary(), -1);
      else
        return acc;
    }
  }

  SmoothFunction parse_unary() {
    if (eat('-')) return -parse_unary();
    return parse_power();
  }

  SmoothFunction parse_power() {
    SmoothFunction base = parse_primary();
    while (eat('^')) base = pow_int(base, lex_integer_exponent());
    return base;
  }

  SmoothFunction parse_primary() {
    skip_ws();
    if (pos >= src.size()) error("unexpected end of expression");
    char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return SmoothFunction::constant(arity,
                                      Coefficient::of_rational(lex_number(), backend));
    }
    if (c == '(') {
      ++pos;
      SmoothFunction inner = parse_expr();
      if (!eat(')')) error("missing ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id = lex_ident();
      if ((id[0] == 'y' || id[0] == 'x') && id.size() > 1 &&
          std::all_of(id.begin() + 1, id.end(),
                      [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        int idx = std::stoi(id.substr(1));
        if (idx < 1 || idx > arity)
          error("variable " + id + " outside arity " + std::to_string(arity));
        return SmoothFunction::variable(arity, idx - 1, backend);
      }
      if (!eat('(')) error("expected '(' after function name '" + id + "'");
      if (id == "pow") {
        SmoothFunction f = parse_expr();
        if (!eat(',')) error("pow needs two arguments");
        Rational e = lex_signed_rational();
        if (!eat(')')) error("missing ')'");
        return pow_rat(f, e);
      }
      SmoothFunction f = parse_expr();
      if (!eat(')')) error("missing ')'");
      if (id == "exp") return exp_of(f);
      if (id == "sin") return sin_of(f);
      if (id == "cos") return cos_of(f);
      if (id == "log") return log_of(f);
      if (id == "sqrt") return pow_rat(f, Rational(1, 2));
      error("unknown function '" + id + "'");
    }
    error(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

SmoothFunction SmoothFunction::parse(const std::string& text, int arity, Backend b) {
  Parser p{text, 0, arity, b};
  SmoothFunction f = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.error("trailing input");
  if (f.is_polynomial() && f.backend() != b && b == Backend::numeric)
    return polynomial(arity, pt_convert(f.poly_terms(), b), b);
  return f;
}

// ---------------------------------------------------------------------------
// SuperFunction
// ---------------------------------------------------------------------------

SuperFunction SuperFunction::even(SmoothFunction f, int s2) {
  SuperFunction r(f.arity(), s2);
  r.set_component(0, std::move(f));
  return r;
}

SuperFunction SuperFunction::odd_generator(int n, int s2, int l, Backend b) {
  if (l < 1 || l > s2) fail(ErrorCode::input, "odd generator index out of range");
  SuperFunction r(n, s2);
  r.set_component(std::uint64_t(1) << (l - 1),
                  SmoothFunction::constant(n, Coefficient::one(b)));
  return r;
}

SuperFunction SuperFunction::coordinate(int n, int s2, int i, Backend b) {
  return even(SmoothFunction::variable(n, i - 1, b), s2);
}

void SuperFunction::set_component(std::uint64_t mask, SmoothFunction f) {
  if (f.arity() != n_) fail(ErrorCode::shape_mismatch, "component arity mismatch");
  if (s2_ < 64 && (mask >> s2_) != 0)
    fail(ErrorCode::input, "odd monomial uses generators beyond s2");
  if (f.is_zero_polynomial())
    comps_.erase(mask);
  else
    comps_.insert_or_assign(mask, std::move(f));
}

std::optional<SmoothFunction> SuperFunction::component(std::uint64_t mask) const {
  auto it = comps_.find(mask);
  if (it == comps_.end()) return std::nullopt;
  return it->second;
}

bool SuperFunction::all_polynomial() const {
  return std::all_of(comps_.begin(), comps_.end(),
                     [](const auto& kv) { return kv.second.is_polynomial(); });
}

bool SuperFunction::any_numeric() const {
  return std::any_of(comps_.begin(), comps_.end(), [](const auto& kv) {
    return kv.second.backend() == Backend::numeric;
  });
}

SuperFunction SuperFunction::even_part() const {
  SuperFunction r(n_, s2_);
  for (const auto& [mask, f] : comps_)
    if (std::popcount(mask) % 2 == 0) r.comps_.emplace(mask, f);
  return r;
}

SuperFunction SuperFunction::odd_part() const {
  SuperFunction r(n_, s2_);
  for (const auto& [mask, f] : comps_)
    if (std::popcount(mask) % 2 == 1) r.comps_.emplace(mask, f);
  return r;
}

SuperFunction SuperFunction::operator-() const {
  SuperFunction r(n_, s2_);
  for (const auto& [mask, f] : comps_) r.comps_.emplace(mask, -f);
  return r;
}

static void require_same_shape(const SuperFunction& a, const SuperFunction& b) {
  if (a.base_arity() != b.base_arity() || a.odd_count() != b.odd_count())
    fail(ErrorCode::shape_mismatch, "super function shape mismatch");
}

SuperFunction operator+(const SuperFunction& a, const SuperFunction& b) {
  require_same_shape(a, b);
  SuperFunction r = a;
  for (const auto& [mask, f] : b.components()) {
    auto existing = r.component(mask);
    r.set_component(mask, existing ? (*existing + f) : f);
  }
  return r;
}

SuperFunction operator-(const SuperFunction& a, const SuperFunction& b) { return a + (-b); }

SuperFunction operator*(const SuperFunction& a, const SuperFunction& b) {
  require_same_shape(a, b);
  SuperFunction r(a.base_arity(), a.odd_count());
  AlgebraSignature odd_sig = AlgebraSignature::plain(a.odd_count(), Backend::exact);
  for (const auto& [ma, fa] : a.components())
    for (const auto& [mb, fb] : b.components()) {
      if (ma & mb) continue;
      SmoothFunction prod = fa * fb;
      if (monomial_sort_parity(ma, mb, odd_sig)) prod = -prod;
      auto existing = r.component(ma | mb);
      r.set_component(ma | mb, existing ? (*existing + prod) : prod);
    }
  return r;
}

}  // namespace azu
