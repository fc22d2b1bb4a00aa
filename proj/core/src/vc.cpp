#include "ctms/vc.hpp"
#include "ctms/assertions.hpp"
#include "ctms/linear.hpp"
#include "ctms/syntax.hpp"

namespace ctms {

namespace {

AssertionPtr apply_post(const PostLambda& q, const ExprPtr& e) {
  if (q.var == kSeqVar) return q.body;
  return substitute(q.body, q.var, e);
}

std::set<std::string> post_names(const PostLambda& q) {
  auto s = free_vars(q.body);
  s.insert(q.var);
  return s;
}

AssertionPtr loop_inv(const CmdPtr& c, const AssertionPtr& dflt) {
  if (c->inv) return c->inv;
  if (dflt) return dflt;
  throw MissingInvariant("loop at " + std::to_string(c->pos.line) + ":" + std::to_string(c->pos.col) +
                         " has no invariant");
}

}  // namespace

AssertionPtr wlp(const CmdPtr& c, const PostLambda& post, const AssertionPtr& dinv) {
  switch (c->kind) {
    case CmdKind::Expr: return apply_post(post, c->e1);
    case CmdKind::Let: {
      CmdPtr body = c->c2;
      std::string x = c->var;
      if (x != kSeqVar) {
        auto clash = free_vars(post.body);
        clash.erase(post.var);
        if (clash.count(x)) {
          auto avoid = clash;
          auto fv2 = free_vars(body);
          avoid.insert(fv2.begin(), fv2.end());
          std::string nx = fresh_name(x, avoid);
          body = substitute(body, x, var(nx));
          x = nx;
        }
      }
      auto inner = wlp(body, post, dinv);
      return wlp(c->c1, PostLambda{x, inner}, dinv);
    }
    case CmdKind::If:
      return a_and(a_imp(a_pure(c->e1), wlp(c->c1, post, dinv)),
                   a_imp(a_pure(not_(c->e1)), wlp(c->c2, post, dinv)));
    case CmdKind::While: {
      auto inv = loop_inv(c, dinv);
      auto q = apply_post(post, lit(unit_value()));
      auto step = wlp(c->c1, PostLambda{kSeqVar, inv}, dinv);
      return a_star_all({inv, a_box(a_wand(inv, a_pts_any(c->e1))),
                         a_box(a_wand(a_and(inv, a_pts(c->e1, lit(Value{true}))), step)),
                         a_wand(a_and(inv, a_pts(c->e1, lit(Value{false}))), q)});
    }
    case CmdKind::For: {
      auto inv = loop_inv(c, dinv);
      auto q = apply_post(post, lit(unit_value()));
      std::string x = c->var;
      CmdPtr body = c->c1;
      auto clash = free_vars(inv);
      for (const auto& e : {c->e1, c->e2})
        for (const auto& n : free_vars(e)) clash.insert(n);
      if (clash.count(x)) {
        auto avoid = clash;
        auto fvb = free_vars(body);
        avoid.insert(fvb.begin(), fvb.end());
        std::string nx = fresh_name(x, avoid);
        body = substitute(body, x, var(nx));
        x = nx;
      }
      auto guard = a_and(a_and(a_pure(le(c->e1, var(x))), a_pure(le(var(x), c->e2))), inv);
      auto step = wlp(body, PostLambda{kSeqVar, inv}, dinv);
      return a_star_all({inv, a_box(a_forall(x, Domain::integers(), a_wand(guard, step))), a_wand(inv, q)});
    }
    case CmdKind::Read: {
      auto avoid = post_names(post);
      for (const auto& n : free_vars(c->e1)) avoid.insert(n);
      std::string y = fresh_name("v", avoid);
      return a_exists(y, Domain::val(), a_and(a_pts(c->e1, var(y)), apply_post(post, var(y))));
    }
    case CmdKind::Write:
      return a_star(a_pts_any(c->e1), a_wand(a_pts(c->e1, c->e2), apply_post(post, lit(unit_value()))));
  }
  return a_true();
}

AssertionPtr VerificationCondition::closed() const {
  AssertionPtr a = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    a = it->forall ? a_forall(it->var, it->dom, a) : a_exists(it->var, it->dom, a);
  return a;
}

Domain param_domain(ParamDomain d) {
  switch (d) {
    case ParamDomain::Nat: return Domain::nat();
    case ParamDomain::Int: return Domain::integers();
    case ParamDomain::Obj: return Domain::obj();
    case ParamDomain::Loc: return Domain::locs();
  }
  return Domain::integers();
}

VerificationCondition vc_for_spec(const Program& p) {
  VerificationCondition vc;
  for (const auto& q : p.params) vc.prefix.push_back({q.name, param_domain(q.domain), true});
  vc.matrix = a_imp(p.pre, wlp(p.body, PostLambda{kSeqVar, p.pre}, p.pre));
  return vc;
}

std::string print_vc(const VerificationCondition& vc) {
  std::string s;
  for (const auto& b : vc.prefix)
    s += std::string(b.forall ? "forall " : "exists ") + b.var + " in " + to_string(b.dom) + ". ";
  if (!s.empty()) s.back() = '\n';
  return s + print_layout(vc.matrix);
}

bool is_pure_assertion(const AssertionPtr& a) {
  if (!a) return true;
  switch (a->kind) {
    case AKind::PointsTo:
    case AKind::PointsToAny:
    case AKind::Array:
    case AKind::Star:
    case AKind::Wand:
    case AKind::Box: return false;
    case AKind::Forall:
    case AKind::Exists:
      if (a->dom.kind == Domain::Kind::Val) return false;
      return is_pure_assertion(a->a1);
    default: return is_pure_assertion(a->a1) && is_pure_assertion(a->a2);
  }
}

std::optional<PureFormula> to_pure(const VerificationCondition& vc) {
  std::set<std::string> nats;
  for (const auto& b : vc.prefix)
    if (b.dom.kind == Domain::Kind::Nat) nats.insert(b.var);
  auto r = simplify_traced(vc.matrix, nats);
  if (!is_pure_assertion(r.result)) return std::nullopt;
  return PureFormula{vc.prefix, r.result, std::move(r.steps)};
}

bool eval_pure(const AssertionPtr& f, const Env& env, std::optional<std::pair<Int, Int>> clip,
               std::uint64_t* clipped) {
  ModelOptions o;
  if (clip) o.int_clip = [clip](const Env&) { return clip; };
  ModelStats st;
  bool r = models({}, f, env, o, &st);
  if (clipped) *clipped += st.clipped_quantifiers;
  return r;
}

std::optional<AssertionPtr> split_guards(const AssertionPtr& f, const std::string& s) {
  std::vector<AssertionPtr> blocks;
  flatten(f, AKind::And, blocks);
  std::vector<AssertionPtr> out;
  for (const auto& b : blocks) {
    if (!mentions(b, s)) {
      out.push_back(b);
      continue;
    }
    if (b->kind != AKind::Forall || b->a1->kind != AKind::Imp) return std::nullopt;
    const std::string& i = b->var;
    auto g = read_index_guard(b->a1->a1, i, s);
    if (!g) return std::nullopt;
    std::vector<ExprPtr> atoms;
    std::vector<AssertionPtr> rest;
    conjuncts(b->a1->a2, atoms, rest);
    if (!rest.empty()) return std::nullopt;
    std::vector<ExprPtr> low, high;
    for (const auto& e : atoms) {
      auto cls = access_class(e, i, s);
      if (cls == AccessClass::Unsupported) return std::nullopt;
      if (cls == AccessClass::High) high.push_back(fold_constants(substitute(e, s, lit_int(0))));
      else low.push_back(e);
    }
    auto conj = [](const std::vector<ExprPtr>& es) {
      ExprPtr r;
      for (const auto& e : es) r = r ? and_(r, e) : e;
      return r;
    };
    AssertionPtr body;
    if (!low.empty()) body = a_imp(a_pure(le(lit(Value{g->lo}), var(i))), a_pure(conj(low)));
    if (!high.empty()) {
      auto h = a_imp(a_pure(le(var(i), lit(Value{g->c}))), a_pure(conj(high)));
      body = body ? a_and(body, h) : h;
    }
    out.push_back(a_forall(i, b->dom, body ? body : a_true()));
  }
  return a_and_all(out);
}

}  // namespace ctms
