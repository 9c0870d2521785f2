#include "transform.hpp"

#include <sstream>
#include <unordered_set>

#include "resolver.hpp"

namespace gt::transform {

using namespace lang;

namespace {

class Instrumenter {
  public:
    Instrumenter(Program& out, Report& report) : p_(out), report_(report) {}

    void run() {
        for (auto& c : p_.classes) {
            for (auto& f : c.fields) rewrite_field_decl(f);
            for (auto& m : c.methods) rewrite_method(m);
        }
    }

  private:
    void applied(const char* rule, const Location& loc) {
        report_.counts[rule]++;
        report_.applications.push_back({rule, loc});
    }

    ExprPtr make_helper(HelperKind hk, ExprPtr value, std::string tag_var,
                        const Location& construct_loc) {
        auto h = Expr::make(ExprKind::Helper, value->loc);
        h->helper = hk;
        h->synthetic = true;
        h->lhs = std::move(value);
        h->tag_var = std::move(tag_var);
        h->tag_loc = construct_loc;
        h->type = h->lhs->type;
        return h;
    }

    ExprPtr null_lit(const Location& loc) {
        auto e = Expr::make(ExprKind::NullLit, loc);
        e->synthetic = true;
        return e;
    }

    // ---- declarations ----

    void rewrite_field_decl(FieldDecl& f) {
        if (f.init) {
            rewrite_expr(f.init);
            if (f.type.nullable()) {
                f.init = make_helper(HelperKind::NullAssign, std::move(f.init), f.name, f.loc);
                applied(rules::kAssign, f.loc);
            }
        } else if (f.type.nullable()) {
            // Implicit null: made explicit so the inception is traced when the
            // initializer runs at instance creation.
            f.init = make_helper(HelperKind::NullAssign, null_lit(f.loc), f.name, f.loc);
            applied(rules::kDeclDefault, f.loc);
        }
    }

    void rewrite_method(MethodDecl& m) {
        cur_method_ = &m;
        for (auto& s : m.body) rewrite_stmt(*s);
        // Entry hooks come last so the pass never revisits them. A final
        // parameter cannot be reassigned, so it is renamed and a local with
        // the original name takes its place; the body stays untouched.
        std::vector<StmtPtr> prologue;
        for (auto& prm : m.params) {
            if (!prm.type.nullable()) continue;
            if (prm.is_final) {
                std::string dup = fresh_name(m, prm.name + "_dup");
                std::string original = prm.name;
                prm.name = dup;
                auto decl = Stmt::make(StmtKind::VarDecl, m.loc);
                decl->decl_type = prm.type;
                decl->name = original;
                auto read = Expr::make(ExprKind::VarRead, m.loc);
                read->name = dup;
                read->type = prm.type;
                decl->expr =
                    make_helper(HelperKind::NullPassed, std::move(read), original, m.loc);
                prologue.push_back(std::move(decl));
            } else {
                auto assign = Stmt::make(StmtKind::Assign, m.loc);
                auto target = Expr::make(ExprKind::VarRead, m.loc);
                target->name = prm.name;
                target->type = prm.type;
                assign->target = std::move(target);
                auto read = Expr::make(ExprKind::VarRead, m.loc);
                read->name = prm.name;
                read->type = prm.type;
                assign->expr =
                    make_helper(HelperKind::NullPassed, std::move(read), prm.name, m.loc);
                prologue.push_back(std::move(assign));
            }
            applied(rules::kMethodEntry, prm.loc);
        }
        for (auto it = prologue.rbegin(); it != prologue.rend(); ++it)
            m.body.insert(m.body.begin(), std::move(*it));
        cur_method_ = nullptr;
    }

    std::string fresh_name(const MethodDecl& m, std::string base) {
        std::unordered_set<std::string> used;
        for (const auto& prm : m.params) used.insert(prm.name);
        collect_names(m.body, used);
        std::string name = base;
        int n = 1;
        while (used.count(name)) name = base + std::to_string(n++);
        return name;
    }

    void collect_names(const std::vector<StmtPtr>& stmts, std::unordered_set<std::string>& out) {
        for (const auto& s : stmts) {
            if (s->kind == StmtKind::VarDecl) out.insert(s->name);
            collect_names(s->body, out);
            collect_names(s->else_body, out);
        }
    }

    // ---- statements ----

    void rewrite_stmt(Stmt& s) {
        switch (s.kind) {
            case StmtKind::VarDecl:
                if (s.expr) {
                    rewrite_expr(s.expr);
                    if (s.decl_type.nullable()) {
                        s.expr = make_helper(HelperKind::NullAssign, std::move(s.expr), s.name,
                                             s.loc);
                        applied(rules::kAssign, s.loc);
                    }
                } else if (s.decl_type.nullable()) {
                    s.expr =
                        make_helper(HelperKind::NullAssign, null_lit(s.loc), s.name, s.loc);
                    applied(rules::kDeclDefault, s.loc);
                }
                break;
            case StmtKind::Assign: {
                if (s.target->kind == ExprKind::FieldAccess) rewrite_expr(s.target);
                rewrite_expr(s.expr);
                const Type& t = s.target->type;
                if (t.nullable()) {
                    std::string var = s.target->name;
                    s.expr = make_helper(HelperKind::NullAssign, std::move(s.expr), var, s.loc);
                    applied(rules::kAssign, s.loc);
                }
                break;
            }
            case StmtKind::ExprStmt:
            case StmtKind::Throw:
                rewrite_expr(s.expr);
                break;
            case StmtKind::Return:
                if (s.expr) {
                    rewrite_expr(s.expr);
                    if (cur_method_->return_type.nullable()) {
                        s.expr = make_helper(HelperKind::NullReturn, std::move(s.expr), "",
                                             s.loc);
                        applied(rules::kReturn, s.loc);
                    }
                }
                break;
            case StmtKind::If:
            case StmtKind::While:
                rewrite_expr(s.expr);
                for (auto& st : s.body) rewrite_stmt(*st);
                for (auto& st : s.else_body) rewrite_stmt(*st);
                break;
            case StmtKind::TryCatch:
                for (auto& st : s.body) rewrite_stmt(*st);
                for (auto& st : s.else_body) rewrite_stmt(*st);
                break;
        }
    }

    // ---- expressions (children first; every rule fires at most once per node) ----

    void rewrite_expr(ExprPtr& e) {
        // Lift the unbox coercion off the node: whatever wrapper the rules
        // produce, the checked unbox goes outermost.
        bool unboxed = e->coerce == Expr::Coerce::Unbox;
        if (unboxed) e->coerce = Expr::Coerce::None;

        switch (e->kind) {
            case ExprKind::NullLit:
            case ExprKind::IntLit:
            case ExprKind::BoolLit:
            case ExprKind::This:
            case ExprKind::VarRead:
            case ExprKind::New:
                break;
            case ExprKind::FieldAccess: {
                rewrite_expr(e->lhs);
                // `this` and fresh instances are provably non-null.
                if (e->lhs->kind != ExprKind::This && e->lhs->kind != ExprKind::New) {
                    std::string var = e->lhs->kind == ExprKind::VarRead ||
                                              e->lhs->kind == ExprKind::FieldAccess
                                          ? e->lhs->name
                                          : std::string();
                    Location loc = e->loc;
                    e->lhs = make_helper(HelperKind::NullDeref, std::move(e->lhs), var, loc);
                    applied(rules::kFieldAccess, loc);
                }
                break;
            }
            case ExprKind::MethodCall: {
                rewrite_expr(e->lhs);
                const MethodDecl* callee = nullptr;
                if (e->lhs->type.kind == TypeKind::Ref)
                    callee = p_.find_method(e->lhs->type.name, e->name);
                for (size_t i = 0; i < e->args.size(); i++) {
                    rewrite_expr(e->args[i]);
                    if (callee && i < callee->params.size() &&
                        callee->params[i].type.nullable()) {
                        Location loc = e->loc;
                        e->args[i] = make_helper(HelperKind::NullParam, std::move(e->args[i]),
                                                 callee->params[i].name, loc);
                        applied(rules::kCallArgs, loc);
                    }
                }
                break;
            }
            case ExprKind::ExternCall: {
                const ExternDecl* ext = p_.find_extern(e->name);
                for (size_t i = 0; i < e->args.size(); i++) {
                    rewrite_expr(e->args[i]);
                    if (ext && i < ext->params.size() && ext->params[i].type.nullable()) {
                        Location loc = e->loc;
                        e->args[i] = make_helper(HelperKind::Exorcise, std::move(e->args[i]),
                                                 ext->params[i].name, loc);
                        applied(rules::kExternCall, loc);
                    }
                }
                if (ext && ext->return_type.nullable()) {
                    Location loc = e->loc;
                    Type t = e->type;
                    e = make_helper(HelperKind::NullReturn, std::move(e), "", loc);
                    e->type = t;
                    applied(rules::kExternReturn, loc);
                }
                break;
            }
            case ExprKind::Binary:
                rewrite_expr(e->lhs);
                rewrite_expr(e->rhs);
                if (!e->synthetic && (e->bin == BinOp::Eq || e->bin == BinOp::Ne))
                    rewrite_equality(e);
                break;
            case ExprKind::Unary:
                rewrite_expr(e->lhs);
                break;
            case ExprKind::InstanceOf:
                rewrite_expr(e->lhs);
                if (!e->synthetic && e->name != kGhostMarker) {
                    // e instanceof T  ->  e instanceof T && !(e instanceof NullGhost)
                    Location loc = e->loc;
                    auto marker = Expr::make(ExprKind::InstanceOf, loc);
                    marker->synthetic = true;
                    marker->name = kGhostMarker;
                    marker->lhs = clone(*e->lhs);
                    auto not_ghost = Expr::make(ExprKind::Unary, loc);
                    not_ghost->synthetic = true;
                    not_ghost->un = UnOp::Not;
                    not_ghost->lhs = std::move(marker);
                    auto conj = Expr::make(ExprKind::Binary, loc);
                    conj->synthetic = true;
                    conj->bin = BinOp::And;
                    conj->type = Type::bool_();
                    conj->lhs = std::move(e);
                    conj->rhs = std::move(not_ghost);
                    e = std::move(conj);
                    applied(rules::kInstanceOf, loc);
                }
                break;
            case ExprKind::Helper:
                // Output of another rule; never consumed again.
                break;
        }

        if (unboxed) {
            Location loc = e->loc;
            std::string var = e->kind == ExprKind::VarRead ? e->name : std::string();
            if (e->kind == ExprKind::FieldAccess) var = e->name;
            e = make_helper(HelperKind::NullUnbox, std::move(e), var, loc);
            e->type = Type::int_();
            applied(rules::kUnbox, loc);
        }
    }

    ExprPtr ghost_test(const Expr& operand, const Location& loc) {
        auto inst = Expr::make(ExprKind::InstanceOf, loc);
        inst->synthetic = true;
        inst->name = kGhostMarker;
        inst->lhs = clone(operand);
        inst->type = Type::bool_();
        return inst;
    }

    ExprPtr disjunction(ExprPtr a, ExprPtr b, const Location& loc, BinOp op) {
        auto d = Expr::make(ExprKind::Binary, loc);
        d->synthetic = true;
        d->bin = op;
        d->type = Type::bool_();
        d->lhs = std::move(a);
        d->rhs = std::move(b);
        return d;
    }

    ExprPtr negation(ExprPtr a, const Location& loc) {
        auto n = Expr::make(ExprKind::Unary, loc);
        n->synthetic = true;
        n->un = UnOp::Not;
        n->type = Type::bool_();
        n->lhs = std::move(a);
        return n;
    }

    // (x == null) || (x instanceof NullGhost), evaluating the original
    // comparison first.
    ExprPtr nullish(const Expr& x, const Location& loc) {
        auto eq = Expr::make(ExprKind::Binary, loc);
        eq->synthetic = true;
        eq->bin = BinOp::Eq;
        eq->type = Type::bool_();
        eq->lhs = clone(x);
        eq->rhs = null_lit(loc);
        return disjunction(std::move(eq), ghost_test(x, loc), loc, BinOp::Or);
    }

    void rewrite_equality(ExprPtr& e) {
        bool lhs_null = e->lhs->kind == ExprKind::NullLit;
        bool rhs_null = e->rhs->kind == ExprKind::NullLit;
        Location loc = e->loc;
        if (lhs_null || rhs_null) {
            const Expr& operand = rhs_null ? *e->lhs : *e->rhs;
            if (!operand.type.nullable() && operand.kind != ExprKind::NullLit) return;
            bool ne = e->bin == BinOp::Ne;
            ExprPtr marker = ghost_test(operand, loc);
            if (ne) {
                // e1 != null  ->  !((e1 == null) || (e1 instanceof NullGhost))
                e->bin = BinOp::Eq;
                ExprPtr rewritten =
                    negation(disjunction(std::move(e), std::move(marker), loc, BinOp::Or), loc);
                e = std::move(rewritten);
                applied(rules::kNeNull, loc);
            } else {
                e = disjunction(std::move(e), std::move(marker), loc, BinOp::Or);
                applied(rules::kEqNull, loc);
            }
            return;
        }
        // General reference equality: a ghost stands for null on either side,
        // so two null-ish operands compare equal. Operands are duplicated,
        // hence the purity requirement.
        if (!e->lhs->type.nullable() || !e->rhs->type.nullable()) return;
        if (!is_pure(*e->lhs) || !is_pure(*e->rhs)) return;
        bool ne = e->bin == BinOp::Ne;
        ExprPtr both_nullish =
            disjunction(nullish(*e->lhs, loc), nullish(*e->rhs, loc), loc, BinOp::And);
        e->bin = BinOp::Eq;
        ExprPtr rewritten =
            disjunction(std::move(e), std::move(both_nullish), loc, BinOp::Or);
        if (ne) rewritten = negation(std::move(rewritten), loc);
        e = std::move(rewritten);
        applied(rules::kRefEq, loc);
    }

    Program& p_;
    Report& report_;
    MethodDecl* cur_method_ = nullptr;
};

}  // namespace

bool is_pure(const Expr& e) {
    switch (e.kind) {
        case ExprKind::NullLit:
        case ExprKind::IntLit:
        case ExprKind::BoolLit:
        case ExprKind::This:
        case ExprKind::VarRead:
            return true;
        case ExprKind::FieldAccess:
            return is_pure(*e.lhs);
        default:
            return false;
    }
}

Result instrument(const Program& p) {
    if (p.instrumented) throw AlreadyInstrumented();
    Result r;
    r.program = p.clone();
    r.program.instrumented = true;
    Instrumenter ins(r.program, r.report);
    ins.run();
    // The instrumented program must be a well-formed program in its own
    // right; resolving also refreshes every annotation the rewrites touched.
    resolve(r.program);
    return r;
}

std::string report_summary(const Report& r) {
    std::ostringstream os;
    for (const auto& [rule, n] : r.counts) os << rule << ": " << n << "\n";
    os << "total: " << r.total() << "\n";
    return os.str();
}

}  // namespace gt::transform
