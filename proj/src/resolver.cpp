#include "resolver.hpp"

#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace gt::lang {

namespace {

bool reserved_name(const std::string& n) {
    return helper_from_name(n).has_value() || n == kGhostMarker || n == kRootClass;
}

class Resolver {
  public:
    explicit Resolver(Program& p) : p_(p) {}

    void run() {
        collect();
        for (auto& c : p_.classes) resolve_class(c);
        if (p_.entry_method.empty())
            throw ResolveError({p_.filename, 1}, "no entry method: expected exactly one "
                                                 "zero-parameter method named 'main'");
    }

  private:
    [[noreturn]] void err(const Location& loc, const std::string& msg) {
        throw ResolveError(loc, msg);
    }

    void check_type_exists(const Type& t, const Location& loc) {
        if (t.kind == TypeKind::Ref && t.name != kRootClass && !p_.find_class(t.name))
            err(loc, "unknown type '" + t.name + "'");
    }

    void collect() {
        std::unordered_set<std::string> class_names;
        for (auto& c : p_.classes) {
            if (reserved_name(c.name)) err(c.loc, "'" + c.name + "' is a reserved name");
            if (!class_names.insert(c.name).second)
                err(c.loc, "duplicate class '" + c.name + "'");
        }
        for (auto& c : p_.classes) {
            if (!c.superclass.empty() && c.superclass != kRootClass &&
                !p_.find_class(c.superclass))
                err(c.loc, "unknown superclass '" + c.superclass + "'");
            if (c.superclass == c.name) err(c.loc, "class cannot extend itself");
        }
        // Inheritance cycles.
        for (auto& c : p_.classes) {
            std::unordered_set<std::string> seen;
            std::string cur = c.name;
            while (!cur.empty() && cur != kRootClass) {
                if (!seen.insert(cur).second)
                    err(c.loc, "inheritance cycle through '" + c.name + "'");
                const ClassDecl* cd = p_.find_class(cur);
                if (!cd) break;
                cur = cd->superclass.empty() ? kRootClass : cd->superclass;
            }
        }
        std::unordered_set<std::string> extern_names;
        for (auto& e : p_.externs) {
            if (reserved_name(e.name)) err(e.loc, "'" + e.name + "' is a reserved name");
            if (!extern_names.insert(e.name).second)
                err(e.loc, "duplicate extern '" + e.name + "'");
            for (auto& prm : e.params) check_type_exists(prm.type, e.loc);
            check_type_exists(e.return_type, e.loc);
            switch (e.stub) {
                case StubKind::ReturnsNull:
                    if (!e.return_type.nullable())
                        err(e.loc, "returns_null extern must return a nullable type");
                    break;
                case StubKind::ReturnsFresh:
                    if (e.return_type.kind != TypeKind::Ref &&
                        e.return_type.kind != TypeKind::IntBox)
                        err(e.loc, "returns_fresh extern must return a class or IntBox");
                    if (e.return_type.kind == TypeKind::Ref && e.return_type.name == kRootClass)
                        err(e.loc, "returns_fresh extern cannot return Object");
                    break;
                case StubKind::Echoes:
                    if (e.params.empty()) err(e.loc, "echoes extern needs a parameter");
                    if (!(e.return_type == e.params[0].type))
                        err(e.loc, "echoes extern must return its first parameter's type");
                    break;
                case StubKind::Callback: {
                    if (e.params.empty() || e.params[0].type.kind != TypeKind::Ref)
                        err(e.loc, "callback extern needs an object first parameter");
                    const MethodDecl* m =
                        p_.find_method(e.params[0].type.name, e.callback_method);
                    if (!m)
                        err(e.loc, "callback method '" + e.callback_method +
                                       "' not found on " + e.params[0].type.name);
                    if (e.return_type.kind != TypeKind::Void)
                        err(e.loc, "callback extern must be void");
                    break;
                }
            }
        }
        // Members and the entry method.
        for (auto& c : p_.classes) {
            std::unordered_set<std::string> field_names, method_names;
            for (auto& f : c.fields) {
                if (reserved_name(f.name)) err(f.loc, "'" + f.name + "' is a reserved name");
                if (!field_names.insert(f.name).second)
                    err(f.loc, "duplicate field '" + f.name + "' in " + c.name);
                // Shadowing an inherited field would make lookup ambiguous.
                if (!c.superclass.empty() && p_.find_field(c.superclass, f.name))
                    err(f.loc, "field '" + f.name + "' shadows an inherited field");
                check_type_exists(f.type, f.loc);
            }
            for (auto& m : c.methods) {
                if (reserved_name(m.name)) err(m.loc, "'" + m.name + "' is a reserved name");
                if (!method_names.insert(m.name).second)
                    err(m.loc, "duplicate method '" + m.name + "' in " + c.name);
                check_type_exists(m.return_type, m.loc);
                std::unordered_set<std::string> param_names;
                for (auto& prm : m.params) {
                    if (reserved_name(prm.name))
                        err(prm.loc, "'" + prm.name + "' is a reserved name");
                    if (!param_names.insert(prm.name).second)
                        err(prm.loc, "duplicate parameter '" + prm.name + "'");
                    if (prm.type.kind == TypeKind::Void) err(prm.loc, "void parameter");
                    check_type_exists(prm.type, prm.loc);
                }
                // Overriding must keep the signature.
                if (!c.superclass.empty()) {
                    if (const MethodDecl* base = p_.find_method(c.superclass, m.name)) {
                        bool same = base->params.size() == m.params.size() &&
                                    base->return_type == m.return_type;
                        for (size_t i = 0; same && i < m.params.size(); i++)
                            same = base->params[i].type == m.params[i].type;
                        if (!same)
                            err(m.loc, "override of '" + m.name + "' changes the signature");
                    }
                }
                if (m.name == "main" && m.params.empty()) {
                    if (!p_.entry_method.empty())
                        err(m.loc, "multiple entry methods: 'main' already defined in " +
                                       p_.entry_class);
                    p_.entry_class = c.name;
                    p_.entry_method = "main";
                }
            }
        }
    }

    // ---- body resolution ----

    struct VarInfo {
        Type type;
        bool is_param = false;
        bool is_final = false;
    };

    using Scope = std::unordered_map<std::string, VarInfo>;

    void resolve_class(ClassDecl& c) {
        cur_class_ = &c;
        for (auto& f : c.fields) {
            if (f.init) {
                in_field_init_ = true;
                resolve_expr(*f.init, &f.type);
                in_field_init_ = false;
                require_assignable(f.type, *f.init, f.loc);
            }
        }
        for (auto& m : c.methods) resolve_method(m);
        cur_class_ = nullptr;
    }

    void resolve_method(MethodDecl& m) {
        cur_method_ = &m;
        scopes_.clear();
        scopes_.emplace_back();
        for (auto& prm : m.params)
            scopes_.back()[prm.name] = {prm.type, true, prm.is_final};
        resolve_block(m.body);
        cur_method_ = nullptr;
    }

    void resolve_block(std::vector<StmtPtr>& stmts) {
        scopes_.emplace_back();
        for (auto& s : stmts) resolve_stmt(*s);
        scopes_.pop_back();
    }

    VarInfo* lookup(const std::string& name) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }

    void resolve_stmt(Stmt& s) {
        switch (s.kind) {
            case StmtKind::VarDecl: {
                if (reserved_name(s.name)) err(s.loc, "'" + s.name + "' is a reserved name");
                if (lookup(s.name)) err(s.loc, "redeclaration of '" + s.name + "'");
                if (s.decl_type.kind == TypeKind::Void) err(s.loc, "void variable");
                check_type_exists(s.decl_type, s.loc);
                if (s.expr) {
                    resolve_expr(*s.expr, &s.decl_type);
                    require_assignable(s.decl_type, *s.expr, s.loc);
                }
                scopes_.back()[s.name] = {s.decl_type, false, false};
                break;
            }
            case StmtKind::Assign: {
                resolve_expr(*s.target, nullptr);
                if (s.target->kind == ExprKind::VarRead) {
                    VarInfo* v = lookup(s.target->name);
                    if (v && v->is_final)
                        err(s.loc, "assignment to final parameter '" + s.target->name + "'");
                }
                Type t = s.target->type;
                resolve_expr(*s.expr, &t);
                require_assignable(t, *s.expr, s.loc);
                break;
            }
            case StmtKind::ExprStmt:
                resolve_expr(*s.expr, nullptr);
                break;
            case StmtKind::Return: {
                const Type& rt = cur_method_->return_type;
                if (s.expr) {
                    if (rt.kind == TypeKind::Void)
                        err(s.loc, "void method cannot return a value");
                    resolve_expr(*s.expr, &rt);
                    require_assignable(rt, *s.expr, s.loc);
                } else if (rt.kind != TypeKind::Void) {
                    err(s.loc, "missing return value");
                }
                break;
            }
            case StmtKind::If:
            case StmtKind::While: {
                resolve_expr(*s.expr, nullptr);
                if (s.expr->type.kind != TypeKind::Bool)
                    err(s.loc, "condition must be bool");
                resolve_block(s.body);
                if (!s.else_body.empty()) resolve_block(s.else_body);
                break;
            }
            case StmtKind::TryCatch:
                resolve_block(s.body);
                resolve_block(s.else_body);
                break;
            case StmtKind::Throw:
                resolve_expr(*s.expr, nullptr);
                if (!s.expr->type.nullable())
                    err(s.loc, "throw needs an object expression");
                break;
        }
    }

    // `expected` threads the declared type of the enclosing slot into helper
    // calls so a ghost created by a helper knows which class it haunts.
    void resolve_expr(Expr& e, const Type* expected) {
        e.coerce = Expr::Coerce::None;
        switch (e.kind) {
            case ExprKind::NullLit: e.type = Type::null(); break;
            case ExprKind::IntLit: e.type = Type::int_(); break;
            case ExprKind::BoolLit: e.type = Type::bool_(); break;
            case ExprKind::This:
                if (!cur_method_ || in_field_init_)
                    err(e.loc, "'this' is only available inside methods");
                e.type = Type::ref(cur_class_->name);
                break;
            case ExprKind::VarRead: {
                VarInfo* v = lookup(e.name);
                if (!v) err(e.loc, "undeclared variable '" + e.name + "'");
                e.type = v->type;
                e.binding = v->is_param ? "param" : "local";
                break;
            }
            case ExprKind::New: {
                if (!p_.find_class(e.name)) err(e.loc, "unknown class '" + e.name + "'");
                e.type = Type::ref(e.name);
                break;
            }
            case ExprKind::FieldAccess: {
                resolve_expr(*e.lhs, nullptr);
                if (e.lhs->type.kind != TypeKind::Ref)
                    err(e.loc, "field access on non-object");
                const ClassDecl* owner = nullptr;
                const FieldDecl* f = p_.find_field(e.lhs->type.name, e.name, &owner);
                if (!f)
                    err(e.loc, "no field '" + e.name + "' in " + e.lhs->type.name);
                e.type = f->type;
                e.binding = owner->name;
                break;
            }
            case ExprKind::MethodCall: {
                resolve_expr(*e.lhs, nullptr);
                if (e.lhs->type.kind != TypeKind::Ref)
                    err(e.loc, "method call on non-object");
                const MethodDecl* m = p_.find_method(e.lhs->type.name, e.name);
                if (!m)
                    err(e.loc, "no method '" + e.name + "' in " + e.lhs->type.name);
                if (m->params.size() != e.args.size())
                    err(e.loc, "wrong number of arguments to '" + e.name + "'");
                for (size_t i = 0; i < e.args.size(); i++) {
                    resolve_expr(*e.args[i], &m->params[i].type);
                    require_assignable(m->params[i].type, *e.args[i], e.loc);
                }
                e.type = m->return_type;
                break;
            }
            case ExprKind::ExternCall: {
                const ExternDecl* x = p_.find_extern(e.name);
                if (!x) err(e.loc, "unknown extern '" + e.name + "'");
                if (x->params.size() != e.args.size())
                    err(e.loc, "wrong number of arguments to extern '" + e.name + "'");
                for (size_t i = 0; i < e.args.size(); i++) {
                    resolve_expr(*e.args[i], &x->params[i].type);
                    require_assignable(x->params[i].type, *e.args[i], e.loc);
                }
                e.type = x->return_type;
                break;
            }
            case ExprKind::Binary: resolve_binary(e); break;
            case ExprKind::Unary: {
                resolve_expr(*e.lhs, nullptr);
                if (e.un == UnOp::Not) {
                    if (e.lhs->type.kind != TypeKind::Bool) err(e.loc, "'!' needs bool");
                    e.type = Type::bool_();
                } else {
                    coerce_to_int(*e.lhs, e.loc);
                    e.type = Type::int_();
                }
                break;
            }
            case ExprKind::InstanceOf: {
                resolve_expr(*e.lhs, nullptr);
                bool ghost_test = e.name == kGhostMarker;
                if (ghost_test) {
                    if (!e.lhs->type.nullable())
                        err(e.loc, "instanceof needs a nullable operand");
                } else {
                    if (e.name != kRootClass && !p_.find_class(e.name))
                        err(e.loc, "unknown type '" + e.name + "' in instanceof");
                    if (e.lhs->type.kind != TypeKind::Ref &&
                        e.lhs->type.kind != TypeKind::Null)
                        err(e.loc, "instanceof needs an object operand");
                }
                e.type = Type::bool_();
                break;
            }
            case ExprKind::Helper: resolve_helper(e, expected); break;
        }
    }

    void resolve_binary(Expr& e) {
        switch (e.bin) {
            case BinOp::And:
            case BinOp::Or:
                resolve_expr(*e.lhs, nullptr);
                resolve_expr(*e.rhs, nullptr);
                if (e.lhs->type.kind != TypeKind::Bool || e.rhs->type.kind != TypeKind::Bool)
                    err(e.loc, "logical operator needs bool operands");
                e.type = Type::bool_();
                break;
            case BinOp::Add:
            case BinOp::Sub:
            case BinOp::Mul:
            case BinOp::Div:
                resolve_expr(*e.lhs, nullptr);
                resolve_expr(*e.rhs, nullptr);
                coerce_to_int(*e.lhs, e.loc);
                coerce_to_int(*e.rhs, e.loc);
                e.type = Type::int_();
                break;
            case BinOp::Lt:
            case BinOp::Le:
            case BinOp::Gt:
            case BinOp::Ge:
                resolve_expr(*e.lhs, nullptr);
                resolve_expr(*e.rhs, nullptr);
                coerce_to_int(*e.lhs, e.loc);
                coerce_to_int(*e.rhs, e.loc);
                e.type = Type::bool_();
                break;
            case BinOp::Eq:
            case BinOp::Ne: {
                resolve_expr(*e.lhs, nullptr);
                resolve_expr(*e.rhs, nullptr);
                const Type& a = e.lhs->type;
                const Type& b = e.rhs->type;
                auto is_intish = [](const Type& t) {
                    return t.kind == TypeKind::Int || t.kind == TypeKind::IntBox;
                };
                if (a.kind == TypeKind::Bool && b.kind == TypeKind::Bool) {
                    // ok
                } else if (a.kind == TypeKind::Int || b.kind == TypeKind::Int) {
                    if (!is_intish(a) || !is_intish(b))
                        err(e.loc, "incomparable operands");
                    coerce_to_int(*e.lhs, e.loc);
                    coerce_to_int(*e.rhs, e.loc);
                } else if (a.kind == TypeKind::IntBox && b.kind == TypeKind::IntBox) {
                    // box equality
                } else if (a.nullable() && b.nullable()) {
                    // reference/null comparison; IntBox may only meet null here
                    if ((a.kind == TypeKind::IntBox && b.kind == TypeKind::Ref) ||
                        (b.kind == TypeKind::IntBox && a.kind == TypeKind::Ref))
                        err(e.loc, "incomparable operands");
                } else {
                    err(e.loc, "incomparable operands");
                }
                e.type = Type::bool_();
                break;
            }
        }
    }

    void coerce_to_int(Expr& e, const Location& loc) {
        if (e.type.kind == TypeKind::Int) return;
        if (e.type.kind == TypeKind::IntBox) {
            e.coerce = Expr::Coerce::Unbox;
            return;
        }
        err(loc, "expected an integer expression");
    }

    void resolve_helper(Expr& e, const Type* expected) {
        if (!p_.instrumented)
            err(e.loc, std::string(helper_name(e.helper)) +
                           " is reserved for instrumented programs");
        const Type* hint = expected;
        switch (e.helper) {
            case HelperKind::NullUnbox:
                resolve_expr(*e.lhs, nullptr);
                if (e.lhs->type.kind != TypeKind::IntBox && e.lhs->type.kind != TypeKind::Null)
                    err(e.loc, "nullUnbox needs an IntBox operand");
                e.type = Type::int_();
                e.type_hint = "IntBox";
                break;
            case HelperKind::NullDeref:
            case HelperKind::Exorcise:
            case HelperKind::NullAssign:
            case HelperKind::NullParam:
            case HelperKind::NullPassed:
            case HelperKind::NullReturn: {
                resolve_expr(*e.lhs, hint);
                Type operand = e.lhs->type;
                if (operand.kind == TypeKind::Int && hint &&
                    hint->kind == TypeKind::IntBox) {
                    e.lhs->coerce = Expr::Coerce::Box;
                    operand = Type::intbox();
                }
                if (!operand.nullable())
                    err(e.loc, std::string(helper_name(e.helper)) +
                                   " needs a nullable operand");
                if (operand.kind != TypeKind::Null) {
                    e.type = operand;
                } else if (hint && hint->nullable() && hint->kind != TypeKind::Null) {
                    e.type = *hint;
                } else {
                    e.type = Type::null();
                }
                e.type_hint = e.type.kind == TypeKind::IntBox
                                  ? "IntBox"
                                  : (e.type.kind == TypeKind::Ref ? e.type.name
                                                                  : std::string(kRootClass));
                break;
            }
        }
    }

    bool assignable(const Type& to, const Type& from) {
        if (to == from) return true;
        if (from.kind == TypeKind::Null) return to.nullable();
        if (to.kind == TypeKind::Ref && from.kind == TypeKind::Ref)
            return p_.is_subtype(from.name, to.name);
        if (to.kind == TypeKind::IntBox && from.kind == TypeKind::Int) return true;  // box
        if (to.kind == TypeKind::Int && from.kind == TypeKind::IntBox) return true;  // unbox
        return false;
    }

    void require_assignable(const Type& to, Expr& from, const Location& loc) {
        if (!assignable(to, from.type))
            err(loc, "cannot assign " + from.type.str() + " to " + to.str());
        if (to.kind == TypeKind::IntBox && from.type.kind == TypeKind::Int)
            from.coerce = Expr::Coerce::Box;
        if (to.kind == TypeKind::Int && from.type.kind == TypeKind::IntBox)
            from.coerce = Expr::Coerce::Unbox;
    }

    Program& p_;
    ClassDecl* cur_class_ = nullptr;
    MethodDecl* cur_method_ = nullptr;
    bool in_field_init_ = false;
    std::vector<Scope> scopes_;
};

}  // namespace

void resolve(Program& p) {
    p.entry_class.clear();
    p.entry_method.clear();
    Resolver r(p);
    r.run();
}

}  // namespace gt::lang
