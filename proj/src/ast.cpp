#include "ast.hpp"

namespace gt::lang {

std::string Type::str() const {
    switch (kind) {
        case TypeKind::Void: return "void";
        case TypeKind::Int: return "int";
        case TypeKind::Bool: return "bool";
        case TypeKind::IntBox: return "IntBox";
        case TypeKind::Ref: return name;
        case TypeKind::Null: return "null";
    }
    return "?";
}

bool operator==(const Type& a, const Type& b) {
    return a.kind == b.kind && (a.kind != TypeKind::Ref || a.name == b.name);
}

const char* helper_name(HelperKind k) {
    switch (k) {
        case HelperKind::NullAssign: return "nullAssign";
        case HelperKind::NullParam: return "nullParam";
        case HelperKind::NullPassed: return "nullPassed";
        case HelperKind::NullReturn: return "nullReturn";
        case HelperKind::Exorcise: return "exorcise";
        case HelperKind::NullUnbox: return "nullUnbox";
        case HelperKind::NullDeref: return "nullDeref";
    }
    return "?";
}

std::optional<HelperKind> helper_from_name(const std::string& s) {
    static const std::pair<const char*, HelperKind> table[] = {
        {"nullAssign", HelperKind::NullAssign}, {"nullParam", HelperKind::NullParam},
        {"nullPassed", HelperKind::NullPassed}, {"nullReturn", HelperKind::NullReturn},
        {"exorcise", HelperKind::Exorcise},     {"nullUnbox", HelperKind::NullUnbox},
        {"nullDeref", HelperKind::NullDeref},
    };
    for (const auto& [n, k] : table)
        if (s == n) return k;
    return std::nullopt;
}

ExprPtr Expr::make(ExprKind k, Location loc) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->loc = std::move(loc);
    return e;
}

ExprPtr clone(const Expr& e) {
    auto c = std::make_unique<Expr>();
    c->kind = e.kind;
    c->loc = e.loc;
    c->int_val = e.int_val;
    c->bool_val = e.bool_val;
    c->name = e.name;
    if (e.lhs) c->lhs = clone(*e.lhs);
    if (e.rhs) c->rhs = clone(*e.rhs);
    for (const auto& a : e.args) c->args.push_back(clone(*a));
    c->bin = e.bin;
    c->un = e.un;
    c->helper = e.helper;
    c->tag_var = e.tag_var;
    c->tag_loc = e.tag_loc;
    c->synthetic = e.synthetic;
    c->type = e.type;
    c->coerce = e.coerce;
    c->type_hint = e.type_hint;
    c->binding = e.binding;
    return c;
}

static bool eq_opt(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return structurally_equal(*a, *b);
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::IntLit:
            if (a.int_val != b.int_val) return false;
            break;
        case ExprKind::BoolLit:
            if (a.bool_val != b.bool_val) return false;
            break;
        case ExprKind::Binary:
            if (a.bin != b.bin) return false;
            break;
        case ExprKind::Unary:
            if (a.un != b.un) return false;
            break;
        case ExprKind::Helper:
            if (a.helper != b.helper || a.tag_var != b.tag_var ||
                !same_location(a.tag_loc, b.tag_loc))
                return false;
            break;
        default:
            break;
    }
    if (a.name != b.name) return false;
    if (!eq_opt(a.lhs, b.lhs) || !eq_opt(a.rhs, b.rhs)) return false;
    if (a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); i++)
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

std::string expr_signature(const Expr& e) {
    switch (e.kind) {
        case ExprKind::NullLit: return "null";
        case ExprKind::IntLit: return std::to_string(e.int_val);
        case ExprKind::BoolLit: return e.bool_val ? "true" : "false";
        case ExprKind::This: return "this";
        case ExprKind::VarRead: return e.type.str() + " " + e.name;
        case ExprKind::New: return "new " + e.name + "()";
        case ExprKind::FieldAccess: return e.type.str() + " " + e.name;
        case ExprKind::MethodCall: {
            std::string recv = e.lhs ? e.lhs->type.str() : "?";
            std::string sig = recv + "." + e.name + "(";
            for (size_t i = 0; i < e.args.size(); i++) {
                if (i) sig += ",";
                sig += e.args[i]->type.str();
            }
            return sig + ")";
        }
        case ExprKind::ExternCall: {
            std::string sig = "extern " + e.name + "(";
            for (size_t i = 0; i < e.args.size(); i++) {
                if (i) sig += ",";
                sig += e.args[i]->type.str();
            }
            return sig + ")";
        }
        case ExprKind::Binary: return "<expr>";
        case ExprKind::Unary: return "<expr>";
        case ExprKind::InstanceOf: return "<expr>";
        case ExprKind::Helper: return e.lhs ? expr_signature(*e.lhs) : "<expr>";
    }
    return "<expr>";
}

StmtPtr Stmt::make(StmtKind k, Location loc) {
    auto s = std::make_unique<Stmt>();
    s->kind = k;
    s->loc = std::move(loc);
    return s;
}

StmtPtr clone(const Stmt& s) {
    auto c = std::make_unique<Stmt>();
    c->kind = s.kind;
    c->loc = s.loc;
    c->decl_type = s.decl_type;
    c->name = s.name;
    if (s.target) c->target = clone(*s.target);
    if (s.expr) c->expr = clone(*s.expr);
    for (const auto& st : s.body) c->body.push_back(clone(*st));
    for (const auto& st : s.else_body) c->else_body.push_back(clone(*st));
    return c;
}

static bool eq_block(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); i++)
        if (!structurally_equal(*a[i], *b[i])) return false;
    return true;
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
    if (a.kind != b.kind || a.name != b.name) return false;
    if (a.kind == StmtKind::VarDecl && !(a.decl_type == b.decl_type)) return false;
    if (!a.target != !b.target) return false;
    if (a.target && !structurally_equal(*a.target, *b.target)) return false;
    if (!a.expr != !b.expr) return false;
    if (a.expr && !structurally_equal(*a.expr, *b.expr)) return false;
    return eq_block(a.body, b.body) && eq_block(a.else_body, b.else_body);
}

Program Program::clone() const {
    Program p;
    p.filename = filename;
    p.instrumented = instrumented;
    p.entry_class = entry_class;
    p.entry_method = entry_method;
    p.externs = externs;  // ExternDecl holds no owning pointers
    for (const auto& c : classes) {
        ClassDecl cc;
        cc.name = c.name;
        cc.superclass = c.superclass;
        cc.loc = c.loc;
        for (const auto& f : c.fields) {
            FieldDecl fd;
            fd.type = f.type;
            fd.name = f.name;
            fd.loc = f.loc;
            if (f.init) fd.init = lang::clone(*f.init);
            cc.fields.push_back(std::move(fd));
        }
        for (const auto& m : c.methods) {
            MethodDecl md;
            md.name = m.name;
            md.params = m.params;
            md.return_type = m.return_type;
            md.loc = m.loc;
            for (const auto& st : m.body) md.body.push_back(lang::clone(*st));
            cc.methods.push_back(std::move(md));
        }
        p.classes.push_back(std::move(cc));
    }
    return p;
}

const ClassDecl* Program::find_class(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name) return &c;
    return nullptr;
}

const ExternDecl* Program::find_extern(const std::string& name) const {
    for (const auto& e : externs)
        if (e.name == name) return &e;
    return nullptr;
}

const MethodDecl* Program::find_method(const std::string& cls, const std::string& method,
                                       const ClassDecl** owner) const {
    const ClassDecl* c = find_class(cls);
    while (c) {
        for (const auto& m : c->methods)
            if (m.name == method) {
                if (owner) *owner = c;
                return &m;
            }
        c = c->superclass.empty() ? nullptr : find_class(c->superclass);
    }
    return nullptr;
}

const FieldDecl* Program::find_field(const std::string& cls, const std::string& field,
                                     const ClassDecl** owner) const {
    const ClassDecl* c = find_class(cls);
    while (c) {
        for (const auto& f : c->fields)
            if (f.name == field) {
                if (owner) *owner = c;
                return &f;
            }
        c = c->superclass.empty() ? nullptr : find_class(c->superclass);
    }
    return nullptr;
}

bool Program::is_subtype(const std::string& sub, const std::string& super) const {
    if (super == kRootClass) return true;
    std::string cur = sub;
    while (!cur.empty() && cur != kRootClass) {
        if (cur == super) return true;
        const ClassDecl* c = find_class(cur);
        if (!c) return false;
        cur = c->superclass.empty() ? kRootClass : c->superclass;
    }
    return cur == super;
}

bool structurally_equal(const Program& a, const Program& b) {
    if (a.instrumented != b.instrumented) return false;
    if (a.classes.size() != b.classes.size() || a.externs.size() != b.externs.size())
        return false;
    for (size_t i = 0; i < a.externs.size(); i++) {
        const auto& x = a.externs[i];
        const auto& y = b.externs[i];
        if (x.name != y.name || !(x.return_type == y.return_type) || x.stub != y.stub ||
            x.callback_method != y.callback_method || x.params.size() != y.params.size())
            return false;
        for (size_t j = 0; j < x.params.size(); j++)
            if (x.params[j].name != y.params[j].name || !(x.params[j].type == y.params[j].type))
                return false;
    }
    for (size_t i = 0; i < a.classes.size(); i++) {
        const auto& x = a.classes[i];
        const auto& y = b.classes[i];
        if (x.name != y.name || x.superclass != y.superclass ||
            x.fields.size() != y.fields.size() || x.methods.size() != y.methods.size())
            return false;
        for (size_t j = 0; j < x.fields.size(); j++) {
            const auto& f = x.fields[j];
            const auto& g = y.fields[j];
            if (f.name != g.name || !(f.type == g.type)) return false;
            if (!f.init != !g.init) return false;
            if (f.init && !structurally_equal(*f.init, *g.init)) return false;
        }
        for (size_t j = 0; j < x.methods.size(); j++) {
            const auto& m = x.methods[j];
            const auto& n = y.methods[j];
            if (m.name != n.name || !(m.return_type == n.return_type) ||
                m.params.size() != n.params.size())
                return false;
            for (size_t k = 0; k < m.params.size(); k++)
                if (m.params[k].name != n.params[k].name ||
                    !(m.params[k].type == n.params[k].type) ||
                    m.params[k].is_final != n.params[k].is_final)
                    return false;
            if (!eq_block(m.body, n.body)) return false;
        }
    }
    return true;
}

}  // namespace gt::lang
