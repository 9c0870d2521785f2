// Independent count of instrumentable constructs in an original (resolved,
// uninstrumented) program. Walks the AST afresh so transform reports can be
// checked against it; deliberately shares no code with the rewrite engine.
#pragma once

#include <map>
#include <string>

#include "ast.hpp"

namespace gt::testing {

using Counts = std::map<std::string, int>;

class Census {
  public:
    explicit Census(const lang::Program& p) : p_(p) {}

    Counts run() {
        using namespace lang;
        for (const auto& c : p_.classes) {
            for (const auto& f : c.fields) {
                if (f.init) {
                    visit(*f.init);
                    if (f.type.nullable()) counts_["assign"]++;
                } else if (f.type.nullable()) {
                    counts_["decl_default"]++;
                }
            }
            for (const auto& m : c.methods) {
                for (const auto& prm : m.params)
                    if (prm.type.nullable()) counts_["method_entry"]++;
                ret_nullable_ = m.return_type.nullable();
                for (const auto& s : m.body) visit(*s);
            }
        }
        return counts_;
    }

  private:
    bool pure(const lang::Expr& e) const {
        using lang::ExprKind;
        switch (e.kind) {
            case ExprKind::NullLit:
            case ExprKind::IntLit:
            case ExprKind::BoolLit:
            case ExprKind::This:
            case ExprKind::VarRead:
                return true;
            case ExprKind::FieldAccess:
                return pure(*e.lhs);
            default:
                return false;
        }
    }

    void visit(const lang::Stmt& s) {
        using namespace lang;
        switch (s.kind) {
            case StmtKind::VarDecl:
                if (s.expr) {
                    visit(*s.expr);
                    if (s.decl_type.nullable()) counts_["assign"]++;
                } else if (s.decl_type.nullable()) {
                    counts_["decl_default"]++;
                }
                break;
            case StmtKind::Assign:
                visit(*s.target);
                visit(*s.expr);
                if (s.target->type.nullable()) counts_["assign"]++;
                break;
            case StmtKind::ExprStmt:
            case StmtKind::Throw:
                visit(*s.expr);
                break;
            case StmtKind::Return:
                if (s.expr) {
                    visit(*s.expr);
                    if (ret_nullable_) counts_["return"]++;
                }
                break;
            case StmtKind::If:
            case StmtKind::While:
                visit(*s.expr);
                for (const auto& st : s.body) visit(*st);
                for (const auto& st : s.else_body) visit(*st);
                break;
            case StmtKind::TryCatch:
                for (const auto& st : s.body) visit(*st);
                for (const auto& st : s.else_body) visit(*st);
                break;
        }
    }

    void visit(const lang::Expr& e) {
        using namespace lang;
        if (e.coerce == Expr::Coerce::Unbox) counts_["unbox"]++;
        switch (e.kind) {
            case ExprKind::FieldAccess:
                visit(*e.lhs);
                if (e.lhs->kind != ExprKind::This && e.lhs->kind != ExprKind::New)
                    counts_["field_access"]++;
                break;
            case ExprKind::MethodCall: {
                visit(*e.lhs);
                const MethodDecl* callee = nullptr;
                if (e.lhs->type.kind == TypeKind::Ref)
                    callee = p_.find_method(e.lhs->type.name, e.name);
                for (size_t i = 0; i < e.args.size(); i++) {
                    visit(*e.args[i]);
                    if (callee && i < callee->params.size() &&
                        callee->params[i].type.nullable())
                        counts_["call_args"]++;
                }
                break;
            }
            case ExprKind::ExternCall: {
                const ExternDecl* ext = p_.find_extern(e.name);
                for (size_t i = 0; i < e.args.size(); i++) {
                    visit(*e.args[i]);
                    if (ext && i < ext->params.size() && ext->params[i].type.nullable())
                        counts_["extern_call"]++;
                }
                if (ext && ext->return_type.nullable()) counts_["extern_return"]++;
                break;
            }
            case ExprKind::Binary: {
                visit(*e.lhs);
                visit(*e.rhs);
                if (e.bin == BinOp::Eq || e.bin == BinOp::Ne) {
                    bool lhs_null = e.lhs->kind == ExprKind::NullLit;
                    bool rhs_null = e.rhs->kind == ExprKind::NullLit;
                    if (lhs_null || rhs_null) {
                        const Expr& other = rhs_null ? *e.lhs : *e.rhs;
                        if (other.type.nullable() || other.kind == ExprKind::NullLit)
                            counts_[e.bin == BinOp::Eq ? "eq_null" : "ne_null"]++;
                    } else if (e.lhs->type.nullable() && e.rhs->type.nullable() &&
                               pure(*e.lhs) && pure(*e.rhs)) {
                        counts_["ref_eq"]++;
                    }
                }
                break;
            }
            case ExprKind::Unary:
                visit(*e.lhs);
                break;
            case ExprKind::InstanceOf:
                visit(*e.lhs);
                if (e.name != kGhostMarker) counts_["instanceof"]++;
                break;
            case ExprKind::Helper:
                // not expected in original programs
                break;
            default:
                break;
        }
    }

    const lang::Program& p_;
    Counts counts_;
    bool ret_nullable_ = false;
};

inline Counts census(const lang::Program& p) { return Census(p).run(); }

}  // namespace gt::testing
