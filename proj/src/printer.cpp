#include "printer.hpp"

#include <sstream>

namespace gt::lang {

namespace {

int prec_of(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Binary:
            switch (e.bin) {
                case BinOp::Or: return 1;
                case BinOp::And: return 2;
                case BinOp::Eq:
                case BinOp::Ne: return 3;
                case BinOp::Lt:
                case BinOp::Le:
                case BinOp::Gt:
                case BinOp::Ge: return 4;
                case BinOp::Add:
                case BinOp::Sub: return 5;
                case BinOp::Mul:
                case BinOp::Div: return 6;
            }
            return 1;
        case ExprKind::InstanceOf: return 4;
        case ExprKind::Unary: return 7;
        default: return 9;
    }
}

const char* binop_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
    }
    return "?";
}

void emit_expr(std::ostream& os, const Expr& e, int parent_prec);

void emit_args(std::ostream& os, const std::vector<ExprPtr>& args) {
    os << "(";
    for (size_t i = 0; i < args.size(); i++) {
        if (i) os << ", ";
        emit_expr(os, *args[i], 0);
    }
    os << ")";
}

void emit_expr(std::ostream& os, const Expr& e, int parent_prec) {
    int prec = prec_of(e);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (e.kind) {
        case ExprKind::NullLit: os << "null"; break;
        case ExprKind::IntLit: os << e.int_val; break;
        case ExprKind::BoolLit: os << (e.bool_val ? "true" : "false"); break;
        case ExprKind::This: os << "this"; break;
        case ExprKind::VarRead: os << e.name; break;
        case ExprKind::New: os << "new " << e.name << "()"; break;
        case ExprKind::FieldAccess:
            emit_expr(os, *e.lhs, 8);
            os << "." << e.name;
            break;
        case ExprKind::MethodCall:
            emit_expr(os, *e.lhs, 8);
            os << "." << e.name;
            emit_args(os, e.args);
            break;
        case ExprKind::ExternCall:
            os << e.name;
            emit_args(os, e.args);
            break;
        case ExprKind::Binary:
            emit_expr(os, *e.lhs, prec);
            os << " " << binop_text(e.bin) << " ";
            emit_expr(os, *e.rhs, prec + 1);
            break;
        case ExprKind::Unary:
            os << (e.un == UnOp::Not ? "!" : "-");
            emit_expr(os, *e.lhs, 7);
            break;
        case ExprKind::InstanceOf:
            emit_expr(os, *e.lhs, 5);
            os << " instanceof " << e.name;
            break;
        case ExprKind::Helper: {
            os << helper_name(e.helper) << "(";
            emit_expr(os, *e.lhs, 0);
            os << ", \"";
            if (!e.tag_var.empty()) os << e.tag_var << ", ";
            os << e.tag_loc.file << ":" << e.tag_loc.line << "\")";
            break;
        }
    }
    if (paren) os << ")";
}

void emit_block(std::ostream& os, const std::vector<StmtPtr>& stmts, int indent);

void emit_stmt(std::ostream& os, const Stmt& s, int indent) {
    std::string pad(static_cast<size_t>(indent) * 4, ' ');
    os << pad;
    switch (s.kind) {
        case StmtKind::VarDecl:
            os << s.decl_type.str() << " " << s.name;
            if (s.expr) {
                os << " = ";
                emit_expr(os, *s.expr, 0);
            }
            os << ";\n";
            break;
        case StmtKind::Assign:
            emit_expr(os, *s.target, 0);
            os << " = ";
            emit_expr(os, *s.expr, 0);
            os << ";\n";
            break;
        case StmtKind::ExprStmt:
            emit_expr(os, *s.expr, 0);
            os << ";\n";
            break;
        case StmtKind::Return:
            os << "return";
            if (s.expr) {
                os << " ";
                emit_expr(os, *s.expr, 0);
            }
            os << ";\n";
            break;
        case StmtKind::If:
            os << "if (";
            emit_expr(os, *s.expr, 0);
            os << ") {\n";
            emit_block(os, s.body, indent + 1);
            os << pad << "}";
            if (!s.else_body.empty()) {
                os << " else {\n";
                emit_block(os, s.else_body, indent + 1);
                os << pad << "}";
            }
            os << "\n";
            break;
        case StmtKind::While:
            os << "while (";
            emit_expr(os, *s.expr, 0);
            os << ") {\n";
            emit_block(os, s.body, indent + 1);
            os << pad << "}\n";
            break;
        case StmtKind::TryCatch:
            os << "try {\n";
            emit_block(os, s.body, indent + 1);
            os << pad << "} catch {\n";
            emit_block(os, s.else_body, indent + 1);
            os << pad << "}\n";
            break;
        case StmtKind::Throw:
            os << "throw ";
            emit_expr(os, *s.expr, 0);
            os << ";\n";
            break;
    }
}

void emit_block(std::ostream& os, const std::vector<StmtPtr>& stmts, int indent) {
    for (const auto& s : stmts) emit_stmt(os, *s, indent);
}

}  // namespace

std::string print_expr(const Expr& e) {
    std::ostringstream os;
    emit_expr(os, e, 0);
    return os.str();
}

std::string pretty_print(const Program& p) {
    std::ostringstream os;
    if (p.instrumented) os << "#instrumented\n";
    for (const auto& e : p.externs) {
        os << "extern " << e.name << "(";
        for (size_t i = 0; i < e.params.size(); i++) {
            if (i) os << ", ";
            os << e.params[i].type.str() << " " << e.params[i].name;
        }
        os << ")";
        if (e.return_type.kind != TypeKind::Void) os << ": " << e.return_type.str();
        switch (e.stub) {
            case StubKind::ReturnsNull: os << " returns_null"; break;
            case StubKind::ReturnsFresh: os << " returns_fresh"; break;
            case StubKind::Echoes: os << " echoes"; break;
            case StubKind::Callback: os << " callback " << e.callback_method; break;
        }
        os << ";\n";
    }
    if (!p.externs.empty()) os << "\n";
    for (size_t ci = 0; ci < p.classes.size(); ci++) {
        const auto& c = p.classes[ci];
        os << "class " << c.name;
        if (!c.superclass.empty()) os << " extends " << c.superclass;
        os << " {\n";
        for (const auto& f : c.fields) {
            os << "    " << f.type.str() << " " << f.name;
            if (f.init) {
                os << " = ";
                emit_expr(os, *f.init, 0);
            }
            os << ";\n";
        }
        for (const auto& m : c.methods) {
            os << "    " << m.return_type.str() << " " << m.name << "(";
            for (size_t i = 0; i < m.params.size(); i++) {
                if (i) os << ", ";
                if (m.params[i].is_final) os << "final ";
                os << m.params[i].type.str() << " " << m.params[i].name;
            }
            os << ") {\n";
            emit_block(os, m.body, 2);
            os << "    }\n";
        }
        os << "}";
        os << (ci + 1 < p.classes.size() ? "\n\n" : "\n");
    }
    return os.str();
}

}  // namespace gt::lang
