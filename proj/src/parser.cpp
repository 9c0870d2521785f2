#include "parser.hpp"

#include <cctype>
#include <unordered_set>

namespace gt::lang {

namespace {

enum class Tok {
    End,
    Ident,
    Int,
    String,  // only legal as an instrumentation tag
    Punct,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    long long int_val = 0;
    int line = 1;
    int col = 1;
};

class Lexer {
  public:
    Lexer(const std::string& src, std::string file) : src_(src), file_(std::move(file)) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::Ident;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                t.text += advance();
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Tok::Int;
            std::string num;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                num += advance();
            t.int_val = std::stoll(num);
            t.text = num;
            return t;
        }
        if (c == '"') {
            t.kind = Tok::String;
            advance();
            while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n')
                t.text += advance();
            if (pos_ >= src_.size() || src_[pos_] != '"')
                throw ParseError({file_, t.line}, t.col, "unterminated string tag");
            advance();
            return t;
        }
        t.kind = Tok::Punct;
        static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||"};
        for (const char* op : two) {
            if (src_.compare(pos_, 2, op) == 0) {
                t.text = op;
                advance();
                advance();
                return t;
            }
        }
        t.text = std::string(1, advance());
        return t;
    }

  private:
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            line_++;
            col_ = 1;
        } else {
            col_++;
        }
        return c;
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    const std::string& src_;
    std::string file_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::unordered_set<std::string> kKeywords = {
    "class", "extends", "void",  "int",   "bool",    "IntBox", "true",
    "false", "null",    "this",  "new",   "return",  "if",     "else",
    "while", "try",     "catch", "throw", "extern",  "final",  "instanceof",
    "returns_null", "returns_fresh", "echoes", "callback",
};

class Parser {
  public:
    Parser(const std::string& src, std::string file) : lex_(src, file), file_(std::move(file)) {
        cur_ = lex_.next();
        peek_ = lex_.next();
    }

    Program parse_program() {
        Program p;
        p.filename = file_;
        if (at_punct("#")) {
            bump();
            std::string d = expect_ident("directive");
            if (d != "instrumented") err("unknown directive '#" + d + "'");
            p.instrumented = true;
        }
        while (cur_.kind != Tok::End) {
            if (at_kw("class"))
                p.classes.push_back(parse_class());
            else if (at_kw("extern"))
                p.externs.push_back(parse_extern());
            else
                err("expected 'class' or 'extern' declaration");
        }
        return p;
    }

  private:
    [[noreturn]] void err(const std::string& msg) {
        throw ParseError({file_, cur_.line}, cur_.col, msg);
    }

    Location here() const { return {file_, cur_.line}; }

    void bump() {
        cur_ = peek_;
        peek_ = lex_.next();
    }

    bool at_punct(const std::string& s) const { return cur_.kind == Tok::Punct && cur_.text == s; }
    bool at_kw(const std::string& s) const { return cur_.kind == Tok::Ident && cur_.text == s; }
    bool peek_punct(const std::string& s) const {
        return peek_.kind == Tok::Punct && peek_.text == s;
    }

    void expect_punct(const std::string& s) {
        if (!at_punct(s)) err("expected '" + s + "'");
        bump();
    }

    void expect_kw(const std::string& s) {
        if (!at_kw(s)) err("expected '" + s + "'");
        bump();
    }

    std::string expect_ident(const std::string& what) {
        if (cur_.kind != Tok::Ident) err("expected " + what);
        if (kKeywords.count(cur_.text)) err("'" + cur_.text + "' is a keyword, expected " + what);
        std::string s = cur_.text;
        bump();
        return s;
    }

    bool at_type() const {
        if (cur_.kind != Tok::Ident) return false;
        if (cur_.text == "int" || cur_.text == "bool" || cur_.text == "IntBox" ||
            cur_.text == "void")
            return true;
        return !kKeywords.count(cur_.text);
    }

    Type parse_type() {
        if (cur_.kind != Tok::Ident) err("expected type");
        std::string n = cur_.text;
        if (n == "void") {
            bump();
            return Type::void_();
        }
        if (n == "int") {
            bump();
            return Type::int_();
        }
        if (n == "bool") {
            bump();
            return Type::bool_();
        }
        if (n == "IntBox") {
            bump();
            return Type::intbox();
        }
        if (kKeywords.count(n)) err("expected type");
        bump();
        return Type::ref(n);
    }

    ClassDecl parse_class() {
        ClassDecl c;
        c.loc = here();
        expect_kw("class");
        c.name = expect_ident("class name");
        if (at_kw("extends")) {
            bump();
            c.superclass = expect_ident("superclass name");
        }
        expect_punct("{");
        while (!at_punct("}")) {
            // Both members start with a type followed by a name; a '(' after
            // the name makes it a method.
            Location mloc = here();
            Type t = parse_type();
            std::string name = expect_ident("member name");
            if (at_punct("(")) {
                MethodDecl m;
                m.loc = mloc;
                m.return_type = t;
                m.name = name;
                bump();
                if (!at_punct(")")) {
                    for (;;) {
                        Param prm;
                        prm.loc = here();
                        if (at_kw("final")) {
                            bump();
                            prm.is_final = true;
                        }
                        prm.type = parse_type();
                        prm.name = expect_ident("parameter name");
                        m.params.push_back(std::move(prm));
                        if (at_punct(",")) {
                            bump();
                            continue;
                        }
                        break;
                    }
                }
                expect_punct(")");
                m.body = parse_block();
                c.methods.push_back(std::move(m));
            } else {
                FieldDecl f;
                f.loc = mloc;
                f.type = t;
                f.name = name;
                if (f.type.kind == TypeKind::Void) err("field cannot have type void");
                if (at_punct("=")) {
                    bump();
                    f.init = parse_expr();
                }
                expect_punct(";");
                c.fields.push_back(std::move(f));
            }
        }
        expect_punct("}");
        return c;
    }

    ExternDecl parse_extern() {
        ExternDecl e;
        e.loc = here();
        expect_kw("extern");
        e.name = expect_ident("extern name");
        expect_punct("(");
        if (!at_punct(")")) {
            for (;;) {
                Param prm;
                prm.loc = here();
                prm.type = parse_type();
                prm.name = expect_ident("parameter name");
                e.params.push_back(std::move(prm));
                if (at_punct(",")) {
                    bump();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        e.return_type = Type::void_();
        if (at_punct(":")) {
            bump();
            e.return_type = parse_type();
        }
        if (at_kw("returns_null")) {
            bump();
            e.stub = StubKind::ReturnsNull;
        } else if (at_kw("returns_fresh")) {
            bump();
            e.stub = StubKind::ReturnsFresh;
        } else if (at_kw("echoes")) {
            bump();
            e.stub = StubKind::Echoes;
        } else if (at_kw("callback")) {
            bump();
            e.stub = StubKind::Callback;
            e.callback_method = expect_ident("callback method name");
        } else {
            err("expected extern behavior (returns_null, returns_fresh, echoes, callback)");
        }
        expect_punct(";");
        return e;
    }

    std::vector<StmtPtr> parse_block() {
        expect_punct("{");
        std::vector<StmtPtr> stmts;
        while (!at_punct("}")) stmts.push_back(parse_stmt());
        expect_punct("}");
        return stmts;
    }

    StmtPtr parse_stmt() {
        Location loc = here();
        if (at_kw("return")) {
            bump();
            auto s = Stmt::make(StmtKind::Return, loc);
            if (!at_punct(";")) s->expr = parse_expr();
            expect_punct(";");
            return s;
        }
        if (at_kw("if")) {
            bump();
            auto s = Stmt::make(StmtKind::If, loc);
            expect_punct("(");
            s->expr = parse_expr();
            expect_punct(")");
            s->body = parse_block();
            if (at_kw("else")) {
                bump();
                s->else_body = parse_block();
            }
            return s;
        }
        if (at_kw("while")) {
            bump();
            auto s = Stmt::make(StmtKind::While, loc);
            expect_punct("(");
            s->expr = parse_expr();
            expect_punct(")");
            s->body = parse_block();
            return s;
        }
        if (at_kw("try")) {
            bump();
            auto s = Stmt::make(StmtKind::TryCatch, loc);
            s->body = parse_block();
            expect_kw("catch");
            s->else_body = parse_block();
            return s;
        }
        if (at_kw("throw")) {
            bump();
            auto s = Stmt::make(StmtKind::Throw, loc);
            s->expr = parse_expr();
            expect_punct(";");
            return s;
        }
        // Local declaration: TYPE IDENT (= expr)? ;
        // Distinguished from assignments/expressions by an identifier that is
        // directly followed by another identifier, or a builtin type name.
        bool decl = false;
        if (cur_.kind == Tok::Ident &&
            (cur_.text == "int" || cur_.text == "bool" || cur_.text == "IntBox")) {
            decl = true;
        } else if (cur_.kind == Tok::Ident && !kKeywords.count(cur_.text) &&
                   peek_.kind == Tok::Ident && !kKeywords.count(peek_.text)) {
            decl = true;
        }
        if (decl) {
            auto s = Stmt::make(StmtKind::VarDecl, loc);
            s->decl_type = parse_type();
            s->name = expect_ident("variable name");
            if (at_punct("=")) {
                bump();
                s->expr = parse_expr();
            }
            expect_punct(";");
            return s;
        }
        // Assignment or expression statement.
        ExprPtr e = parse_expr();
        if (at_punct("=")) {
            bump();
            if (e->kind != ExprKind::VarRead && e->kind != ExprKind::FieldAccess)
                throw ParseError(e->loc, 1, "assignment target must be a variable or field");
            auto s = Stmt::make(StmtKind::Assign, loc);
            s->target = std::move(e);
            s->expr = parse_expr();
            expect_punct(";");
            return s;
        }
        auto s = Stmt::make(StmtKind::ExprStmt, loc);
        s->expr = std::move(e);
        expect_punct(";");
        return s;
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (at_punct("||")) {
            Location loc = e->loc;
            bump();
            auto b = Expr::make(ExprKind::Binary, loc);
            b->bin = BinOp::Or;
            b->lhs = std::move(e);
            b->rhs = parse_and();
            e = std::move(b);
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_equality();
        while (at_punct("&&")) {
            Location loc = e->loc;
            bump();
            auto b = Expr::make(ExprKind::Binary, loc);
            b->bin = BinOp::And;
            b->lhs = std::move(e);
            b->rhs = parse_equality();
            e = std::move(b);
        }
        return e;
    }

    ExprPtr parse_equality() {
        ExprPtr e = parse_relational();
        while (at_punct("==") || at_punct("!=")) {
            BinOp op = at_punct("==") ? BinOp::Eq : BinOp::Ne;
            Location loc = e->loc;
            bump();
            auto b = Expr::make(ExprKind::Binary, loc);
            b->bin = op;
            b->lhs = std::move(e);
            b->rhs = parse_relational();
            e = std::move(b);
        }
        return e;
    }

    ExprPtr parse_relational() {
        ExprPtr e = parse_additive();
        for (;;) {
            if (at_kw("instanceof")) {
                Location loc = e->loc;
                bump();
                auto t = Expr::make(ExprKind::InstanceOf, loc);
                t->lhs = std::move(e);
                if (cur_.kind != Tok::Ident || (kKeywords.count(cur_.text)))
                    err("expected type name after instanceof");
                t->name = cur_.text;
                bump();
                e = std::move(t);
                continue;
            }
            BinOp op;
            if (at_punct("<"))
                op = BinOp::Lt;
            else if (at_punct("<="))
                op = BinOp::Le;
            else if (at_punct(">"))
                op = BinOp::Gt;
            else if (at_punct(">="))
                op = BinOp::Ge;
            else
                break;
            Location loc = e->loc;
            bump();
            auto b = Expr::make(ExprKind::Binary, loc);
            b->bin = op;
            b->lhs = std::move(e);
            b->rhs = parse_additive();
            e = std::move(b);
        }
        return e;
    }

    ExprPtr parse_additive() {
        ExprPtr e = parse_multiplicative();
        while (at_punct("+") || at_punct("-")) {
            BinOp op = at_punct("+") ? BinOp::Add : BinOp::Sub;
            Location loc = e->loc;
            bump();
            auto b = Expr::make(ExprKind::Binary, loc);
            b->bin = op;
            b->lhs = std::move(e);
            b->rhs = parse_multiplicative();
            e = std::move(b);
        }
        return e;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr e = parse_unary();
        while (at_punct("*") || at_punct("/")) {
            BinOp op = at_punct("*") ? BinOp::Mul : BinOp::Div;
            Location loc = e->loc;
            bump();
            auto b = Expr::make(ExprKind::Binary, loc);
            b->bin = op;
            b->lhs = std::move(e);
            b->rhs = parse_unary();
            e = std::move(b);
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (at_punct("!")) {
            Location loc = here();
            bump();
            auto u = Expr::make(ExprKind::Unary, loc);
            u->un = UnOp::Not;
            u->lhs = parse_unary();
            return u;
        }
        if (at_punct("-")) {
            Location loc = here();
            bump();
            auto u = Expr::make(ExprKind::Unary, loc);
            u->un = UnOp::Neg;
            u->lhs = parse_unary();
            return u;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (at_punct(".")) {
            bump();
            Location loc = here();
            std::string member = expect_ident("member name");
            if (at_punct("(")) {
                auto call = Expr::make(ExprKind::MethodCall, loc);
                call->name = member;
                call->lhs = std::move(e);
                call->args = parse_args();
                e = std::move(call);
            } else {
                auto fa = Expr::make(ExprKind::FieldAccess, loc);
                fa->name = member;
                fa->lhs = std::move(e);
                e = std::move(fa);
            }
        }
        return e;
    }

    std::vector<ExprPtr> parse_args() {
        expect_punct("(");
        std::vector<ExprPtr> args;
        if (!at_punct(")")) {
            for (;;) {
                args.push_back(parse_expr());
                if (at_punct(",")) {
                    bump();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        return args;
    }

    ExprPtr parse_primary() {
        Location loc = here();
        if (at_kw("null")) {
            bump();
            return Expr::make(ExprKind::NullLit, loc);
        }
        if (at_kw("true") || at_kw("false")) {
            auto e = Expr::make(ExprKind::BoolLit, loc);
            e->bool_val = at_kw("true");
            bump();
            return e;
        }
        if (cur_.kind == Tok::Int) {
            auto e = Expr::make(ExprKind::IntLit, loc);
            e->int_val = cur_.int_val;
            bump();
            return e;
        }
        if (at_kw("this")) {
            bump();
            return Expr::make(ExprKind::This, loc);
        }
        if (at_kw("new")) {
            bump();
            auto e = Expr::make(ExprKind::New, loc);
            e->name = expect_ident("class name");
            expect_punct("(");
            expect_punct(")");
            return e;
        }
        if (at_punct("(")) {
            bump();
            ExprPtr e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (cur_.kind == Tok::Ident && !kKeywords.count(cur_.text)) {
            std::string name = cur_.text;
            if (peek_punct("(")) {
                bump();
                if (auto hk = helper_from_name(name)) return parse_helper(*hk, loc);
                auto e = Expr::make(ExprKind::ExternCall, loc);
                e->name = name;
                e->args = parse_args();
                return e;
            }
            bump();
            auto e = Expr::make(ExprKind::VarRead, loc);
            e->name = name;
            return e;
        }
        err("expected expression");
    }

    // helper(expr, "var, file:line") — the tag is optional when reparsing is
    // not expected to preserve positions, but the printer always emits it.
    ExprPtr parse_helper(HelperKind hk, Location loc) {
        auto e = Expr::make(ExprKind::Helper, loc);
        e->helper = hk;
        e->synthetic = true;
        expect_punct("(");
        e->lhs = parse_expr();
        if (at_punct(",")) {
            bump();
            if (cur_.kind != Tok::String) err("expected instrumentation tag string");
            parse_tag(cur_.text, *e);
            bump();
        } else {
            e->tag_loc = loc;
        }
        expect_punct(")");
        return e;
    }

    void parse_tag(const std::string& tag, Expr& e) {
        // "<var>, <file>:<line>" or "<file>:<line>" when there is no target.
        std::string rest = tag;
        auto comma = tag.find(", ");
        if (comma != std::string::npos) {
            e.tag_var = tag.substr(0, comma);
            rest = tag.substr(comma + 2);
        }
        auto colon = rest.rfind(':');
        if (colon == std::string::npos) err("malformed instrumentation tag '" + tag + "'");
        e.tag_loc.file = rest.substr(0, colon);
        try {
            e.tag_loc.line = std::stoi(rest.substr(colon + 1));
        } catch (...) {
            err("malformed instrumentation tag '" + tag + "'");
        }
    }

    Lexer lex_;
    std::string file_;
    Token cur_, peek_;
};

}  // namespace

Program parse(const std::string& source, const std::string& filename) {
    Parser p(source, filename);
    return p.parse_program();
}

}  // namespace gt::lang
