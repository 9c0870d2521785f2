#include "doctest.h"

#include "parser.hpp"
#include "printer.hpp"
#include "resolver.hpp"

using namespace gt;
using namespace gt::lang;

namespace {

Program parsed(const std::string& src) { return parse(src, "t.mini"); }

Program resolved(const std::string& src) {
    Program p = parsed(src);
    resolve(p);
    return p;
}

}  // namespace

TEST_CASE("minimal program parses with one class and an entry") {
    Program p = resolved("class A { void main() {} }");
    CHECK(p.classes.size() == 1);
    CHECK(p.entry_class == "A");
    CHECK(p.entry_method == "main");
}

TEST_CASE("uninitialized declaration and call dereference appear in the AST") {
    Program p = parsed("class A { void main() { Object o; o.f(); } }");
    const auto& body = p.classes[0].methods[0].body;
    REQUIRE(body.size() == 2);
    CHECK(body[0]->kind == StmtKind::VarDecl);
    CHECK(!body[0]->expr);
    CHECK(body[1]->kind == StmtKind::ExprStmt);
    CHECK(body[1]->expr->kind == ExprKind::MethodCall);
}

TEST_CASE("malformed input reports file, line and column") {
    try {
        parsed("class A {");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.loc.line == 1);
        CHECK(std::string(e.what()).find("t.mini:1") == 0);
    }
}

TEST_CASE("locations are attached to every statement") {
    Program p = parsed("class A {\n  void main() {\n    int x = 1;\n  }\n}\n");
    CHECK(p.classes[0].methods[0].body[0]->loc.line == 3);
}

TEST_CASE("undeclared variable is a resolve error") {
    Program p = parsed("class A { void main() { x = 3; } }");
    CHECK_THROWS_AS(resolve(p), ResolveError);
}

TEST_CASE("assignment to a final parameter is rejected") {
    Program p = parsed(
        "class A { void main() { } void m(final Object b) { b = null; } }");
    try {
        resolve(p);
        FAIL("expected a resolve error");
    } catch (const ResolveError& e) {
        CHECK(std::string(e.what()).find("final") != std::string::npos);
    }
}

TEST_CASE("a well-formed multi-class program resolves and is annotated") {
    const char* src =
        "class Shape { int area() { return 0; } }\n"
        "class Square extends Shape { int side; int area() { return this.side * this.side; } }\n"
        "class Main { void main() { Shape s = new Square(); int a = s.area(); } }\n";
    Program p = resolved(src);
    CHECK(p.entry_class == "Main");
    CHECK(p.find_method("Square", "area") != nullptr);
    // inherited lookup
    const ClassDecl* owner = nullptr;
    CHECK(p.find_method("Square", "area", &owner) != nullptr);
    CHECK(p.is_subtype("Square", "Shape"));
    CHECK(p.is_subtype("Square", "Object"));
    CHECK(!p.is_subtype("Shape", "Square"));
}

TEST_CASE("inheritance cycles are rejected") {
    Program p = parsed("class A extends B { void main() {} } class B extends A { }");
    CHECK_THROWS_AS(resolve(p), ResolveError);
}

TEST_CASE("duplicate members are rejected") {
    Program fields = parsed("class A { int x; int x; void main(){} }");
    CHECK_THROWS_AS(resolve(fields), ResolveError);
    Program methods = parsed("class A { void m(){} void m(){} void main(){} }");
    CHECK_THROWS_AS(resolve(methods), ResolveError);
}

TEST_CASE("exactly one zero-parameter main is required") {
    Program none = parsed("class A { void m() {} }");
    CHECK_THROWS_AS(resolve(none), ResolveError);
    Program twice = parsed("class A { void main() {} } class B { void main() {} }");
    CHECK_THROWS_AS(resolve(twice), ResolveError);
}

TEST_CASE("resolver reports the first error deterministically") {
    Program p = parsed("class A { void main() { x = 1; y = 2; } }");
    std::string first;
    try {
        resolve(p);
    } catch (const ResolveError& e) {
        first = e.what();
    }
    CHECK(first.find("'x'") != std::string::npos);
    // Re-resolving the same program yields the same first error.
    Program q = parsed("class A { void main() { x = 1; y = 2; } }");
    try {
        resolve(q);
        FAIL("expected a resolve error");
    } catch (const ResolveError& e) {
        CHECK(first == e.what());
    }
}

TEST_CASE("helpers are reserved outside instrumented programs") {
    Program p = parsed("class A { void main() { Object o = nullAssign(null, \"o, t.mini:1\"); } }");
    CHECK_THROWS_AS(resolve(p), ResolveError);
}

TEST_CASE("types check nominally along the superclass chain") {
    CHECK_THROWS_AS(
        resolved("class A { } class B { } class M { void main() { A a = new B(); } }"),
        ResolveError);
    CHECK_NOTHROW(
        resolved("class A { } class B extends A { } class M { void main() { A a = new B(); } }"));
}

TEST_CASE("boxing and unboxing are annotated") {
    Program p = resolved("class A { void main() { IntBox b = 3; int x = b + 1; } }");
    const auto& body = p.classes[0].methods[0].body;
    CHECK(body[0]->expr->coerce == Expr::Coerce::Box);
    // b + 1: the variable read is unboxed
    CHECK(body[1]->expr->lhs->coerce == Expr::Coerce::Unbox);
}

TEST_CASE("round trip: parse(pretty_print(p)) is structurally equal") {
    const char* srcs[] = {
        "class A { void main() {} }",
        "class A { }\nclass B { void main() { B b = new B(); } }",
        "extern mk(): A returns_fresh;\n"
        "class A { int f; A next; void main() { A a = mk(); if (a == null) { } else { "
        "while (a.f < 3) { a.f = a.f + 1; } } } }",
        "class A { IntBox cache; void main() { IntBox v = null; try { int x = v; } catch { "
        "this.cache = 7; } } }",
        "class A { void main() { Object o; bool t = o instanceof Object; bool u = !(o == null) "
        "&& 1 + 2 * 3 < 4 - -2; } }",
    };
    for (const char* src : srcs) {
        CAPTURE(src);
        Program p = parsed(src);
        Program q = parsed(pretty_print(p));
        CHECK(structurally_equal(p, q));
    }
}

TEST_CASE("empty class prints as a class with empty braces") {
    Program p = parsed("class A { } class M { void main() {} }");
    std::string text = pretty_print(p);
    CHECK(text.find("class A {\n}") != std::string::npos);
}

TEST_CASE("extern declarations round-trip with their stubs") {
    const char* src =
        "extern nil(): Object returns_null;\n"
        "extern echo(Object x): Object echoes;\n"
        "extern each(H h) callback on;\n"
        "class H { void on(Object x) { } void main() { each(new H()); } }";
    Program p = parsed(src);
    Program q = parsed(pretty_print(p));
    CHECK(structurally_equal(p, q));
    CHECK(q.externs[2].stub == StubKind::Callback);
    CHECK(q.externs[2].callback_method == "on");
}
