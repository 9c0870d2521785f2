#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "location.hpp"

namespace gt::lang {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind {
    Void,
    Int,     // primitive integer, never null
    Bool,    // primitive boolean, never null
    IntBox,  // boxed integer, nullable
    Ref,     // object reference (Object or a user class), nullable
    Null,    // type of the null literal; assignable to any nullable slot
};

struct Type {
    TypeKind kind = TypeKind::Void;
    std::string name;  // class name when kind == Ref

    bool nullable() const {
        return kind == TypeKind::IntBox || kind == TypeKind::Ref || kind == TypeKind::Null;
    }
    bool is_ref() const { return kind == TypeKind::Ref; }

    static Type void_() { return {TypeKind::Void, ""}; }
    static Type int_() { return {TypeKind::Int, ""}; }
    static Type bool_() { return {TypeKind::Bool, ""}; }
    static Type intbox() { return {TypeKind::IntBox, ""}; }
    static Type ref(std::string cls) { return {TypeKind::Ref, std::move(cls)}; }
    static Type null() { return {TypeKind::Null, ""}; }

    std::string str() const;
};

bool operator==(const Type& a, const Type& b);

// Name of the implicit root class every class extends.
inline constexpr const char* kRootClass = "Object";
// Marker type name used by instrumentation in `instanceof` tests.
inline constexpr const char* kGhostMarker = "NullGhost";

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class ExprKind {
    NullLit,
    IntLit,
    BoolLit,
    This,
    VarRead,
    New,          // new C()
    FieldAccess,  // recv.field
    MethodCall,   // recv.method(args)
    ExternCall,   // externName(args)
    Binary,
    Unary,
    InstanceOf,  // operand instanceof TypeName
    Helper,      // injected instrumentation call
};

enum class BinOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Not, Neg };

// The seven runtime hooks injected by instrumentation.
enum class HelperKind {
    NullAssign,
    NullParam,
    NullPassed,
    NullReturn,
    Exorcise,
    NullUnbox,
    NullDeref,
};

const char* helper_name(HelperKind k);
std::optional<HelperKind> helper_from_name(const std::string& s);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    ExprKind kind;
    Location loc;

    long long int_val = 0;
    bool bool_val = false;
    // VarRead/FieldAccess/MethodCall/ExternCall name; class name for New and
    // InstanceOf targets.
    std::string name;
    // Binary: lhs/rhs. Unary/InstanceOf: lhs. FieldAccess/MethodCall: lhs is
    // the receiver. Helper: lhs is the wrapped value.
    ExprPtr lhs, rhs;
    std::vector<ExprPtr> args;  // MethodCall/ExternCall arguments
    BinOp bin{};
    UnOp un{};

    // Helper metadata. The tag is printed as `"<var>, <file>:<line>"` and
    // round-trips through the pretty-printer.
    HelperKind helper{};
    std::string tag_var;
    Location tag_loc;

    // Set on nodes built by the instrumentation pass; rewrite matchers skip
    // them so no rule consumes another rule's output.
    bool synthetic = false;

    // --- resolver annotations (ignored by structural comparison) ---
    Type type;
    enum class Coerce { None, Box, Unbox };
    Coerce coerce = Coerce::None;
    // Helper: static type the value slot was declared with; names the class a
    // ghost created here haunts. Recomputed on every resolve.
    std::string type_hint;
    // VarRead: "param" | "local"; FieldAccess: owning class of the field.
    std::string binding;

    static ExprPtr make(ExprKind k, Location loc);
};

ExprPtr clone(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);

// `<receiverType>.<method>(<paramTypes>)` for calls, `<type> <name>` for
// variables and fields, `null` for the null literal. Used to decorate causal
// links; derived from structure so it survives print/reparse.
std::string expr_signature(const Expr& e);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
    VarDecl,
    Assign,
    ExprStmt,
    Return,
    If,
    While,
    TryCatch,  // catches the language's NPE kind only
    Throw,
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    StmtKind kind;
    Location loc;

    Type decl_type;            // VarDecl
    std::string name;          // VarDecl variable name
    ExprPtr target;            // Assign target (VarRead or FieldAccess)
    ExprPtr expr;              // VarDecl init / Assign value / ExprStmt / Return / Throw / If & While condition
    std::vector<StmtPtr> body;       // If then / While body / Try body
    std::vector<StmtPtr> else_body;  // If else / Catch body

    static StmtPtr make(StmtKind k, Location loc);
};

StmtPtr clone(const Stmt& s);
bool structurally_equal(const Stmt& a, const Stmt& b);

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct FieldDecl {
    Type type;
    std::string name;
    ExprPtr init;  // optional
    Location loc;
};

struct Param {
    Type type;
    std::string name;
    bool is_final = false;
    Location loc;
};

struct MethodDecl {
    std::string name;
    std::vector<Param> params;
    Type return_type;
    std::vector<StmtPtr> body;
    Location loc;
};

struct ClassDecl {
    std::string name;
    std::string superclass;  // empty: extends Object implicitly
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;
    Location loc;
};

// Opaque library functions. Their bodies are fixed behavior stubs; the
// instrumentation never looks inside them.
enum class StubKind {
    ReturnsNull,   // ignores arguments, returns null
    ReturnsFresh,  // returns a new instance of the declared return type
    Echoes,        // returns its first argument
    Callback,      // invokes `callback_method` on its first argument, passing
                   // null for every nullable parameter
};

struct ExternDecl {
    std::string name;
    std::vector<Param> params;
    Type return_type;
    StubKind stub = StubKind::ReturnsNull;
    std::string callback_method;
    Location loc;
};

struct Program {
    std::string filename;
    std::vector<ClassDecl> classes;
    std::vector<ExternDecl> externs;
    // Instrumentation marker; printed as a leading `#instrumented` directive.
    bool instrumented = false;

    // resolver annotations
    std::string entry_class;
    std::string entry_method;

    Program() = default;
    Program(Program&&) = default;
    Program& operator=(Program&&) = default;

    Program clone() const;

    const ClassDecl* find_class(const std::string& name) const;
    const ExternDecl* find_extern(const std::string& name) const;
    const MethodDecl* find_method(const std::string& cls, const std::string& method,
                                  const ClassDecl** owner = nullptr) const;
    const FieldDecl* find_field(const std::string& cls, const std::string& field,
                                const ClassDecl** owner = nullptr) const;
    // True if `sub` equals `super` or names a class deriving from it.
    bool is_subtype(const std::string& sub, const std::string& super) const;
};

bool structurally_equal(const Program& a, const Program& b);

}  // namespace gt::lang
