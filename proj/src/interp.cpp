#include "interp.hpp"

#include <chrono>
#include <stdexcept>

namespace gt::runtime {

using namespace lang;

namespace {

// Language-level NPE; the only error kind `catch` handles.
struct NpeSignal {
    trace::NpeReport report;
};

// `throw` on a real object. Not catchable in MiniLang.
struct UserThrow {
    std::string rendered;
};

// Tool-level abort: limits, arithmetic faults.
struct RunAbort {
    std::string message;
};

struct Flow {
    bool returned = false;
    Value value;
};

struct Frame {
    std::string klass;
    std::string method;
    std::string file;
    int line = 0;
    Value self;
    std::unordered_map<std::string, Value> locals;
    long long call_id = 0;
    bool from_extern = false;
};

// Assignment context threaded into the hooks so causal links can name the
// kind of slot being written.
struct AssignCtx {
    std::string var_kind;  // "local" | "parameter" | "field"
};

std::string binding_kind(const Expr& e) {
    if (e.kind == ExprKind::VarRead) return e.binding == "param" ? "parameter" : "local";
    if (e.kind == ExprKind::FieldAccess) return "field";
    return "expression";
}

std::string receiver_name(const Expr& e) {
    if (e.kind == ExprKind::VarRead || e.kind == ExprKind::FieldAccess) return e.name;
    return "";
}

class Interpreter {
  public:
    Interpreter(const Program& p, Mode mode, const Options& opts)
        : p_(p), mode_(mode), opts_(opts) {
        result_.events.program_id = p.filename;
        result_.events.mode = mode == Mode::Original ? "original" : "instrumented";
    }

    RunResult run() {
        auto start = std::chrono::steady_clock::now();
        try {
            Value receiver = instantiate(p_.entry_class);
            Value out = invoke_method(receiver, p_.entry_class, p_.entry_method, {},
                                      {p_.filename, 0}, false, nullptr);
            result_.outcome = RunResult::Outcome::Normal;
            result_.value = out;
        } catch (NpeSignal& s) {
            result_.outcome = RunResult::Outcome::Npe;
            result_.report = std::move(s.report);
        } catch (UserThrow& t) {
            result_.outcome = RunResult::Outcome::Error;
            result_.error = "uncaught exception: " + t.rendered;
        } catch (RunAbort& a) {
            result_.outcome = RunResult::Outcome::Error;
            result_.error = a.message;
        }
        auto end = std::chrono::steady_clock::now();
        result_.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
        return std::move(result_);
    }

  private:
    // ---- bookkeeping ----

    void step() {
        if (++steps_ > opts_.step_limit) throw RunAbort{"step limit exceeded"};
    }

    void log(harness::ExecutionEvent::Kind kind, const std::string& method,
             std::string payload) {
        harness::ExecutionEvent e;
        e.seq = static_cast<long long>(result_.events.events.size());
        e.kind = kind;
        e.method = method;
        e.payload = std::move(payload);
        result_.events.events.push_back(std::move(e));
    }

    std::vector<std::string> snapshot() const {
        std::vector<std::string> frames;
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
            frames.push_back(it->klass + "." + it->method + "(" + it->file + ":" +
                             std::to_string(it->line) + ")");
        return frames;
    }

    Frame& frame() { return stack_.back(); }

    // ---- ghosts ----

    std::shared_ptr<GhostData> make_ghost(const std::string& haunted) {
        auto g = std::make_shared<GhostData>();
        g->haunted = haunted.empty() ? std::string(kRootClass) : haunted;
        return g;
    }

    trace::CausalLink make_link(trace::LinkKind kind, const Location& loc) {
        trace::CausalLink l;
        l.kind = kind;
        l.location = loc;
        l.timestamp = ++link_clock_;
        l.stack = snapshot();
        return l;
    }

    void commit_pending(GhostData& g) {
        for (auto& pi : g.pending) {
            trace::CausalLink l = make_link(trace::LinkKind::Invoke, pi.location);
            l.variable = pi.variable;
            l.variable_kind = "parameter";
            l.expr_signature = pi.signature;
            l.stack = std::move(pi.stack);
            g.trace.append(std::move(l));
        }
        g.pending.clear();
    }

    void append_link(GhostData& g, trace::CausalLink l) {
        commit_pending(g);
        g.trace.append(std::move(l));
    }

    trace::NpeReport ghost_report(GhostData& g) {
        trace::NpeReport r;
        const trace::CausalLink& last = g.trace.links.back();
        r.symptom.location = last.location;
        r.symptom.name = last.variable;
        r.symptom.kind = last.variable_kind.empty() ? "expression" : last.variable_kind;
        r.symptom.stack = last.stack;
        r.trace = g.trace;  // copy: the ghost lives on if the error is caught
        r.display = trace::postprocess(r.trace);
        r.traced = true;
        return r;
    }

    // Failure of a null that never crossed a hook. Instrumented runs report
    // the documented symptom-only trace; original runs report the plain
    // stack trace of the baseline tool.
    [[noreturn]] void bare_null_failure(trace::LinkKind kind, const Location& loc,
                                        const std::string& var, const std::string& var_kind) {
        trace::NpeReport r;
        r.symptom.location = loc;
        r.symptom.name = var;
        r.symptom.kind = var_kind.empty() ? "expression" : var_kind;
        r.symptom.stack = snapshot();
        if (mode_ == Mode::Instrumented) {
            trace::CausalLink l = make_link(kind, loc);
            l.variable = var;
            l.variable_kind = r.symptom.kind;
            r.trace.append(std::move(l));
            r.display = trace::postprocess(r.trace);
            r.traced = true;
        }
        throw NpeSignal{std::move(r)};
    }

    [[noreturn]] void ghost_failure(GhostData& g, trace::CausalLink link) {
        append_link(g, std::move(link));
        throw NpeSignal{ghost_report(g)};
    }

    // ---- objects ----

    Value instantiate(const std::string& klass) {
        auto obj = std::make_shared<ObjectData>();
        obj->klass = klass;
        obj->creation_index = ++creation_clock_;
        Value self = Value::object(obj);
        // Initializers run root-first, each in a frame of its declaring class.
        std::vector<const ClassDecl*> chain;
        for (const ClassDecl* c = p_.find_class(klass); c;
             c = c->superclass.empty() ? nullptr : p_.find_class(c->superclass))
            chain.push_back(c);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const ClassDecl* c = *it;
            if (stack_.size() >= static_cast<size_t>(opts_.stack_limit))
                throw RunAbort{"stack overflow"};
            stack_.push_back(Frame{c->name, "<init>", p_.filename, c->loc.line, self, {},
                                   ++call_clock_, false});
            log(harness::ExecutionEvent::Kind::Call, c->name + "#<init>", "()");
            try {
                for (const auto& f : c->fields) {
                    frame().line = f.loc.line;
                    step();
                    Value v;
                    if (f.init) {
                        AssignCtx ctx{"field"};
                        v = eval(*f.init, &ctx);
                        v = coerce(*f.init, v);
                    } else {
                        v = default_value(f.type);
                    }
                    obj->fields[f.name] = v;
                }
            } catch (...) {
                log(harness::ExecutionEvent::Kind::Return, c->name + "#<init>", "!npe");
                stack_.pop_back();
                throw;
            }
            log(harness::ExecutionEvent::Kind::Return, c->name + "#<init>",
                render_value(self));
            stack_.pop_back();
        }
        return self;
    }

    // Raw instance built by an opaque stub: fields are bare defaults and no
    // instrumented initializer runs.
    Value fresh_extern_object(const Type& t) {
        if (t.kind == TypeKind::IntBox) return Value::boxed(std::nullopt);
        auto obj = std::make_shared<ObjectData>();
        obj->klass = t.name;
        obj->creation_index = ++creation_clock_;
        std::vector<const ClassDecl*> chain;
        for (const ClassDecl* c = p_.find_class(t.name); c;
             c = c->superclass.empty() ? nullptr : p_.find_class(c->superclass))
            chain.push_back(c);
        for (const ClassDecl* c : chain)
            for (const auto& f : c->fields) obj->fields[f.name] = default_value(f.type);
        return Value::object(obj);
    }

    Value default_value(const Type& t) {
        switch (t.kind) {
            case TypeKind::Int: return Value::int_(0);
            case TypeKind::Bool: return Value::bool_(false);
            default: return Value::null();
        }
    }

    // ---- calls ----

    Value invoke_method(const Value& recv, const std::string& static_class,
                        const std::string& method, std::vector<Value> args,
                        const Location& call_loc, bool from_extern, const Expr* call_expr) {
        (void)static_class;
        if (recv.kind == Value::Kind::Ghost) {
            // Every method of the haunted class answers by recording the
            // dereference and failing, inherited methods included.
            trace::CausalLink l = make_link(trace::LinkKind::Deref, call_loc);
            if (call_expr) {
                l.variable = receiver_name(*call_expr->lhs);
                l.variable_kind = binding_kind(*call_expr->lhs);
                l.expr_signature = expr_signature(*call_expr);
            } else {
                l.variable_kind = "expression";
                l.expr_signature = method + "()";
            }
            ghost_failure(*recv.ghost, std::move(l));
        }
        if (recv.kind == Value::Kind::Null) {
            std::string var = call_expr ? receiver_name(*call_expr->lhs) : "";
            std::string kind = call_expr ? binding_kind(*call_expr->lhs) : "expression";
            bare_null_failure(trace::LinkKind::Deref, call_loc, var, kind);
        }
        if (recv.kind != Value::Kind::Object) throw RunAbort{"call on non-object value"};

        const ClassDecl* owner = nullptr;
        const MethodDecl* m = p_.find_method(recv.obj->klass, method, &owner);
        if (!m) throw RunAbort{"no method '" + method + "' on " + recv.obj->klass};
        if (stack_.size() >= static_cast<size_t>(opts_.stack_limit))
            throw RunAbort{"stack overflow"};

        std::string qualified = owner->name + "#" + m->name;
        std::string payload = "(";
        for (size_t i = 0; i < args.size(); i++) {
            if (i) payload += ",";
            payload += render_value(args[i]);
        }
        payload += ")";
        log(harness::ExecutionEvent::Kind::Call, qualified, payload);

        Frame f;
        f.klass = owner->name;
        f.method = m->name;
        f.file = p_.filename;
        f.line = m->loc.line;
        f.self = recv;
        f.call_id = ++call_clock_;
        f.from_extern = from_extern;
        for (size_t i = 0; i < m->params.size(); i++) f.locals[m->params[i].name] = args[i];
        stack_.push_back(std::move(f));

        Value out;
        try {
            Flow flow = exec_block(m->body);
            out = flow.returned ? flow.value : default_value(m->return_type);
            if (m->return_type.kind == TypeKind::Void) out = Value::void_();
        } catch (NpeSignal&) {
            log(harness::ExecutionEvent::Kind::Return, qualified, "!npe");
            stack_.pop_back();
            throw;
        } catch (UserThrow&) {
            log(harness::ExecutionEvent::Kind::Return, qualified, "!err");
            stack_.pop_back();
            throw;
        }
        log(harness::ExecutionEvent::Kind::Return, qualified,
            m->return_type.kind == TypeKind::Void ? "void" : render_value(out));
        stack_.pop_back();
        return out;
    }

    // ---- statements ----

    Flow exec_block(const std::vector<StmtPtr>& stmts) {
        for (const auto& s : stmts) {
            Flow f = exec(*s);
            if (f.returned) return f;
        }
        return {};
    }

    Flow exec(const Stmt& s) {
        frame().line = s.loc.line;
        step();
        switch (s.kind) {
            case StmtKind::VarDecl: {
                Value v;
                if (s.expr) {
                    AssignCtx ctx{"local"};
                    v = eval(*s.expr, &ctx);
                    v = coerce(*s.expr, v);
                } else {
                    v = default_value(s.decl_type);
                }
                frame().locals[s.name] = v;
                return {};
            }
            case StmtKind::Assign: {
                if (s.target->kind == ExprKind::VarRead) {
                    AssignCtx ctx{binding_kind(*s.target)};
                    Value v = eval(*s.expr, &ctx);
                    v = coerce(*s.expr, v);
                    frame().locals[s.target->name] = v;
                } else {
                    // Field write: the receiver (with its dereference guard)
                    // is evaluated before the right-hand side.
                    Value recv = eval(*s.target->lhs, nullptr);
                    recv = coerce(*s.target->lhs, recv);
                    AssignCtx ctx{"field"};
                    Value v = eval(*s.expr, &ctx);
                    v = coerce(*s.expr, v);
                    store_field(recv, s.target->name, v, s.target->loc);
                }
                return {};
            }
            case StmtKind::ExprStmt:
                eval(*s.expr, nullptr);
                return {};
            case StmtKind::Return: {
                Flow f;
                f.returned = true;
                if (s.expr) {
                    f.value = eval(*s.expr, nullptr);
                    f.value = coerce(*s.expr, f.value);
                }
                return f;
            }
            case StmtKind::If: {
                if (truthy(*s.expr)) return exec_block(s.body);
                return exec_block(s.else_body);
            }
            case StmtKind::While: {
                while (truthy(*s.expr)) {
                    Flow f = exec_block(s.body);
                    if (f.returned) return f;
                    frame().line = s.loc.line;
                    step();
                }
                return {};
            }
            case StmtKind::TryCatch: {
                try {
                    Flow f = exec_block(s.body);
                    if (f.returned) return f;
                } catch (NpeSignal&) {
                    // Caught: the ghost, if any, keeps propagating with its
                    // trace intact.
                    return exec_block(s.else_body);
                }
                return {};
            }
            case StmtKind::Throw: {
                Value v = eval(*s.expr, nullptr);
                v = coerce(*s.expr, v);
                if (v.kind == Value::Kind::Ghost) {
                    trace::CausalLink l = make_link(trace::LinkKind::Deref, s.loc);
                    l.variable = receiver_name(*s.expr);
                    l.variable_kind = binding_kind(*s.expr);
                    l.expr_signature = "throw";
                    ghost_failure(*v.ghost, std::move(l));
                }
                if (v.kind == Value::Kind::Null)
                    bare_null_failure(trace::LinkKind::Deref, s.loc, receiver_name(*s.expr),
                                      binding_kind(*s.expr));
                throw UserThrow{render_value(v)};
            }
        }
        return {};
    }

    bool truthy(const Expr& cond) {
        Value v = eval(cond, nullptr);
        v = coerce(cond, v);
        if (v.kind == Value::Kind::Bool) return v.b;
        // A null where a boolean is required is an unboxing failure.
        if (v.kind == Value::Kind::Ghost) {
            trace::CausalLink l = make_link(trace::LinkKind::Unbox, cond.loc);
            l.variable = receiver_name(cond);
            l.variable_kind = binding_kind(cond);
            ghost_failure(*v.ghost, std::move(l));
        }
        if (v.kind == Value::Kind::Null)
            bare_null_failure(trace::LinkKind::Unbox, cond.loc, receiver_name(cond),
                              binding_kind(cond));
        throw RunAbort{"condition is not a boolean"};
    }

    void store_field(const Value& recv, const std::string& field, Value v,
                     const Location& loc) {
        if (recv.kind == Value::Kind::Ghost) {
            trace::CausalLink l = make_link(trace::LinkKind::Deref, loc);
            l.variable = field;
            l.variable_kind = "field";
            ghost_failure(*recv.ghost, std::move(l));
        }
        if (recv.kind == Value::Kind::Null)
            bare_null_failure(trace::LinkKind::Deref, loc, field, "field");
        if (recv.kind != Value::Kind::Object) throw RunAbort{"field write on non-object"};
        recv.obj->fields[field] = std::move(v);
    }

    // ---- expressions ----

    Value coerce(const Expr& e, Value v) {
        switch (e.coerce) {
            case Expr::Coerce::None: return v;
            case Expr::Coerce::Box:
                if (v.kind == Value::Kind::Int) return Value::boxed(v.i);
                return v;
            case Expr::Coerce::Unbox:
                return unbox(std::move(v), e.loc, receiver_name(e), binding_kind(e), nullptr);
        }
        return v;
    }

    Value unbox(Value v, const Location& loc, const std::string& var,
                const std::string& var_kind, GhostData* /*unused*/) {
        if (v.kind == Value::Kind::Box && v.box.has_value()) return Value::int_(*v.box);
        if (v.kind == Value::Kind::Ghost) {
            trace::CausalLink l = make_link(trace::LinkKind::Unbox, loc);
            l.variable = var;
            l.variable_kind = var_kind;
            ghost_failure(*v.ghost, std::move(l));
        }
        // A real null or an opaque boxed null.
        bare_null_failure(trace::LinkKind::Unbox, loc, var, var_kind);
    }

    Value eval(const Expr& e, const AssignCtx* ctx) {
        step();
        switch (e.kind) {
            case ExprKind::NullLit: return Value::null();
            case ExprKind::IntLit: return Value::int_(e.int_val);
            case ExprKind::BoolLit: return Value::bool_(e.bool_val);
            case ExprKind::This: return frame().self;
            case ExprKind::VarRead: {
                auto it = frame().locals.find(e.name);
                if (it == frame().locals.end())
                    throw RunAbort{"unbound variable '" + e.name + "'"};
                return it->second;
            }
            case ExprKind::New: return instantiate(e.name);
            case ExprKind::FieldAccess: {
                Value recv = eval(*e.lhs, nullptr);
                recv = coerce(*e.lhs, recv);
                if (recv.kind == Value::Kind::Ghost) {
                    trace::CausalLink l = make_link(trace::LinkKind::Deref, e.loc);
                    l.variable = e.name;
                    l.variable_kind = "field";
                    l.expr_signature = expr_signature(e);
                    ghost_failure(*recv.ghost, std::move(l));
                }
                if (recv.kind == Value::Kind::Null)
                    bare_null_failure(trace::LinkKind::Deref, e.loc, e.name, "field");
                if (recv.kind != Value::Kind::Object)
                    throw RunAbort{"field read on non-object"};
                auto it = recv.obj->fields.find(e.name);
                if (it == recv.obj->fields.end())
                    throw RunAbort{"no field '" + e.name + "'"};
                return it->second;
            }
            case ExprKind::MethodCall: {
                Value recv = eval(*e.lhs, nullptr);
                recv = coerce(*e.lhs, recv);
                std::vector<Value> args;
                for (const auto& a : e.args) {
                    Value v = eval(*a, nullptr);
                    args.push_back(coerce(*a, v));
                }
                return invoke_method(recv, e.lhs->type.name, e.name, std::move(args), e.loc,
                                     false, &e);
            }
            case ExprKind::ExternCall: return eval_extern(e);
            case ExprKind::Binary: return eval_binary(e);
            case ExprKind::Unary: {
                Value v = eval(*e.lhs, nullptr);
                v = coerce(*e.lhs, v);
                if (e.un == UnOp::Not) {
                    if (v.kind != Value::Kind::Bool) throw RunAbort{"'!' on non-boolean"};
                    return Value::bool_(!v.b);
                }
                if (v.kind != Value::Kind::Int) throw RunAbort{"'-' on non-integer"};
                return Value::int_(-v.i);
            }
            case ExprKind::InstanceOf: {
                Value v = eval(*e.lhs, nullptr);
                return Value::bool_(instance_of(v, e.name));
            }
            case ExprKind::Helper: return eval_helper(e, ctx);
        }
        throw RunAbort{"unreachable expression"};
    }

    // Raw semantics before any rewrite: a ghost haunting C satisfies
    // `instanceof C` (and the marker) exactly like the generated subclass
    // would.
    bool instance_of(const Value& v, const std::string& target) {
        switch (v.kind) {
            case Value::Kind::Object:
                if (target == kGhostMarker) return false;
                return p_.is_subtype(v.obj->klass, target);
            case Value::Kind::Ghost:
                if (target == kGhostMarker) return true;
                if (v.ghost->haunted == "IntBox") return false;
                return p_.is_subtype(v.ghost->haunted, target);
            default:
                return false;
        }
    }

    bool value_equals(const Value& a, const Value& b) {
        if (a.kind == Value::Kind::Int && b.kind == Value::Kind::Int) return a.i == b.i;
        if (a.kind == Value::Kind::Bool && b.kind == Value::Kind::Bool) return a.b == b.b;
        if (a.kind == Value::Kind::Null && b.kind == Value::Kind::Null) return true;
        if (a.kind == Value::Kind::Box && b.kind == Value::Kind::Box) return a.box == b.box;
        if (a.kind == Value::Kind::Object && b.kind == Value::Kind::Object)
            return a.obj == b.obj;
        // A ghost equals only itself under the raw operator; the equality
        // rewrites restore null-equivalence.
        if (a.kind == Value::Kind::Ghost && b.kind == Value::Kind::Ghost)
            return a.ghost == b.ghost;
        return false;
    }

    Value eval_binary(const Expr& e) {
        if (e.bin == BinOp::And || e.bin == BinOp::Or) {
            Value l = eval(*e.lhs, nullptr);
            l = coerce(*e.lhs, l);
            if (l.kind != Value::Kind::Bool) throw RunAbort{"logical operand not boolean"};
            if (e.bin == BinOp::And && !l.b) return Value::bool_(false);
            if (e.bin == BinOp::Or && l.b) return Value::bool_(true);
            Value r = eval(*e.rhs, nullptr);
            r = coerce(*e.rhs, r);
            if (r.kind != Value::Kind::Bool) throw RunAbort{"logical operand not boolean"};
            return Value::bool_(r.b);
        }
        Value l = eval(*e.lhs, nullptr);
        l = coerce(*e.lhs, l);
        Value r = eval(*e.rhs, nullptr);
        r = coerce(*e.rhs, r);
        switch (e.bin) {
            case BinOp::Eq: return Value::bool_(value_equals(l, r));
            case BinOp::Ne: return Value::bool_(!value_equals(l, r));
            case BinOp::Add: return arith(l, r, '+');
            case BinOp::Sub: return arith(l, r, '-');
            case BinOp::Mul: return arith(l, r, '*');
            case BinOp::Div: return arith(l, r, '/');
            case BinOp::Lt: return cmp(l, r, '<');
            case BinOp::Le: return cmp(l, r, 'l');
            case BinOp::Gt: return cmp(l, r, '>');
            case BinOp::Ge: return cmp(l, r, 'g');
            default: throw RunAbort{"unreachable operator"};
        }
    }

    Value arith(const Value& l, const Value& r, char op) {
        if (l.kind != Value::Kind::Int || r.kind != Value::Kind::Int)
            throw RunAbort{"arithmetic on non-integers"};
        switch (op) {
            case '+': return Value::int_(l.i + r.i);
            case '-': return Value::int_(l.i - r.i);
            case '*': return Value::int_(l.i * r.i);
            case '/':
                if (r.i == 0) throw RunAbort{"division by zero"};
                return Value::int_(l.i / r.i);
        }
        throw RunAbort{"unreachable"};
    }

    Value cmp(const Value& l, const Value& r, char op) {
        if (l.kind != Value::Kind::Int || r.kind != Value::Kind::Int)
            throw RunAbort{"comparison on non-integers"};
        switch (op) {
            case '<': return Value::bool_(l.i < r.i);
            case 'l': return Value::bool_(l.i <= r.i);
            case '>': return Value::bool_(l.i > r.i);
            case 'g': return Value::bool_(l.i >= r.i);
        }
        throw RunAbort{"unreachable"};
    }

    // ---- extern stubs ----

    Value eval_extern(const Expr& e) {
        const ExternDecl* ext = p_.find_extern(e.name);
        if (!ext) throw RunAbort{"unknown extern '" + e.name + "'"};
        std::vector<Value> args;
        for (size_t i = 0; i < e.args.size(); i++) {
            ExternArgCtx actx{ext, &e};
            Value v = eval_extern_arg(*e.args[i], actx);
            args.push_back(coerce(*e.args[i], v));
        }
        ExternObservation obs;
        obs.extern_name = ext->name;
        for (const auto& a : args) {
            obs.args.push_back(render_value(a));
            if (a.kind == Value::Kind::Ghost) obs.saw_ghost = true;
        }
        result_.extern_observations.push_back(std::move(obs));

        switch (ext->stub) {
            case StubKind::ReturnsNull:
                return Value::null();
            case StubKind::ReturnsFresh:
                return fresh_extern_object(ext->return_type);
            case StubKind::Echoes:
                return args.empty() ? Value::null() : args[0];
            case StubKind::Callback: {
                // The library binds null to every nullable parameter of the
                // application method it calls back into.
                if (args.empty()) throw RunAbort{"callback extern without arguments"};
                const Value& target = args[0];
                const MethodDecl* m = nullptr;
                if (target.kind == Value::Kind::Object)
                    m = p_.find_method(target.obj->klass, ext->callback_method);
                if (!m) {
                    if (target.kind == Value::Kind::Null || target.kind == Value::Kind::Ghost)
                        bare_null_failure(trace::LinkKind::Deref, e.loc, "", "expression");
                    throw RunAbort{"callback target has no method '" + ext->callback_method +
                                   "'"};
                }
                std::vector<Value> cb_args;
                for (const auto& prm : m->params) cb_args.push_back(default_value(prm.type));
                invoke_method(target, target.obj->klass, ext->callback_method,
                              std::move(cb_args), e.loc, true, nullptr);
                return Value::void_();
            }
        }
        throw RunAbort{"unreachable stub"};
    }

    struct ExternArgCtx {
        const ExternDecl* ext;
        const Expr* call;
    };

    Value eval_extern_arg(const Expr& a, const ExternArgCtx& actx) {
        if (a.kind == ExprKind::Helper && a.helper == HelperKind::Exorcise)
            return eval_exorcise(a, actx);
        return eval(a, nullptr);
    }

    // ---- instrumentation hooks ----

    Value eval_helper(const Expr& e, const AssignCtx* ctx) {
        if (e.helper == HelperKind::Exorcise) {
            ExternArgCtx actx{nullptr, nullptr};
            return eval_exorcise(e, actx);
        }
        Value v = eval(*e.lhs, nullptr);
        v = coerce(*e.lhs, v);
        std::string hook = std::string(harness::kHookClass) + "#" + helper_name(e.helper);
        log(harness::ExecutionEvent::Kind::Call, hook, "(" + render_value(v) + ")");
        Value out;
        try {
            out = apply_hook(e, std::move(v), ctx);
        } catch (NpeSignal&) {
            log(harness::ExecutionEvent::Kind::Return, hook, "!npe");
            throw;
        }
        log(harness::ExecutionEvent::Kind::Return, hook, render_value(out));
        return out;
    }

    Value eval_exorcise(const Expr& e, const ExternArgCtx& actx) {
        Value v = eval(*e.lhs, nullptr);
        v = coerce(*e.lhs, v);
        std::string hook = std::string(harness::kHookClass) + "#exorcise";
        log(harness::ExecutionEvent::Kind::Call, hook, "(" + render_value(v) + ")");
        if (v.kind == Value::Kind::Ghost) {
            // The trace survives in the ghost for later reporting; the stub
            // only ever sees the null the ghost wraps.
            trace::CausalLink l = make_link(trace::LinkKind::Extern, e.tag_loc);
            l.variable = e.tag_var;
            l.variable_kind = "parameter";
            l.expr_signature = actx.ext ? extern_signature(*actx.ext)
                                        : "extern";
            l.extern_boundary = true;
            append_link(*v.ghost, std::move(l));
            v = Value::null();
        }
        log(harness::ExecutionEvent::Kind::Return, hook, render_value(v));
        return v;
    }

    static std::string extern_signature(const ExternDecl& ext) {
        std::string sig = "extern " + ext.name + "(";
        for (size_t i = 0; i < ext.params.size(); i++) {
            if (i) sig += ",";
            sig += ext.params[i].type.str();
        }
        return sig + ")";
    }

    Value apply_hook(const Expr& e, Value v, const AssignCtx* ctx) {
        const bool from_literal = e.lhs->kind == ExprKind::NullLit;
        const std::string sig = expr_signature(*e.lhs);
        switch (e.helper) {
            case HelperKind::NullAssign: {
                std::string kind = ctx ? ctx->var_kind : "local";
                if (v.kind == Value::Kind::Ghost) {
                    trace::CausalLink l = make_link(trace::LinkKind::Assign, e.tag_loc);
                    l.variable = e.tag_var;
                    l.variable_kind = kind;
                    l.expr_signature = sig;
                    append_link(*v.ghost, std::move(l));
                    return v;
                }
                if (v.kind == Value::Kind::Null) {
                    auto g = make_ghost(e.type_hint);
                    if (from_literal) {
                        trace::CausalLink lit = make_link(trace::LinkKind::Literal, e.tag_loc);
                        lit.variable = e.tag_var;
                        lit.variable_kind = kind;
                        lit.expr_signature = "null";
                        g->trace.append(std::move(lit));
                    }
                    trace::CausalLink l = make_link(trace::LinkKind::Assign, e.tag_loc);
                    l.variable = e.tag_var;
                    l.variable_kind = kind;
                    l.expr_signature = sig;
                    g->trace.append(std::move(l));
                    return Value::of_ghost(g);
                }
                return v;
            }
            case HelperKind::NullParam: {
                if (v.kind == Value::Kind::Ghost || v.kind == Value::Kind::Null) {
                    std::shared_ptr<GhostData> g;
                    if (v.kind == Value::Kind::Ghost) {
                        g = v.ghost;
                    } else {
                        g = make_ghost(e.type_hint);
                        if (from_literal) {
                            trace::CausalLink lit =
                                make_link(trace::LinkKind::Literal, e.tag_loc);
                            lit.variable = e.tag_var;
                            lit.variable_kind = "parameter";
                            lit.expr_signature = "null";
                            g->trace.append(std::move(lit));
                        }
                    }
                    PendingInvoke pi;
                    pi.variable = e.tag_var;
                    pi.signature = sig;
                    pi.location = e.tag_loc;
                    pi.stack = snapshot();
                    g->pending.push_back(std::move(pi));
                    return Value::of_ghost(g);
                }
                return v;
            }
            case HelperKind::NullPassed: {
                if (v.kind == Value::Kind::Ghost) {
                    GhostData& g = *v.ghost;
                    trace::CausalLink l = make_link(trace::LinkKind::Entry, e.tag_loc);
                    l.variable = e.tag_var;
                    l.variable_kind = "parameter";
                    l.expr_signature = sig;
                    l.call_id = frame().call_id;
                    l.extern_boundary = frame().from_extern;
                    g.trace.append(std::move(l));
                    if (!g.pending.empty()) {
                        PendingInvoke pi = std::move(g.pending.front());
                        g.pending.erase(g.pending.begin());
                        trace::CausalLink inv = make_link(trace::LinkKind::Invoke, pi.location);
                        inv.variable = pi.variable;
                        inv.variable_kind = "parameter";
                        inv.expr_signature = pi.signature;
                        inv.stack = std::move(pi.stack);
                        inv.call_id = frame().call_id;
                        g.trace.append(std::move(inv));
                    }
                    return v;
                }
                if (v.kind == Value::Kind::Null) {
                    // A library callback bound null to this parameter.
                    auto g = make_ghost(e.type_hint);
                    trace::CausalLink l = make_link(trace::LinkKind::Entry, e.tag_loc);
                    l.variable = e.tag_var;
                    l.variable_kind = "parameter";
                    l.expr_signature = sig;
                    l.call_id = frame().call_id;
                    l.extern_boundary = frame().from_extern;
                    g->trace.append(std::move(l));
                    return Value::of_ghost(g);
                }
                return v;
            }
            case HelperKind::NullReturn: {
                const bool extern_edge = e.lhs->kind == ExprKind::ExternCall;
                if (v.kind == Value::Kind::Ghost) {
                    trace::CausalLink l = make_link(trace::LinkKind::Return, e.tag_loc);
                    l.expr_signature = sig;
                    l.extern_boundary = extern_edge;
                    append_link(*v.ghost, std::move(l));
                    return v;
                }
                if (v.kind == Value::Kind::Null) {
                    auto g = make_ghost(e.type_hint);
                    if (from_literal) {
                        trace::CausalLink lit = make_link(trace::LinkKind::Literal, e.tag_loc);
                        lit.expr_signature = "null";
                        g->trace.append(std::move(lit));
                    }
                    trace::CausalLink l = make_link(trace::LinkKind::Return, e.tag_loc);
                    l.expr_signature = sig;
                    l.extern_boundary = extern_edge;
                    g->trace.append(std::move(l));
                    return Value::of_ghost(g);
                }
                return v;
            }
            case HelperKind::NullUnbox: {
                std::string var = e.tag_var.empty() ? receiver_name(*e.lhs) : e.tag_var;
                return unbox(std::move(v), e.tag_loc, var, binding_kind(*e.lhs), nullptr);
            }
            case HelperKind::NullDeref: {
                if (v.kind == Value::Kind::Ghost) {
                    trace::CausalLink l = make_link(trace::LinkKind::Deref, e.tag_loc);
                    l.variable = e.tag_var.empty() ? receiver_name(*e.lhs) : e.tag_var;
                    l.variable_kind = binding_kind(*e.lhs);
                    l.expr_signature = sig;
                    ghost_failure(*v.ghost, std::move(l));
                }
                if (v.kind == Value::Kind::Null)
                    bare_null_failure(trace::LinkKind::Deref, e.tag_loc,
                                      e.tag_var.empty() ? receiver_name(*e.lhs) : e.tag_var,
                                      binding_kind(*e.lhs));
                return v;
            }
            case HelperKind::Exorcise:
                throw RunAbort{"unreachable: exorcise handled at the call boundary"};
        }
        throw RunAbort{"unreachable hook"};
    }

    const Program& p_;
    Mode mode_;
    Options opts_;
    RunResult result_;
    std::vector<Frame> stack_;
    long long steps_ = 0;
    long long creation_clock_ = 0;
    long long call_clock_ = 0;
    long long link_clock_ = 0;
};

}  // namespace

std::string render_value(const Value& v) {
    switch (v.kind) {
        case Value::Kind::Void: return "void";
        case Value::Kind::Null: return "null";
        case Value::Kind::Int: return std::to_string(v.i);
        case Value::Kind::Bool: return v.b ? "true" : "false";
        case Value::Kind::Box:
            return v.box.has_value() ? std::to_string(*v.box) : "IntBox";
        case Value::Kind::Object:
            return "<" + v.obj->klass + "@" + std::to_string(v.obj->creation_index) + ">";
        case Value::Kind::Ghost: return "null";
    }
    return "?";
}

RunResult interpret(const lang::Program& p, Mode mode, const Options& opts) {
    if (p.entry_class.empty()) throw std::invalid_argument("program is not resolved");
    if (mode == Mode::Instrumented && !p.instrumented)
        throw std::invalid_argument("instrumented mode requires an instrumented program");
    if (mode == Mode::Original && p.instrumented)
        throw std::invalid_argument("original mode requires an uninstrumented program");
    Interpreter in(p, mode, opts);
    return in.run();
}

}  // namespace gt::runtime
