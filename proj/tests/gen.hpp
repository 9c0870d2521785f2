// Property-test program generator: random well-typed MiniLang programs that
// never touch null (every reference initialized, every box filled, bounded
// loops, call graph a DAG). Instrumenting such a program must not change its
// filtered event log.
#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace gt::testing {

class ProgramGen {
  public:
    explicit ProgramGen(std::uint64_t seed) : rng_(seed) {}

    std::string generate() {
        out_.str("");
        classes_ = 1 + pick(3);  // C0..C{n-1}
        fields_.assign(classes_, {});
        methods_.assign(classes_, {});
        plan();
        for (int c = 0; c < classes_; c++) emit_class(c);
        emit_main();
        return out_.str();
    }

  private:
    struct Field {
        std::string name;
        std::string type;  // "int" | "bool" | "IntBox" | class name
        int ref_class = -1;
    };
    struct Param {
        std::string name;
        std::string type;
        int ref_class = -1;
        bool is_final = false;
    };
    struct Method {
        std::string name;
        std::vector<Param> params;
        std::string ret;  // "void" | "int" | "bool" | "IntBox" | class
        int ret_class = -1;
        int order = 0;  // global DAG order; may only call strictly smaller
    };
    struct Local {
        std::string name;
        std::string type;
        int ref_class = -1;
    };

    std::uint64_t pick(std::uint64_t n) { return rng_() % n; }
    bool chance(int percent) { return static_cast<int>(pick(100)) < percent; }

    std::string cls(int i) { return "C" + std::to_string(i); }

    void plan() {
        int order = 0;
        for (int c = 0; c < classes_; c++) {
            int nfields = 1 + static_cast<int>(pick(3));
            for (int f = 0; f < nfields; f++) {
                Field fd;
                fd.name = "f" + std::to_string(f);
                switch (pick(c > 0 ? 4 : 3)) {
                    case 0: fd.type = "int"; break;
                    case 1: fd.type = "bool"; break;
                    case 2: fd.type = "IntBox"; break;
                    default:
                        fd.ref_class = static_cast<int>(pick(c));
                        fd.type = cls(fd.ref_class);
                        break;
                }
                fields_[c].push_back(fd);
            }
            int nmethods = 1 + static_cast<int>(pick(3));
            for (int m = 0; m < nmethods; m++) {
                Method md;
                md.name = "m" + std::to_string(m);
                md.order = order++;
                int nparams = static_cast<int>(pick(3));
                for (int p = 0; p < nparams; p++) {
                    Param prm;
                    prm.name = "p" + std::to_string(p);
                    switch (pick(4)) {
                        case 0: prm.type = "int"; break;
                        case 1: prm.type = "bool"; break;
                        case 2: prm.type = "IntBox"; break;
                        default:
                            prm.ref_class = static_cast<int>(pick(classes_));
                            prm.type = cls(prm.ref_class);
                            prm.is_final = chance(30);
                            break;
                    }
                    md.params.push_back(prm);
                }
                switch (pick(5)) {
                    case 0: md.ret = "void"; break;
                    case 1: md.ret = "int"; break;
                    case 2: md.ret = "bool"; break;
                    case 3: md.ret = "IntBox"; break;
                    default:
                        md.ret_class = static_cast<int>(pick(classes_));
                        md.ret = cls(md.ret_class);
                        break;
                }
                methods_[c].push_back(md);
            }
        }
    }

    // ---- expressions ----

    std::string int_expr(int depth) {
        if (depth <= 0 || chance(30)) {
            if (chance(50) && !locals_of("int").empty()) return pick_local("int");
            if (chance(35)) {
                std::string f = field_of("int");
                if (!f.empty()) return f;
            }
            return std::to_string(pick(100));
        }
        switch (pick(4)) {
            case 0: {
                const char* ops[] = {"+", "-", "*"};
                return "(" + int_expr(depth - 1) + " " + ops[pick(3)] + " " +
                       int_expr(depth - 1) + ")";
            }
            case 1:
                if (!locals_of("IntBox").empty())
                    return "(" + pick_local("IntBox") + " + " + std::to_string(pick(9)) + ")";
                return int_expr(depth - 1);
            case 2: {
                std::string call = call_expr("int", depth - 1);
                if (!call.empty()) return call;
                return int_expr(depth - 1);
            }
            default:
                return std::to_string(pick(100));
        }
    }

    std::string bool_expr(int depth) {
        if (depth <= 0 || chance(25)) {
            if (chance(40) && !locals_of("bool").empty()) return pick_local("bool");
            return chance(50) ? "true" : "false";
        }
        switch (pick(5)) {
            case 0: {
                const char* ops[] = {"<", "<=", ">", ">=", "==", "!="};
                return "(" + int_expr(depth - 1) + " " + ops[pick(6)] + " " +
                       int_expr(depth - 1) + ")";
            }
            case 1: {
                const char* ops[] = {"&&", "||"};
                return "(" + bool_expr(depth - 1) + " " + ops[pick(2)] + " " +
                       bool_expr(depth - 1) + ")";
            }
            case 2:
                return "!" + bool_expr(depth - 1);
            case 3: {
                // reference equality / instanceof over pure operands
                std::string a = ref_local_any();
                if (!a.empty()) {
                    if (chance(50)) return "(" + a + " instanceof " + cls(pick(classes_)) + ")";
                    std::string b = ref_local_any();
                    if (!b.empty())
                        return "(" + a + (chance(50) ? " == " : " != ") + b + ")";
                }
                return bool_expr(depth - 1);
            }
            default: {
                std::string call = call_expr("bool", depth - 1);
                if (!call.empty()) return call;
                return chance(50) ? "true" : "false";
            }
        }
    }

    std::string box_expr(int depth) {
        if (!locals_of("IntBox").empty() && chance(50)) return pick_local("IntBox");
        std::string f = field_of("IntBox");
        if (!f.empty() && chance(40)) return f;
        return int_expr(depth > 0 ? depth - 1 : 0);  // boxed implicitly
    }

    std::string ref_expr(int klass, int depth) {
        for (const auto& l : locals_)
            if (l.ref_class == klass && chance(60)) return l.name;
        if (!in_main_)
            for (size_t i = 0; i < fields_[cur_class_].size(); i++)
                if (fields_[cur_class_][i].ref_class == klass && chance(50))
                    return "this." + fields_[cur_class_][i].name;
        if (depth > 0) {
            std::string call = call_expr(cls(klass), depth - 1);
            if (!call.empty() && chance(30)) return call;
        }
        return "new " + cls(klass) + "()";
    }

    std::string typed_expr(const std::string& type, int ref_class, int depth) {
        if (type == "int") return int_expr(depth);
        if (type == "bool") return bool_expr(depth);
        if (type == "IntBox") return box_expr(depth);
        return ref_expr(ref_class, depth);
    }

    // A call to a method with a strictly smaller DAG order returning `ret`.
    std::string call_expr(const std::string& ret, int depth) {
        std::vector<std::pair<int, int>> candidates;
        for (int c = 0; c < classes_; c++)
            for (size_t m = 0; m < methods_[c].size(); m++)
                if (methods_[c][m].ret == ret && methods_[c][m].order < cur_order_)
                    candidates.emplace_back(c, static_cast<int>(m));
        if (candidates.empty()) return "";
        auto [c, m] = candidates[pick(candidates.size())];
        const Method& md = methods_[c][m];
        std::string recv =
            !in_main_ && c == cur_class_ && chance(60) ? "this" : ref_expr(c, 0);
        std::string call = recv + "." + md.name + "(";
        for (size_t i = 0; i < md.params.size(); i++) {
            if (i) call += ", ";
            call += typed_expr(md.params[i].type, md.params[i].ref_class,
                               depth > 0 ? depth - 1 : 0);
        }
        return call + ")";
    }

    // ---- statements ----

    std::vector<Local> locals_of(const std::string& type) {
        std::vector<Local> out;
        for (const auto& l : locals_)
            if (l.type == type) out.push_back(l);
        return out;
    }

    std::string pick_local(const std::string& type) {
        auto ls = locals_of(type);
        return ls[pick(ls.size())].name;
    }

    std::string ref_local_any() {
        std::vector<std::string> out;
        for (const auto& l : locals_)
            if (l.ref_class >= 0) out.push_back(l.name);
        if (out.empty()) return "";
        return out[pick(out.size())];
    }

    std::string field_of(const std::string& type) {
        if (in_main_) return "";
        for (const auto& f : fields_[cur_class_])
            if (f.type == type && chance(60)) return "this." + f.name;
        return "";
    }

    void line(int indent, const std::string& text) {
        out_ << std::string(static_cast<size_t>(indent) * 4, ' ') << text << "\n";
    }

    void emit_stmt(int indent, int depth) {
        switch (pick(6)) {
            case 0: {  // fresh local
                Local l;
                l.name = "v" + std::to_string(local_counter_++);
                switch (pick(4)) {
                    case 0: l.type = "int"; break;
                    case 1: l.type = "bool"; break;
                    case 2: l.type = "IntBox"; break;
                    default:
                        l.ref_class = static_cast<int>(pick(classes_));
                        l.type = cls(l.ref_class);
                        break;
                }
                line(indent, l.type + " " + l.name + " = " +
                                 typed_expr(l.type, l.ref_class, depth) + ";");
                locals_.push_back(l);
                break;
            }
            case 1: {  // assignment to an existing slot
                if (!locals_.empty()) {
                    const Local l = locals_[pick(locals_.size())];
                    if (!writable(l.name)) break;
                    line(indent, l.name + " = " + typed_expr(l.type, l.ref_class, depth) + ";");
                } else if (!in_main_ && !fields_[cur_class_].empty()) {
                    const Field& f = fields_[cur_class_][pick(fields_[cur_class_].size())];
                    line(indent, "this." + f.name + " = " +
                                     typed_expr(f.type, f.ref_class, depth) + ";");
                }
                break;
            }
            case 2: {  // guarded block
                if (depth <= 0) break;
                line(indent, "if (" + bool_expr(depth) + ") {");
                size_t mark = locals_.size();
                emit_stmt(indent + 1, depth - 1);
                locals_.resize(mark);
                if (chance(50)) {
                    line(indent, "} else {");
                    emit_stmt(indent + 1, depth - 1);
                    locals_.resize(mark);
                }
                line(indent, "}");
                break;
            }
            case 3: {  // bounded loop
                if (depth <= 0) break;
                std::string i = "v" + std::to_string(local_counter_++);
                line(indent, "int " + i + " = " + std::to_string(1 + pick(4)) + ";");
                line(indent, "while (" + i + " > 0) {");
                line(indent + 1, i + " = " + i + " - 1;");
                size_t mark = locals_.size();
                emit_stmt(indent + 1, depth - 1);
                locals_.resize(mark);
                line(indent, "}");
                break;
            }
            case 4: {  // call for effect
                std::string call = call_expr("void", depth);
                if (call.empty()) call = call_expr("int", depth);
                if (!call.empty()) line(indent, call + ";");
                break;
            }
            default: {  // try/catch around safe statements
                if (depth <= 0) break;
                line(indent, "try {");
                size_t mark = locals_.size();
                emit_stmt(indent + 1, depth - 1);
                locals_.resize(mark);
                line(indent, "} catch {");
                line(indent, "}");
                break;
            }
        }
    }

    bool writable(const std::string& name) {
        for (const auto& p : final_params_)
            if (p == name) return false;
        return true;
    }

    void emit_body(const Method& md, int indent) {
        locals_.clear();
        final_params_.clear();
        for (const auto& p : md.params) {
            Local l{p.name, p.type, p.ref_class};
            locals_.push_back(l);
            if (p.is_final) final_params_.push_back(p.name);
        }
        int stmts = 1 + static_cast<int>(pick(4));
        for (int i = 0; i < stmts; i++) emit_stmt(indent, 3);
        if (md.ret != "void")
            line(indent, "return " + typed_expr(md.ret, md.ret_class, 2) + ";");
    }

    void emit_class(int c) {
        cur_class_ = c;
        out_ << "class " << cls(c) << " {\n";
        for (const auto& f : fields_[c]) {
            std::string init;
            if (f.type == "int")
                init = std::to_string(pick(50));
            else if (f.type == "bool")
                init = pick(2) ? "true" : "false";
            else if (f.type == "IntBox")
                init = std::to_string(pick(50));
            else
                init = "new " + f.type + "()";
            line(1, f.type + " " + f.name + " = " + init + ";");
        }
        for (size_t m = 0; m < methods_[c].size(); m++) {
            const Method& md = methods_[c][m];
            cur_order_ = md.order;
            out_ << "    " << md.ret << " " << md.name << "(";
            for (size_t i = 0; i < md.params.size(); i++) {
                if (i) out_ << ", ";
                if (md.params[i].is_final) out_ << "final ";
                out_ << md.params[i].type << " " << md.params[i].name;
            }
            out_ << ") {\n";
            emit_body(md, 2);
            out_ << "    }\n";
        }
        out_ << "}\n\n";
    }

    void emit_main() {
        in_main_ = true;  // Main has no fields; `this` stays out of reach
        cur_class_ = 0;
        cur_order_ = 1 << 20;  // main may call everything
        out_ << "class Main {\n    void main() {\n";
        locals_.clear();
        final_params_.clear();
        local_counter_ = 100;
        int stmts = 2 + static_cast<int>(pick(4));
        for (int i = 0; i < stmts; i++) emit_stmt(2, 3);
        out_ << "    }\n}\n";
        in_main_ = false;
    }

    std::mt19937_64 rng_;
    std::ostringstream out_;
    int classes_ = 0;
    std::vector<std::vector<Field>> fields_;
    std::vector<std::vector<Method>> methods_;
    std::vector<Local> locals_;
    std::vector<std::string> final_params_;
    int cur_class_ = 0;
    int cur_order_ = 0;
    int local_counter_ = 0;
    bool in_main_ = false;
};

}  // namespace gt::testing
