#pragma once

#include <memory>
#include <variant>

#include "djc/dolbeault.hpp"
#include "djc/structures.hpp"

namespace djc::dsl {

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

struct Token {
    enum Kind { Ident, Number, Punct, AtName, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string src) : src_(std::move(src)) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') { // comment to end of line
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
                continue;
            }
            break;
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::End, "", line_, col_};
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_ = {Token::Ident, src_.substr(start, pos_ - start), line_, col_};
            col_ += static_cast<int>(pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            tok_ = {Token::Number, src_.substr(start, pos_ - start), line_, col_};
            col_ += static_cast<int>(pos_ - start);
            return;
        }
        if (c == '@') {
            size_t start = ++pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            if (start == pos_) throw SyntaxError(where() + "expected coordinate name after '@'");
            tok_ = {Token::AtName, src_.substr(start, pos_ - start), line_, col_};
            col_ += static_cast<int>(pos_ - start + 1);
            return;
        }
        tok_ = {Token::Punct, std::string(1, c), line_, col_};
        ++pos_;
        ++col_;
    }

    std::string where() const {
        return "line " + std::to_string(line_) + ", column " + std::to_string(col_) + ": ";
    }

    std::string src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
    enum Kind { Number, Ident, Qualified, AtVec, Unary, Binary, Call } kind = Ident;
    std::string text;  // number digits, identifier, "chart.name", coordinate
    char op = 0;       // unary/binary operator
    std::vector<ExprPtr> args;
    std::vector<std::string> kwnames; // call keywords; "" for positional
    int line = 1, col = 1;
};

struct ChartDecl {
    std::string name; // empty for the anonymous chart
    std::vector<std::string> coords;
};

struct SampleDecl {
    std::string chart; // empty = anonymous/sole chart
    std::vector<std::pair<std::string, std::string>> values; // coord -> rational literal
};

struct Binding {
    std::string name;
    ExprPtr value;
};

struct Command {
    std::string name; // hyphenated report name, e.g. "check-jacobi"
    std::vector<ExprPtr> args;
};

struct Document {
    std::vector<ChartDecl> charts;
    // statements in source order
    struct Stmt {
        enum Kind { BindingKind, SampleKind, CommandKind } kind;
        size_t index;
    };
    std::vector<Stmt> order;
    std::vector<Binding> bindings;
    std::vector<SampleDecl> samples;
    std::vector<Command> commands;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string src) : lex_(std::move(src)) {}

    Document parse() {
        Document doc;
        while (peek_ident("chart")) doc.charts.push_back(parse_chart());
        if (doc.charts.empty()) fail("document must start with a chart declaration");
        while (lex_.peek().kind != Token::End) {
            if (peek_ident("sample")) {
                doc.samples.push_back(parse_sample());
                doc.order.push_back({Document::Stmt::SampleKind, doc.samples.size() - 1});
                continue;
            }
            Token head = expect(Token::Ident, "statement");
            if (lex_.peek().kind == Token::Punct && lex_.peek().text == "=") {
                lex_.next();
                Binding b{head.text, parse_expr()};
                expect_punct(";");
                doc.bindings.push_back(std::move(b));
                doc.order.push_back({Document::Stmt::BindingKind, doc.bindings.size() - 1});
            } else {
                doc.commands.push_back(parse_command(head));
                doc.order.push_back({Document::Stmt::CommandKind, doc.commands.size() - 1});
            }
        }
        return doc;
    }

    ExprPtr parse_expr() { return parse_add(); }

private:
    [[noreturn]] void fail(const std::string& msg) {
        const Token& t = lex_.peek();
        throw SyntaxError("line " + std::to_string(t.line) + ", column " + std::to_string(t.col) +
                          ": " + msg);
    }

    bool peek_ident(const std::string& s) {
        return lex_.peek().kind == Token::Ident && lex_.peek().text == s;
    }

    Token expect(Token::Kind k, const std::string& what) {
        if (lex_.peek().kind != k) fail("expected " + what);
        return lex_.next();
    }

    void expect_punct(const std::string& p) {
        if (lex_.peek().kind != Token::Punct || lex_.peek().text != p) fail("expected '" + p + "'");
        lex_.next();
    }

    bool accept_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    ChartDecl parse_chart() {
        lex_.next(); // chart
        ChartDecl decl;
        if (lex_.peek().kind == Token::Ident) decl.name = lex_.next().text;
        expect_punct("(");
        decl.coords.push_back(expect(Token::Ident, "coordinate name").text);
        while (accept_punct(",")) decl.coords.push_back(expect(Token::Ident, "coordinate name").text);
        expect_punct(")");
        expect_punct(";");
        return decl;
    }

    std::string parse_rational_literal() {
        bool neg = accept_punct("-");
        std::string num = expect(Token::Number, "number").text;
        std::string out = (neg ? "-" : "") + num;
        if (accept_punct("/")) out += "/" + expect(Token::Number, "number").text;
        return out;
    }

    SampleDecl parse_sample() {
        lex_.next(); // sample
        SampleDecl s;
        if (lex_.peek().kind == Token::Ident) s.chart = lex_.next().text;
        expect_punct("(");
        for (;;) {
            std::string coord = expect(Token::Ident, "coordinate name").text;
            expect_punct("=");
            s.values.emplace_back(coord, parse_rational_literal());
            if (!accept_punct(",")) break;
        }
        expect_punct(")");
        expect_punct(";");
        return s;
    }

    // joins hyphenated keyword parts: "flat-product", "check hom-poisson"
    std::string hyphen_join(std::string first) {
        while (lex_.peek().kind == Token::Punct && lex_.peek().text == "-") {
            lex_.next();
            first += "-" + expect(Token::Ident, "keyword continuation").text;
        }
        return first;
    }

    Command parse_command(const Token& head) {
        Command cmd;
        std::string name = hyphen_join(head.text);
        if (name == "check" || name == "backward" || name == "suite") {
            std::string sub = hyphen_join(expect(Token::Ident, "command kind").text);
            name += "-" + sub;
        }
        cmd.name = name;
        while (!(lex_.peek().kind == Token::Punct && lex_.peek().text == ";")) {
            if (lex_.peek().kind == Token::End) fail("expected ';'");
            cmd.args.push_back(parse_primary());
        }
        expect_punct(";");
        return cmd;
    }

    ExprPtr mk(Expr e) { return std::make_shared<Expr>(std::move(e)); }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        while (lex_.peek().kind == Token::Punct &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            char op = lex_.next().text[0];
            Expr e;
            e.kind = Expr::Binary;
            e.op = op;
            e.args = {lhs, parse_mul()};
            lhs = mk(std::move(e));
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        while (lex_.peek().kind == Token::Punct &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            char op = lex_.next().text[0];
            Expr e;
            e.kind = Expr::Binary;
            e.op = op;
            e.args = {lhs, parse_unary()};
            lhs = mk(std::move(e));
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == "-") {
            lex_.next();
            Expr e;
            e.kind = Expr::Unary;
            e.op = '-';
            e.args = {parse_unary()};
            return mk(std::move(e));
        }
        return parse_pow();
    }

    ExprPtr parse_pow() {
        ExprPtr lhs = parse_primary();
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == "^") {
            lex_.next();
            Expr e;
            e.kind = Expr::Binary;
            e.op = '^';
            e.args = {lhs, parse_pow()}; // right associative
            return mk(std::move(e));
        }
        return lhs;
    }

    ExprPtr parse_primary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Number) {
            Expr e;
            e.kind = Expr::Number;
            e.text = lex_.next().text;
            return mk(std::move(e));
        }
        if (t.kind == Token::AtName) {
            Expr e;
            e.kind = Expr::AtVec;
            e.text = lex_.next().text;
            return mk(std::move(e));
        }
        if (t.kind == Token::Punct && t.text == "(") {
            lex_.next();
            ExprPtr inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        if (t.kind == Token::Ident) {
            Token id = lex_.next();
            if (lex_.peek().kind == Token::Punct && lex_.peek().text == ".") {
                lex_.next();
                Token member = expect(Token::Ident, "member after '.'");
                Expr e;
                e.kind = Expr::Qualified;
                e.text = id.text + "." + member.text;
                return mk(std::move(e));
            }
            if (lex_.peek().kind == Token::Punct && lex_.peek().text == "(") {
                lex_.next();
                Expr e;
                e.kind = Expr::Call;
                e.text = id.text;
                if (!(lex_.peek().kind == Token::Punct && lex_.peek().text == ")")) {
                    for (;;) {
                        std::string kw;
                        // keyword argument: IDENT '=' expr
                        if (lex_.peek().kind == Token::Ident) {
                            Token maybe = lex_.next();
                            if (lex_.peek().kind == Token::Punct && lex_.peek().text == "=") {
                                lex_.next();
                                kw = maybe.text;
                                e.kwnames.push_back(kw);
                                e.args.push_back(parse_expr());
                            } else {
                                // re-parse as expression beginning with this identifier
                                e.kwnames.push_back("");
                                e.args.push_back(continue_expr_with_ident(maybe));
                            }
                        } else {
                            e.kwnames.push_back("");
                            e.args.push_back(parse_expr());
                        }
                        if (!accept_punct(",")) break;
                    }
                }
                expect_punct(")");
                return mk(std::move(e));
            }
            Expr e;
            e.kind = Expr::Ident;
            e.text = id.text;
            return mk(std::move(e));
        }
        fail("expected expression");
    }

    // The identifier was consumed while probing for a keyword argument;
    // rebuild the expression that starts with it.
    ExprPtr continue_expr_with_ident(const Token& id) {
        ExprPtr base;
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == "(") {
            // function call: reparse via a tiny trick — build the call here
            lex_.next();
            Expr e;
            e.kind = Expr::Call;
            e.text = id.text;
            if (!(lex_.peek().kind == Token::Punct && lex_.peek().text == ")")) {
                for (;;) {
                    if (lex_.peek().kind == Token::Ident) {
                        Token maybe = lex_.next();
                        if (lex_.peek().kind == Token::Punct && lex_.peek().text == "=") {
                            lex_.next();
                            e.kwnames.push_back(maybe.text);
                            e.args.push_back(parse_expr());
                        } else {
                            e.kwnames.push_back("");
                            e.args.push_back(continue_expr_with_ident(maybe));
                        }
                    } else {
                        e.kwnames.push_back("");
                        e.args.push_back(parse_expr());
                    }
                    if (!accept_punct(",")) break;
                }
            }
            expect_punct(")");
            base = mk(std::move(e));
        } else if (lex_.peek().kind == Token::Punct && lex_.peek().text == ".") {
            lex_.next();
            Token member = expect(Token::Ident, "member after '.'");
            Expr e;
            e.kind = Expr::Qualified;
            e.text = id.text + "." + member.text;
            base = mk(std::move(e));
        } else {
            Expr e;
            e.kind = Expr::Ident;
            e.text = id.text;
            base = mk(std::move(e));
        }
        // resume precedence climbing above the primary level
        while (lex_.peek().kind == Token::Punct && lex_.peek().text == "^") {
            lex_.next();
            Expr e;
            e.kind = Expr::Binary;
            e.op = '^';
            e.args = {base, parse_pow()};
            base = mk(std::move(e));
        }
        while (lex_.peek().kind == Token::Punct &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            char op = lex_.next().text[0];
            Expr e;
            e.kind = Expr::Binary;
            e.op = op;
            e.args = {base, parse_unary()};
            base = mk(std::move(e));
        }
        while (lex_.peek().kind == Token::Punct &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            char op = lex_.next().text[0];
            Expr e;
            e.kind = Expr::Binary;
            e.op = op;
            e.args = {base, parse_mul()};
            base = mk(std::move(e));
        }
        return base;
    }

    Lexer lex_;
};

inline Document parse(const std::string& src) { return Parser(src).parse(); }

// ---------------------------------------------------------------------------
// Printer (canonical form; parse ∘ print is the identity on its output)
// ---------------------------------------------------------------------------

inline int precedence(const Expr& e) {
    if (e.kind == Expr::Binary) {
        if (e.op == '+' || e.op == '-') return 1;
        if (e.op == '*' || e.op == '/') return 2;
        return 3; // ^
    }
    if (e.kind == Expr::Unary) return 2;
    return 4;
}

inline std::string print_expr(const Expr& e) {
    auto wrap = [&](const Expr& child, bool strict) {
        std::string s = print_expr(child);
        int pc = precedence(child), pe = precedence(e);
        if (pc < pe || (strict && pc == pe)) return "(" + s + ")";
        return s;
    };
    switch (e.kind) {
        case Expr::Number: return e.text;
        case Expr::Ident: return e.text;
        case Expr::Qualified: return e.text;
        case Expr::AtVec: return "@" + e.text;
        case Expr::Unary: return "-" + wrap(*e.args[0], false);
        case Expr::Binary: {
            const char* pad = (e.op == '+' || e.op == '-') ? " " : "";
            return wrap(*e.args[0], false) + pad + std::string(1, e.op) + pad +
                   wrap(*e.args[1], true);
        }
        case Expr::Call: {
            std::string s = e.text + "(";
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) s += ", ";
                if (!e.kwnames[i].empty()) s += e.kwnames[i] + "=";
                s += print_expr(*e.args[i]);
            }
            return s + ")";
        }
    }
    return "";
}

inline std::string print(const Document& doc) {
    std::string out;
    for (const auto& c : doc.charts) {
        out += "chart";
        if (!c.name.empty()) out += " " + c.name;
        out += " (";
        for (size_t i = 0; i < c.coords.size(); ++i) {
            if (i) out += ", ";
            out += c.coords[i];
        }
        out += ");\n";
    }
    for (const auto& st : doc.order) {
        if (st.kind == Document::Stmt::BindingKind) {
            const auto& b = doc.bindings[st.index];
            out += b.name + " = " + print_expr(*b.value) + ";\n";
        } else if (st.kind == Document::Stmt::SampleKind) {
            const auto& s = doc.samples[st.index];
            out += "sample";
            if (!s.chart.empty()) out += " " + s.chart;
            out += " (";
            for (size_t i = 0; i < s.values.size(); ++i) {
                if (i) out += ", ";
                out += s.values[i].first + "=" + s.values[i].second;
            }
            out += ");\n";
        } else {
            const auto& c = doc.commands[st.index];
            std::string name = c.name;
            // command keywords that take a subcommand print with a space
            for (const char* head : {"check-", "backward-", "suite-"}) {
                if (name.rfind(head, 0) == 0) {
                    name = std::string(head).substr(0, std::string(head).size() - 1) + " " +
                           name.substr(std::string(head).size());
                    break;
                }
            }
            out += name;
            for (const auto& a : c.args) out += " " + print_expr(*a);
            out += ";\n";
        }
    }
    return out;
}

} // namespace djc::dsl
