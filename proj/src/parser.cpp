#include "drmx/parser.hpp"

#include <cctype>
#include <sstream>

#include "drmx/errors.hpp"
#include "drmx/feature.hpp"

namespace drmx {

namespace {

struct Token {
    enum class Kind { Atom, Var, Number, Punct, End };
    Kind kind;
    std::string text;
    Rational number;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(msg + (tok_.kind == Token::Kind::End
                                     ? " (at end of input)"
                                     : " (got '" + tok_.text + "')"),
                          tok_.line, tok_.col);
    }

private:
    void advance() {
        skip_ws();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_ = {Token::Kind::End, "", {}, line_, col_};
            return;
        }
        char c = text_[pos_];
        if (std::islower(static_cast<unsigned char>(c))) {
            tok_ = {Token::Kind::Atom, read_ident(), {}, tok_.line, tok_.col};
            return;
        }
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            tok_ = {Token::Kind::Var, read_ident(), {}, tok_.line, tok_.col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            tok_ = {Token::Kind::Number, "", read_number(), tok_.line, tok_.col};
            return;
        }
        if (c == '\'') {
            tok_ = {Token::Kind::Atom, read_quoted(), {}, tok_.line, tok_.col};
            return;
        }
        if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            bump();
            bump();
            tok_ = {Token::Kind::Punct, ":-", {}, tok_.line, tok_.col};
            return;
        }
        static const std::string puncts = "().,[]+-#*/";
        if (puncts.find(c) != std::string::npos) {
            bump();
            tok_ = {Token::Kind::Punct, std::string(1, c), {}, tok_.line, tok_.col};
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    std::string read_ident() {
        std::string s;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                s += c;
                bump();
            } else {
                break;
            }
        }
        return s;
    }

    std::string read_quoted() {
        int line = line_, col = col_;
        bump(); // opening quote
        std::string s;
        while (pos_ < text_.size() && text_[pos_] != '\'') {
            s += text_[pos_];
            bump();
        }
        if (pos_ >= text_.size()) throw SyntaxError("unterminated quoted atom", line, col);
        bump();
        return s;
    }

    Rational read_number() {
        bool neg = false;
        if (text_[pos_] == '-') {
            neg = true;
            bump();
        }
        long long intpart = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            intpart = intpart * 10 + (text_[pos_] - '0');
            bump();
        }
        long long num = intpart, den = 1;
        // a '.' is a fraction only when a digit follows; otherwise it terminates the statement
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            bump();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                num = num * 10 + (text_[pos_] - '0');
                den *= 10;
                bump();
            }
        }
        return Rational(neg ? -num : num, den);
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

class ClauseParser {
public:
    explicit ClauseParser(const std::string& text) : lex_(text) {}

    bool at_end() const { return lex_.peek().kind == Token::Kind::End; }
    Lexer& lexer() { return lex_; }

    TermPtr parse_term() {
        const Token& t = lex_.peek();
        switch (t.kind) {
        case Token::Kind::Var: return Term::variable(lex_.next().text);
        case Token::Kind::Number: {
            Rational n = lex_.next().number;
            // "num/den" form, as emitted for non-decimal rationals
            if (is_punct("/")) {
                lex_.next();
                if (lex_.peek().kind != Token::Kind::Number) lex_.fail("expected denominator");
                Rational d = lex_.next().number;
                if (d.den != 1 || d.num == 0) lex_.fail("denominator must be a nonzero integer");
                if (n.den != 1) lex_.fail("numerator must be an integer");
                return Term::numeric(Rational(n.num, d.num));
            }
            return Term::numeric(n);
        }
        case Token::Kind::Atom: {
            std::string name = lex_.next().text;
            if (is_punct("(")) {
                lex_.next();
                std::vector<TermPtr> args;
                args.push_back(parse_term());
                while (is_punct(",")) {
                    lex_.next();
                    args.push_back(parse_term());
                }
                expect(")");
                return Term::compound(std::move(name), std::move(args));
            }
            return Term::constant(std::move(name));
        }
        default: lex_.fail("expected term");
        }
    }

    Literal parse_literal() {
        if (lex_.peek().kind != Token::Kind::Atom) lex_.fail("expected predicate");
        std::string pred = lex_.next().text;
        Literal l;
        l.pred = std::move(pred);
        if (is_punct("(")) {
            lex_.next();
            l.args.push_back(parse_term());
            while (is_punct(",")) {
                lex_.next();
                l.args.push_back(parse_term());
            }
            expect(")");
        }
        return l;
    }

    Clause parse_clause() {
        Clause c;
        c.head = parse_literal();
        if (is_punct(":-")) {
            lex_.next();
            c.body.push_back(parse_literal());
            while (is_punct(",")) {
                lex_.next();
                c.body.push_back(parse_literal());
            }
        }
        expect(".");
        return c;
    }

    bool is_punct(const char* p) const {
        return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
    }

    void expect(const char* p) {
        if (!is_punct(p)) lex_.fail(std::string("expected '") + p + "'");
        lex_.next();
    }

private:
    Lexer lex_;
};

} // namespace

Program parse_program(const std::string& text) {
    ClauseParser p(text);
    Program out;
    while (!p.at_end()) out.add(p.parse_clause());
    return out;
}

std::vector<ModeDecl> parse_modes(const std::string& text, int recall_cap) {
    ClauseParser p(text);
    std::vector<ModeDecl> modes;
    while (!p.at_end()) {
        ModeDecl m;
        if (p.lexer().peek().kind != Token::Kind::Atom) p.lexer().fail("expected modeh or modeb");
        std::string kw = p.lexer().next().text;
        if (kw == "modeh")
            m.head = true;
        else if (kw == "modeb")
            m.head = false;
        else
            p.lexer().fail("expected modeh or modeb");
        p.expect("(");
        if (p.is_punct("*")) {
            p.lexer().next();
            m.recall = recall_cap;
        } else if (p.lexer().peek().kind == Token::Kind::Number) {
            Rational r = p.lexer().next().number;
            if (r.den != 1 || r.num <= 0) p.lexer().fail("recall must be a positive integer");
            m.recall = static_cast<int>(r.num);
        } else {
            p.lexer().fail("expected recall");
        }
        p.expect(",");
        if (p.lexer().peek().kind != Token::Kind::Atom) p.lexer().fail("expected mode template");
        m.pred = p.lexer().next().text;
        p.expect("(");
        auto placemarker = [&]() {
            ModeArg a;
            if (p.is_punct("+"))
                a.role = ModeArg::Role::Input;
            else if (p.is_punct("-"))
                a.role = ModeArg::Role::Output;
            else if (p.is_punct("#"))
                a.role = ModeArg::Role::Constant;
            else
                p.lexer().fail("expected placemarker +type, -type or #type");
            p.lexer().next();
            if (p.lexer().peek().kind != Token::Kind::Atom) p.lexer().fail("expected type name");
            a.type = p.lexer().next().text;
            return a;
        };
        m.args.push_back(placemarker());
        while (p.is_punct(",")) {
            p.lexer().next();
            m.args.push_back(placemarker());
        }
        p.expect(")");
        p.expect(")");
        p.expect(".");
        modes.push_back(std::move(m));
    }
    validate_modes(modes);
    return modes;
}

RelevanceMap parse_relevance(const std::string& text) {
    ClauseParser p(text);
    RelevanceMap r;
    bool order_seen = false;
    auto label_token = [&]() -> std::string {
        if (p.lexer().peek().kind == Token::Kind::Atom) return p.lexer().next().text;
        if (p.lexer().peek().kind == Token::Kind::Number) {
            Rational n = p.lexer().next().number;
            if (n.den != 1) p.lexer().fail("label must be an atom or integer");
            return std::to_string(n.num);
        }
        p.lexer().fail("expected relevance label");
    };
    while (!p.at_end()) {
        if (p.lexer().peek().kind != Token::Kind::Atom)
            p.lexer().fail("expected relevance_order or relevance");
        std::string kw = p.lexer().next().text;
        if (kw == "relevance_order") {
            if (order_seen) p.lexer().fail("duplicate relevance_order");
            order_seen = true;
            p.expect("(");
            p.expect("[");
            r.labels.push_back(label_token());
            while (p.is_punct(",")) {
                p.lexer().next();
                r.labels.push_back(label_token());
            }
            p.expect("]");
            p.expect(")");
            p.expect(".");
            for (size_t i = 0; i < r.labels.size(); ++i)
                for (size_t j = i + 1; j < r.labels.size(); ++j)
                    if (r.labels[i] == r.labels[j])
                        p.lexer().fail("duplicate label " + r.labels[i]);
        } else if (kw == "relevance") {
            if (!order_seen) p.lexer().fail("relevance_order must come first");
            p.expect("(");
            if (p.lexer().peek().kind != Token::Kind::Atom) p.lexer().fail("expected predicate");
            std::string pred = p.lexer().next().text;
            p.expect("/");
            if (p.lexer().peek().kind != Token::Kind::Number) p.lexer().fail("expected arity");
            Rational ar = p.lexer().next().number;
            if (ar.den != 1 || ar.num < 0) p.lexer().fail("arity must be a non-negative integer");
            p.expect(",");
            std::string label = label_token();
            p.expect(")");
            p.expect(".");
            int rank = r.rank_of_label(label);
            if (rank < 0)
                throw Error(ErrorKind::Parse, "unknown relevance label: " + label);
            r.assignment[pred + "/" + std::to_string(ar.num)] = rank;
        } else {
            p.lexer().fail("expected relevance_order or relevance");
        }
    }
    if (!order_seen) throw Error(ErrorKind::Parse, "relevance file missing relevance_order");
    return r;
}

std::vector<std::pair<std::string, std::string>> parse_examples(const std::string& text) {
    ClauseParser p(text);
    std::vector<std::pair<std::string, std::string>> out;
    while (!p.at_end()) {
        Clause c = p.parse_clause();
        if (!c.body.empty() || c.head->pred != "example" || c.head->args.size() != 2 ||
            c.head->args[0]->kind != Term::Kind::Constant ||
            c.head->args[1]->kind != Term::Kind::Constant)
            throw Error(ErrorKind::Parse,
                        "expected example(Id, ClassLabel) fact, got: " + clause_str(c));
        out.emplace_back(c.head->args[0]->symbol, c.head->args[1]->symbol);
    }
    return out;
}

std::vector<FeatureDef> parse_features(const std::string& text) {
    ClauseParser p(text);
    std::vector<FeatureDef> out;
    while (!p.at_end()) {
        if (p.lexer().peek().kind != Token::Kind::Atom || p.lexer().peek().text != "feature")
            p.lexer().fail("expected feature statement");
        p.lexer().next();
        p.expect("(");
        if (p.lexer().peek().kind != Token::Kind::Number) p.lexer().fail("expected feature index");
        Rational idx = p.lexer().next().number;
        if (idx.den != 1 || idx.num <= 0) p.lexer().fail("feature index must be positive");
        p.expect(",");
        p.expect("(");
        FeatureDef f;
        f.index = static_cast<int>(idx.num);
        Clause c;
        c.head = p.parse_literal();
        p.expect(":-");
        c.body.push_back(p.parse_literal());
        while (p.is_punct(",")) {
            p.lexer().next();
            c.body.push_back(p.parse_literal());
        }
        p.expect(")");
        p.expect(")");
        p.expect(".");
        f.clause = std::move(c);
        if (f.clause.head->pred != f.name())
            throw Error(ErrorKind::Parse, "feature head must be " + f.name());
        out.push_back(std::move(f));
    }
    return out;
}

std::string serialize_program(const Program& p) {
    std::ostringstream os;
    for (const auto& c : p.clauses()) os << clause_str(c) << ".\n";
    return os.str();
}

std::string serialize_modes(const std::vector<ModeDecl>& modes) {
    std::ostringstream os;
    for (const auto& m : modes) {
        os << (m.head ? "modeh(" : "modeb(") << m.recall << ", " << m.pred << "(";
        for (size_t i = 0; i < m.args.size(); ++i) {
            if (i) os << ",";
            switch (m.args[i].role) {
            case ModeArg::Role::Input: os << "+"; break;
            case ModeArg::Role::Output: os << "-"; break;
            case ModeArg::Role::Constant: os << "#"; break;
            }
            os << m.args[i].type;
        }
        os << ")).\n";
    }
    return os.str();
}

std::string serialize_relevance(const RelevanceMap& r) {
    std::ostringstream os;
    os << "relevance_order([";
    for (size_t i = 0; i < r.labels.size(); ++i) {
        if (i) os << ",";
        os << r.labels[i];
    }
    os << "]).\n";
    for (const auto& [ind, rank] : r.assignment)
        os << "relevance(" << ind << ", " << r.labels[static_cast<size_t>(rank)] << ").\n";
    return os.str();
}

std::string serialize_features(const std::vector<FeatureDef>& features) {
    std::ostringstream os;
    for (const auto& f : features) {
        os << "feature(" << f.index << ", (" << literal_str(*f.clause.head) << " :- ";
        for (size_t i = 0; i < f.clause.body.size(); ++i) {
            if (i) os << ", ";
            os << literal_str(f.clause.body[i]);
        }
        os << ")).\n";
    }
    return os.str();
}

} // namespace drmx
