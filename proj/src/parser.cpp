#include "mwi/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace mwi {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}

namespace {

enum class Tok { Number, Ident, LBr, RBr, Comma, Plus, Minus, Star, Caret, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto adv = [&](size_t n = 1) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        char ch = s[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            adv();
            continue;
        }
        int l = line, c = col;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j + 1 < s.size() && s[j] == '/' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            }
            out.push_back({Tok::Number, s.substr(i, j - i), l, c});
            adv(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), l, c});
            adv(j - i);
            continue;
        }
        static const std::map<char, Tok> single = {{'[', Tok::LBr},  {']', Tok::RBr},  {',', Tok::Comma},
                                                   {'+', Tok::Plus},  {'-', Tok::Minus}, {'*', Tok::Star},
                                                   {'^', Tok::Caret}};
        auto it = single.find(ch);
        if (it == single.end()) throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
        out.push_back({it->second, std::string(1, ch), l, c});
        adv();
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

const std::set<std::string> kCoeffSyms = {"e", "m", "c"};

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    bool at(Tok k) const { return peek().kind == k; }

    [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw ParseError(msg, t.line, t.col); }

    Token expect(Tok k, const std::string& what) {
        if (!at(k)) fail("expected " + what + (peek().text.empty() ? "" : " before '" + peek().text + "'"), peek());
        return take();
    }

    std::string index() {
        expect(Tok::LBr, "'['");
        std::string name = expect(Tok::Ident, "index name").text;
        expect(Tok::RBr, "']'");
        return name;
    }

    int exponent() {
        if (!at(Tok::Caret)) return 1;
        take();
        Token n = expect(Tok::Number, "integer exponent");
        if (n.text.find('/') != std::string::npos) fail("exponent must be an integer", n);
        return std::stoi(n.text);
    }

    // one poly, stopping at ',' or end
    Poly poly() {
        Poly out;
        std::optional<std::set<std::string>> free;
        bool first = true;
        while (true) {
            Scalar sign(1);
            if (at(Tok::Plus) || at(Tok::Minus)) {
                if (take().kind == Tok::Minus) sign = Scalar(-1);
            } else if (!first) {
                break;
            }
            const Token start = peek();
            Poly t = term(start) * sign;
            std::set<std::string> f;
            try {
                f = t.free_indices();
            } catch (const std::exception& ex) {
                fail(ex.what(), start);
            }
            if (!free)
                free = f;
            else if (!t.is_zero() && !out.is_zero() && f != *free)
                fail("free-index mismatch between terms", start);
            out = out + t;
            first = false;
        }
        return out;
    }

    struct Item {
        std::string name;
        std::vector<std::string> idx;
    };

    Poly build(const Item& it, const std::map<std::string, std::string>& ren) const {
        auto r = [&](const std::string& i) {
            auto f = ren.find(i);
            return f == ren.end() ? i : f->second;
        };
        const std::string& n = it.name;
        if (n == "phi") return fields::phi();
        if (n == "phistar") return fields::phistar();
        if (n == "A") return fields::A(r(it.idx[0]));
        if (n == "dphi") return fields::dphi(r(it.idx[0]));
        if (n == "dphistar") return fields::dphistar(r(it.idx[0]));
        if (n == "j") return fields::j(r(it.idx[0]));
        if (n == "eta") return Poly::metric(r(it.idx[0]), r(it.idx[1]));
        if (n == "L") return fields::L();
        if (n == "S") return fields::S();
        return fields::testfn("g");
    }

    Poly term(const Token& start) {
        Scalar coeff(1);
        std::vector<Item> items;
        std::map<std::string, int> uses;
        bool any = false;
        auto use = [&](const std::string& idx, const Token& t) {
            if (++uses[idx] > 2) fail("index " + idx + " used more than twice", t);
        };
        while (true) {
            if (at(Tok::Star)) {
                if (!any) fail("expected a factor", peek());
                take();
                continue;
            }
            if (at(Tok::Number)) {
                Token n = take();
                Scalar s(Rational(parse_rational(n.text)));
                int p = exponent();
                for (int k = 0; k < p; ++k) coeff *= s;
                any = true;
                continue;
            }
            if (!at(Tok::Ident)) break;
            Token id = take();
            const std::string& n = id.text;
            if (n == "i" || kCoeffSyms.count(n)) {
                Scalar s = n == "i" ? Scalar::I() : Scalar::sym(n);
                int p = exponent();
                for (int k = 0; k < p; ++k) coeff *= s;
            } else if (n == "phi" || n == "phistar" || n == "L" || n == "S" || n == "g") {
                items.push_back({n, {}});
            } else if (n == "A" || n == "dphi" || n == "dphistar" || n == "j") {
                std::string mu = index();
                use(mu, id);
                items.push_back({n, {mu}});
            } else if (n == "eta") {
                expect(Tok::LBr, "'['");
                std::string a = expect(Tok::Ident, "index name").text;
                expect(Tok::Comma, "','");
                std::string b = expect(Tok::Ident, "index name").text;
                expect(Tok::RBr, "']'");
                use(a, id);
                use(b, id);
                items.push_back({n, {a, b}});
            } else {
                fail("unknown name '" + n + "'", id);
            }
            any = true;
        }
        if (!any) fail("expected a term", start);
        // contracted names are private to the term
        std::map<std::string, std::string> ren;
        for (const auto& [idx, k] : uses) {
            if (k == 2) ren[idx] = fresh_index();
            if (k == 1 && idx[0] == '_') fail("free index " + idx + " uses the reserved prefix '_'", start);
        }
        Poly out(coeff);
        for (const auto& it : items) out = out * build(it, ren);
        return out;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
};

std::string qi_coeff(const Rational& r) { return rational_str(r); }

}  // namespace

Poly parse_poly(const std::string& text) {
    Parser p(text);
    Poly out = p.poly();
    if (!p.at(Tok::End)) p.fail("unexpected '" + p.peek().text + "'", p.peek());
    return out;
}

std::vector<Poly> parse_list(const std::string& text) {
    Parser p(text);
    std::vector<Poly> out;
    out.push_back(p.poly());
    while (p.at(Tok::Comma)) {
        p.take();
        out.push_back(p.poly());
    }
    if (!p.at(Tok::End)) p.fail("unexpected '" + p.peek().text + "'", p.peek());
    return out;
}

Scalar parse_scalar(const std::string& text) {
    Poly p = parse_poly(text);
    auto s = as_scalar(p);
    if (!s) throw ParseError("expected a scalar, got field content", 1, 1);
    return *s;
}

std::string print_poly(const Poly& P) {
    if (P.is_zero()) return "0";
    std::string out;
    auto emit = [&](const Rational& c, const std::string& unit, const std::string& body) {
        Rational a = c < 0 ? Rational(-c) : c;
        std::string t;
        if (a != 1) t = qi_coeff(a);
        auto push = [&](const std::string& x) {
            if (x.empty()) return;
            if (!t.empty()) t += " ";
            t += x;
        };
        push(unit);
        push(body);
        if (t.empty()) t = "1";
        if (out.empty())
            out = (c < 0 ? "-" : "") + t;
        else
            out += (c < 0 ? " - " : " + ") + t;
    };
    for (const auto& [key, v] : P.terms()) {
        const Term& t = v.first;
        std::string body;
        auto push = [&](const std::string& x) {
            if (!body.empty()) body += " ";
            body += x;
        };
        for (const auto& f : t.f) {
            if (f.pt != 0) throw std::invalid_argument("print_poly: factor away from point 0: " + f.str());
            if (f.kind == Kind::TestFn && f.name == "g" && f.der.empty()) {
                push("g");
            } else if (f.kind == Kind::Field && f.name == "A" && f.der.empty()) {
                push("A[" + f.own + "]");
            } else if (f.kind == Kind::Field && (f.name == "phi" || f.name == "phistar") && f.der.size() <= 1) {
                push(f.der.empty() ? f.name : "d" + f.name + "[" + f.der[0] + "]");
            } else {
                throw std::invalid_argument("print_poly: no syntax for factor " + f.str());
            }
        }
        for (const auto& [a, b] : t.g) push("eta[" + a + "," + b + "]");
        for (const auto& [mono, q] : v.second.terms()) {
            std::string syms;
            for (const auto& [name, p] : mono) {
                if (!syms.empty()) syms += " ";
                syms += name + (p == 1 ? "" : "^" + std::to_string(p));
            }
            std::string rest = syms;
            if (!body.empty()) rest += (rest.empty() ? "" : " ") + body;
            if (q.re != 0) emit(q.re, "", rest);
            if (q.im != 0) emit(q.im, "i", rest);
        }
    }
    return out;
}

}  // namespace mwi
