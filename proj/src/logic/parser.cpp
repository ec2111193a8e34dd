#include "rill/logic/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "rill/errors.hpp"

namespace rill::logic {
namespace {

enum class Tok { Ident, Forall, Exists, LParen, RParen, Comma, Colon, Bang, Amp, Bar, Arrow, DArrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Forall: return "'forall'";
    case Tok::Exists: return "'exists'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'<->'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s, std::size_t first_line) {
  std::vector<Token> out;
  std::size_t line = first_line, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, std::size_t width) {
    out.push_back({k, std::move(text), line, col});
    i += width;
    col += width;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
    } else if (ident_char(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word(s.substr(i, j - i));
      Tok k = word == "forall" ? Tok::Forall : word == "exists" ? Tok::Exists : Tok::Ident;
      push(k, word, j - i);
    } else if (s.substr(i, 3) == "<->") {
      push(Tok::DArrow, "<->", 3);
    } else if (s.substr(i, 2) == "->") {
      push(Tok::Arrow, "->", 2);
    } else {
      switch (c) {
        case '(': push(Tok::LParen, "(", 1); break;
        case ')': push(Tok::RParen, ")", 1); break;
        case ',': push(Tok::Comma, ",", 1); break;
        case ':': push(Tok::Colon, ":", 1); break;
        case '!': push(Tok::Bang, "!", 1); break;
        case '&': push(Tok::Amp, "&", 1); break;
        case '|': push(Tok::Bar, "|", 1); break;
        default:
          throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Signature& sig) : toks_(std::move(toks)), sig_(sig) {}

  Formula parse_top() {
    Formula f = rule();
    if (peek().kind != Tok::End) fail("unexpected " + std::string(describe(peek().kind)));
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok k) {
    if (peek().kind != k) {
      fail(std::string("expected ") + describe(k) + ", found " + describe(peek().kind));
    }
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().line, peek().col);
  }

  Formula rule() {
    if (peek().kind == Tok::Forall || peek().kind == Tok::Exists) return quantified();
    return iff();
  }

  Formula quantified() {
    const bool universal = next().kind == Tok::Forall;
    std::vector<std::string> vars;
    do {
      const Token& v = expect(Tok::Ident);
      for (const auto& b : bound_) {
        if (b == v.text) throw SyntaxError("variable " + v.text + " is already bound", v.line, v.col);
      }
      for (const auto& b : vars) {
        if (b == v.text) throw SyntaxError("variable " + v.text + " is already bound", v.line, v.col);
      }
      vars.push_back(v.text);
    } while (accept(Tok::Comma));
    expect(Tok::Colon);
    bound_.insert(bound_.end(), vars.begin(), vars.end());
    Formula body = rule();
    bound_.resize(bound_.size() - vars.size());
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = universal ? Formula::forall(*it, std::move(body)) : Formula::exists(*it, std::move(body));
    }
    return body;
  }

  Formula iff() {
    Formula lhs = implies();
    if (accept(Tok::DArrow)) return Formula::iff(std::move(lhs), iff_rhs());
    return lhs;
  }
  // Right operand of a binary connective may be a quantifier (it extends to
  // the end), mirroring how quantified bodies are printed.
  Formula iff_rhs() { return starts_quant() ? quantified() : iff(); }

  Formula implies() {
    Formula lhs = disj();
    if (accept(Tok::Arrow)) {
      return Formula::implies(std::move(lhs), starts_quant() ? quantified() : implies());
    }
    return lhs;
  }

  Formula disj() {
    Formula lhs = conj();
    while (accept(Tok::Bar)) lhs = Formula::disj(std::move(lhs), conj());
    return lhs;
  }

  Formula conj() {
    Formula lhs = unary();
    while (accept(Tok::Amp)) lhs = Formula::conj(std::move(lhs), unary());
    return lhs;
  }

  Formula unary() {
    if (accept(Tok::Bang)) return Formula::negate(unary());
    if (accept(Tok::LParen)) {
      Formula f = rule();
      expect(Tok::RParen);
      return f;
    }
    if (starts_quant()) return quantified();
    return atom();
  }

  bool starts_quant() const { return peek().kind == Tok::Forall || peek().kind == Tok::Exists; }

  Formula atom() {
    const Token& name = peek();
    if (name.kind != Tok::Ident) {
      fail("expected a formula, found " + std::string(describe(name.kind)));
    }
    next();
    Atom a{name.text, {}};
    if (accept(Tok::LParen)) {
      do {
        const Token& arg = expect(Tok::Ident);
        const bool is_var = std::find(bound_.begin(), bound_.end(), arg.text) != bound_.end();
        a.args.push_back(is_var ? Term::variable(arg.text) : Term::constant(arg.text));
      } while (accept(Tok::Comma));
      expect(Tok::RParen);
    }
    auto [it, inserted] = sig_.emplace(a.predicate, a.args.size());
    if (!inserted && it->second != a.args.size()) {
      throw ArityError(std::to_string(name.line) + ":" + std::to_string(name.col) + ": predicate " +
                       a.predicate + " used with arity " + std::to_string(a.args.size()) +
                       ", previously " + std::to_string(it->second));
    }
    return Formula::atom(std::move(a));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature& sig_;
  std::vector<std::string> bound_;
};

}  // namespace

Formula parse_rule(std::string_view text, Signature& signature, std::size_t line) {
  auto toks = lex(text, line);
  if (toks.size() == 1) throw SyntaxError("empty rule", toks[0].line, toks[0].col);
  Signature scratch = signature;
  Parser p(std::move(toks), scratch);
  Formula f = p.parse_top();
  signature = std::move(scratch);
  return f;
}

Formula parse_rule(std::string_view text) {
  Signature sig;
  return parse_rule(text, sig);
}

KnowledgeBase parse_kb(std::string_view text) {
  KnowledgeBase kb;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      kb.rules.push_back(parse_rule(line, kb.signature, line_no));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return kb;
}

KnowledgeBase load_kb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open KB file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_kb(ss.str());
}

}  // namespace rill::logic
