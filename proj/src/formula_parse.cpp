#include <cctype>

#include "bilab/errors.hpp"
#include "bilab/formula.hpp"

namespace bilab {

namespace {

std::string parse_message(std::size_t line, std::size_t column, const std::set<std::string>& expected,
                          const std::string& found) {
  std::string msg = "parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": expected ";
  bool first = true;
  for (const auto& e : expected) {
    if (!first) msg += " | ";
    msg += e;
    first = false;
  }
  return msg + ", found " + found;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::set<std::string> expected,
                       const std::string& found)
    : Error(parse_message(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

}  // namespace bilab

namespace bilab::fo {

namespace {

enum class Tok {
  Ident,
  Param,
  One,
  LParen,
  RParen,
  Star,
  Caret,
  MinusOne,
  Equals,
  Comma,
  Colon,
  Dot,
  Exists,
  Forall,
  Or,
  And,
  Not,
  In,
  End,
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Param: return "parameter";
    case Tok::One: return "'1'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Star: return "'*'";
    case Tok::Caret: return "'^'";
    case Tok::MinusOne: return "'-1'";
    case Tok::Equals: return "'='";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Exists: return "'exists'";
    case Tok::Forall: return "'forall'";
    case Tok::Or: return "'or'";
    case Tok::And: return "'and'";
    case Tok::Not: return "'not'";
    case Tok::In: return "'in'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    std::size_t l = line, cl = col;
    auto single = [&](Tok t) {
      out.push_back({t, std::string(1, c), l, cl});
      advance(1);
    };
    switch (c) {
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '*': single(Tok::Star); continue;
      case '^': single(Tok::Caret); continue;
      case '=': single(Tok::Equals); continue;
      case ',': single(Tok::Comma); continue;
      case ':': single(Tok::Colon); continue;
      case '.': single(Tok::Dot); continue;
      default: break;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '1' && !(i + 2 < s.size() && ident_char(s[i + 2]))) {
      out.push_back({Tok::MinusOne, "-1", l, cl});
      advance(2);
      continue;
    }
    if (c == '1' && !(i + 1 < s.size() && ident_char(s[i + 1]))) {
      single(Tok::One);
      continue;
    }
    if (c == '$' && i + 1 < s.size() && ident_start(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::Param, std::string(s.substr(i + 1, j - i - 1)), l, cl});
      advance(j - i);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word(s.substr(i, j - i));
      Tok kind = Tok::Ident;
      if (word == "exists") kind = Tok::Exists;
      else if (word == "forall") kind = Tok::Forall;
      else if (word == "or") kind = Tok::Or;
      else if (word == "and") kind = Tok::And;
      else if (word == "not") kind = Tok::Not;
      else if (word == "in") kind = Tok::In;
      out.push_back({kind, word, l, cl});
      advance(j - i);
      continue;
    }
    throw ParseError(l, cl, {"token"}, "'" + std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula whole_formula() {
    Formula f = formula();
    expect(Tok::End);
    return f;
  }

  Term whole_term() {
    Term t = term();
    expect(Tok::End);
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw Failure{pos_, ParseError(t.line, t.column, std::move(expected), found)};
  }

  Token expect(Tok k) {
    if (!at(k)) fail({tok_name(k)});
    return toks_[pos_++];
  }

  Formula formula() {
    if (at(Tok::Exists) || at(Tok::Forall)) {
      bool ex = at(Tok::Exists);
      ++pos_;
      std::vector<Binder> bs;
      do {
        if (!bs.empty()) ++pos_;
        std::string v = expect(Tok::Ident).text;
        expect(Tok::Colon);
        std::string s = expect(Tok::Ident).text;
        bs.push_back({v, s});
      } while (at(Tok::Comma));
      if (!at(Tok::Dot)) fail({"','", "'.'"});
      ++pos_;
      Formula body = formula();
      return ex ? Formula::exists(std::move(bs), std::move(body)) : Formula::forall(std::move(bs), std::move(body));
    }
    return disj();
  }

  Formula disj() {
    std::vector<Formula> parts{conj()};
    while (at(Tok::Or)) {
      ++pos_;
      parts.push_back(conj());
    }
    return Formula::disjunction(std::move(parts));
  }

  Formula conj() {
    std::vector<Formula> parts{lit()};
    while (at(Tok::And)) {
      ++pos_;
      parts.push_back(lit());
    }
    return Formula::conjunction(std::move(parts));
  }

  Formula lit() {
    if (at(Tok::Not)) {
      ++pos_;
      return Formula::negation(lit());
    }
    if (at(Tok::LParen)) {
      std::size_t start = pos_;
      try {
        return atom();
      } catch (Failure& as_atom) {
        pos_ = start + 1;
        try {
          Formula f = formula();
          expect(Tok::RParen);
          return f;
        } catch (Failure& as_formula) {
          if (as_atom.pos > as_formula.pos) throw as_atom;
          throw;
        }
      }
    }
    if (at(Tok::Ident) || at(Tok::Param) || at(Tok::One)) return atom();
    fail({"'not'", "'('", "identifier", "parameter", "'1'", "'exists'", "'forall'"});
  }

  Formula atom() {
    Term l = term();
    if (at(Tok::Equals)) {
      ++pos_;
      return Formula::eq(std::move(l), term());
    }
    if (at(Tok::In)) {
      ++pos_;
      return Formula::in_sort(std::move(l), expect(Tok::Ident).text);
    }
    fail({"'='", "'in'", "'*'", "'^'"});
  }

  Term term() {
    Term t = factor();
    while (at(Tok::Star)) {
      ++pos_;
      t = Term::product(std::move(t), factor());
    }
    return t;
  }

  Term factor() {
    Term t = base();
    while (at(Tok::Caret)) {
      ++pos_;
      if (at(Tok::MinusOne)) {
        ++pos_;
        t = Term::inverse(std::move(t));
      } else {
        t = Term::conj(std::move(t), base());
      }
    }
    return t;
  }

  Term base() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        ++pos_;
        return Term::var(t.text);
      case Tok::Param:
        ++pos_;
        return Term::param(t.text);
      case Tok::One:
        ++pos_;
        return Term::one();
      case Tok::LParen: {
        ++pos_;
        Term inner = term();
        expect(Tok::RParen);
        return inner;
      }
      default:
        fail({"identifier", "parameter", "'1'", "'('"});
    }
  }

 public:
  struct Failure {
    std::size_t pos;
    ParseError error;
  };

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text) {
  Parser p(lex(text));
  try {
    return p.whole_formula();
  } catch (Parser::Failure& f) {
    throw f.error;
  }
}

Term parse_term(std::string_view text) {
  Parser p(lex(text));
  try {
    return p.whole_term();
  } catch (Parser::Failure& f) {
    throw f.error;
  }
}

}  // namespace bilab::fo
