#pragma once

/**
 * @file parser.hpp
 * @brief Surface syntax for protocols and systems: lexer, parser and printer.
 *
 * @code
 * global BS = B -> S : <title>. S -> B : <price>. end;
 * system {
 *   l1 : request a(x : role BS.S). x?(t). x!<150>. 0;
 *   l2 : accept a(y : role BS.B). y!<'Logicomix'>. y?(p). 0;
 * }
 * @endcode
 */

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rchor/configuration.hpp"
#include "rchor/projection.hpp"

namespace rchor {

struct ServiceDecl {
  std::string loc;
  ServiceKind kind;
  std::string shared;
  std::string var;
  std::string protocol;
  Participant role;
  Process body;
};

struct SourceUnit {
  std::vector<std::pair<std::string, GlobalType>> globals;
  std::vector<ServiceDecl> services;
  bool has_system = false;

  const GlobalType* find_global(const std::string& name) const {
    for (const auto& [n, g] : globals)
      if (n == name) return &g;
    return nullptr;
  }
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, String, Symbol, End };
  Kind kind;
  std::string text;
  int line, col;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::SyntaxError, std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Token::Kind::Ident, src.substr(i, j - i), line, col});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::Number, src.substr(i, j - i), line, col});
      advance(j - i);
    } else if (c == '\'' || c == '"') {
      int l0 = line, c0 = col;
      std::string text;
      advance(1);
      while (i < src.size() && src[i] != c) {
        if (src[i] == '\\' && i + 1 < src.size()) advance(1);
        text += src[i];
        advance(1);
      }
      if (i >= src.size()) fail("unterminated string literal");
      advance(1);
      out.push_back({Token::Kind::String, text, l0, c0});
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Token::Kind::Symbol, "->", line, col});
      advance(2);
    } else if (std::string("{}()<>[].,:;!?+&|=*\\").find(c) != std::string::npos) {
      out.push_back({Token::Kind::Symbol, std::string(1, c), line, col});
      advance(1);
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"global", "system", "request", "accept", "role",
                                       "end",    "rec",    "new",     "true",   "false"};
  return k;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  SourceUnit unit() {
    SourceUnit u;
    while (!at_end()) {
      if (accept_word("global")) {
        auto name = ident();
        expect("=");
        auto g = gtype();
        expect(";");
        if (u.find_global(name)) fail("global type '" + name + "' declared twice");
        u.globals.emplace_back(name, g);
      } else if (accept_word("system")) {
        if (u.has_system) fail("more than one system declared");
        u.has_system = true;
        expect("{");
        while (!accept("}")) {
          u.services.push_back(service());
          expect(";");
        }
      } else {
        fail("expected 'global' or 'system'");
      }
    }
    return u;
  }

  GlobalType gtype_only() {
    auto g = gtype();
    if (!at_end()) fail("trailing input after global type");
    return g;
  }

  LocalType ltype_only() {
    auto t = ltype();
    if (!at_end()) fail("trailing input after local type");
    return t;
  }

  Process process_only() {
    auto p = process();
    if (!at_end()) fail("trailing input after process");
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw Error(ErrorKind::SyntaxError, std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg +
                                            (t.kind == Token::Kind::End ? " at end of input" : " near '" + t.text + "'"));
  }

  bool is_sym(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Symbol && peek(k).text == s;
  }
  bool is_word(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Ident && peek(k).text == s;
  }
  bool accept(const std::string& s) {
    if (!is_sym(s)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(const std::string& s) {
    if (!is_word(s)) return false;
    ++pos_;
    return true;
  }
  void expect(const std::string& s) {
    if (!accept(s)) fail("expected '" + s + "'");
  }
  void expect_word(const std::string& s) {
    if (!accept_word(s)) fail("expected '" + s + "'");
  }
  std::string ident() {
    if (peek().kind != Token::Kind::Ident || keywords().count(peek().text)) fail("expected identifier");
    return toks_[pos_++].text;
  }
  bool bound(const std::string& x) const { return std::find(scope_.begin(), scope_.end(), x) != scope_.end(); }

  ServiceDecl service() {
    ServiceDecl d;
    d.loc = ident();
    expect(":");
    if (accept_word("request"))
      d.kind = ServiceKind::Request;
    else if (accept_word("accept"))
      d.kind = ServiceKind::Accept;
    else
      fail("expected 'request' or 'accept'");
    d.shared = ident();
    expect("(");
    d.var = ident();
    expect(":");
    expect_word("role");
    d.protocol = ident();
    expect(".");
    d.role = ident();
    expect(")");
    expect(".");
    scope_.push_back(d.var);
    d.body = process();
    scope_.pop_back();
    return d;
  }

  // ---------------------------------------------------------------- types

  ValueType vtype() {
    if (is_sym("{") && is_sym("{", 1)) {
      pos_ += 2;
      LocalType arg;
      if (!is_sym("}")) arg = ltype();
      expect("}");
      expect("}");
      return ValueType::arrow(arg);
    }
    return ValueType::base(ident());
  }

  GlobalType gtype() {
    if (accept("(")) {
      auto g = gtype();
      expect(")");
      return g;
    }
    if (accept_word("end")) return global::end();
    if (accept_word("rec")) {
      auto x = ident();
      expect(".");
      return global::rec(x, gtype());
    }
    auto p = ident();
    if (!accept("->")) return global::var(p);
    std::vector<Participant> targets;
    if (accept("{")) {
      do targets.push_back(ident());
      while (accept(","));
      expect("}");
    } else {
      targets.push_back(ident());
    }
    expect(":");
    if (accept("<")) {
      auto u = vtype();
      expect(">");
      expect(".");
      auto g = gtype();
      for (std::size_t i = targets.size(); i-- > 0;) g = global::exchange(p, targets[i], u, g);
      return g;
    }
    if (targets.size() != 1) fail("a choice has exactly one receiver");
    expect("{");
    Branches<GlobalType> bs;
    do {
      auto l = ident();
      expect(":");
      if (find_branch(bs, l)) fail("duplicate label '" + l + "'");
      bs.emplace_back(l, gtype());
    } while (accept(","));
    expect("}");
    return global::choice(p, targets[0], std::move(bs));
  }

  LocalType ltype() {
    if (accept("(")) {
      auto t = ltype();
      expect(")");
      return t;
    }
    if (accept_word("end")) return local::end();
    if (accept_word("rec")) {
      auto x = ident();
      expect(".");
      return local::rec(x, ltype());
    }
    auto q = ident();
    if (accept("!") || (is_sym("?") && (++pos_, true))) {
      bool send = toks_[pos_ - 1].text == "!";
      expect("<");
      auto u = vtype();
      expect(">");
      expect(".");
      auto t = ltype();
      return send ? local::send(q, u, t) : local::recv(q, u, t);
    }
    if (is_sym("+") || is_sym("&")) {
      bool sel = peek().text == "+";
      ++pos_;
      expect("{");
      Branches<LocalType> bs;
      do {
        auto l = ident();
        expect(":");
        if (find_branch(bs, l)) fail("duplicate label '" + l + "'");
        bs.emplace_back(l, ltype());
      } while (accept(","));
      expect("}");
      return sel ? local::select(q, std::move(bs)) : local::branch(q, std::move(bs));
    }
    return local::var(q);
  }

  // ------------------------------------------------------------ processes

  Name name_ref() {
    if (accept("*")) return Name::star();
    auto x = ident();
    if (accept("[")) {
      auto p = ident();
      expect("]");
      return Name::endpoint(x, p);
    }
    return bound(x) ? Name::var(x) : Name::shared(x);
  }

  Value value() {
    if (peek().kind == Token::Kind::Number) {
      auto t = toks_[pos_++].text;
      try {
        return val::nat(std::stoull(t));
      } catch (const std::exception&) {
        fail("number out of range");
      }
    }
    if (peek().kind == Token::Kind::String) return val::str(toks_[pos_++].text);
    if (accept_word("true")) return val::boolean(true);
    if (accept_word("false")) return val::boolean(false);
    if (is_sym("{") && is_sym("{", 1)) {
      pos_ += 2;
      auto body = process();
      expect("}");
      expect("}");
      return val::thunk(body);
    }
    if (is_sym("(") && is_sym("\\", 1)) {
      pos_ += 2;
      auto x = ident();
      expect(".");
      scope_.push_back(x);
      auto body = process();
      scope_.pop_back();
      expect(")");
      return val::abs(x, body);
    }
    return name_ref();
  }

  Branches<Process> proc_branches() {
    expect("{");
    Branches<Process> bs;
    do {
      auto l = ident();
      expect(":");
      if (find_branch(bs, l)) fail("duplicate label '" + l + "'");
      bs.emplace_back(l, process());
    } while (accept(","));
    expect("}");
    return bs;
  }

  Process process() {
    auto p = prefix();
    while (accept("|")) p = proc::par(p, prefix());
    return p;
  }

  Process prefix() {
    if (peek().kind == Token::Kind::Number && peek().text == "0") {
      ++pos_;
      return proc::nil();
    }
    if (accept_word("rec")) {
      auto x = ident();
      expect(".");
      return proc::rec(x, prefix());
    }
    if (accept_word("new")) {
      auto n = ident();
      expect(".");
      return proc::res(n, prefix());
    }
    if (is_sym("(") && !is_sym("\\", 1)) {
      ++pos_;
      auto p = process();
      expect(")");
      return p;
    }
    if ((is_sym("{") && is_sym("{", 1)) || is_sym("(")) {
      auto f = value();
      return application(f);
    }
    if (peek().kind != Token::Kind::Ident) fail("expected a process");

    bool chan_like = is_sym("!", 1) || is_sym("?", 1) || is_sym("[", 1) ||
                     ((is_sym("+", 1) || is_sym("&", 1)) && is_sym("{", 2));
    if (!chan_like) {
      if (is_sym("(", 1)) {
        auto f = value();
        return application(f);
      }
      return proc::var(ident());
    }
    auto u = name_ref();
    if (accept("!")) {
      expect("<");
      auto v = value();
      expect(">");
      expect(".");
      return proc::out(u, v, prefix());
    }
    if (accept("?")) {
      expect("(");
      auto y = ident();
      expect(")");
      expect(".");
      scope_.push_back(y);
      auto p = prefix();
      scope_.pop_back();
      return proc::in(u, y, p);
    }
    if (accept("+")) return proc::select(u, proc_branches());
    if (accept("&")) return proc::branch(u, proc_branches());
    if (is_sym("(")) return application(u);
    fail("expected '!', '?', '+' or '&' after channel");
  }

  Process application(const Value& f) {
    expect("(");
    auto a = name_ref();
    expect(")");
    return proc::app(f, a);
  }
};

}  // namespace detail

inline SourceUnit parse_source(const std::string& text) { return detail::Parser(text).unit(); }
inline GlobalType parse_global(const std::string& text) { return detail::Parser(text).gtype_only(); }
inline LocalType parse_local(const std::string& text) { return detail::Parser(text).ltype_only(); }
inline Process parse_process(const std::string& text) { return detail::Parser(text).process_only(); }

inline SourceUnit load_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_source(ss.str());
}

inline std::string to_string(const SourceUnit& u) {
  std::string out;
  for (const auto& [n, g] : u.globals) out += "global " + n + " = " + to_string(g) + ";\n";
  if (u.has_system) {
    out += "system {\n";
    for (const auto& s : u.services)
      out += "  " + s.loc + " : " + (s.kind == ServiceKind::Request ? "request " : "accept ") + s.shared + "(" +
             s.var + " : role " + s.protocol + "." + s.role + "). " + to_string(s.body) + ";\n";
    out += "}\n";
  }
  return out;
}

/// The initial configuration of a system: one located service per declaration.
inline Configuration initial_configuration(const SourceUnit& u) {
  if (!u.has_system) throw Error(ErrorKind::InvalidInput, "no system declared");
  std::map<std::string, int> requests;
  std::vector<Component> parts;
  std::set<std::string> locs;
  for (const auto& s : u.services) {
    const auto* g = u.find_global(s.protocol);
    if (!g) throw Error(ErrorKind::UnresolvedRole, "unknown global type '" + s.protocol + "'");
    if (!participants(*g).count(s.role))
      throw Error(ErrorKind::UnresolvedRole, "'" + s.role + "' is not a participant of " + s.protocol);
    if (!locs.insert(s.loc).second) throw Error(ErrorKind::InvalidInput, "location '" + s.loc + "' used twice");
    if (s.kind == ServiceKind::Request && ++requests[s.shared] > 1)
      throw Error(ErrorKind::InvalidInput, "more than one request on '" + s.shared + "'");
    parts.push_back(LocatedService{s.loc, s.kind, s.shared, s.var, project(*g, s.role), s.protocol, *g, s.role, s.body});
  }
  return Configuration({}, std::move(parts));
}

}  // namespace rchor
