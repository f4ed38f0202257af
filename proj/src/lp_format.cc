#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "flexplan/io.h"

namespace flexplan {
namespace {

constexpr std::size_t kLineWidth = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Num(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string_view SenseText(Sense s) {
  switch (s) {
    case Sense::kEqual: return "=";
    case Sense::kGreaterEqual: return ">=";
    case Sense::kLessEqual: return "<=";
  }
  return "=";
}

// Accumulates " + 2 x - 3 y" pieces and breaks lines before kLineWidth.
class LineBuilder {
 public:
  explicit LineBuilder(std::string head) : line_(std::move(head)) {}

  void Add(const std::string& piece) {
    if (line_.size() + piece.size() + 1 > kLineWidth) {
      out_ += line_ + "\n";
      line_ = "  ";
    } else {
      line_ += ' ';
    }
    line_ += piece;
  }
  void Term(double coef, const std::string& name, bool first) {
    std::string piece;
    if (coef < 0) {
      piece = "- ";
    } else if (!first) {
      piece = "+ ";
    }
    piece += Num(std::fabs(coef)) + " " + name;
    Add(piece);
  }
  std::string Finish() { return out_ + line_ + "\n"; }

 private:
  std::string out_;
  std::string line_;
};

}  // namespace

std::string FormatLp(const ModelInstance& model) {
  std::set<VariableRef> referenced;
  std::string out = "Minimize\n";
  if (!model.objective().terms.empty() || model.objective().constant != 0.0) {
    LineBuilder line(" obj:");
    bool first = true;
    for (const ObjectiveTerm& t : model.objective().terms) {
      line.Term(t.coef, VariableName(t.var), first);
      referenced.insert(t.var);
      first = false;
    }
    const double constant = model.objective().constant;
    if (constant != 0.0 || first) {
      line.Add((constant < 0 ? "- " : first ? "" : "+ ") +
               Num(std::fabs(constant)));
    }
    out += line.Finish();
  }
  out += "Subject To\n";
  for (const LinearConstraint& c : model.constraints()) {
    LineBuilder line(" " + ToString(c.name) + ":");
    bool first = true;
    for (const flexplan::Term& t : c.terms) {
      line.Term(t.coef.ToDouble(), VariableName(t.var), first);
      referenced.insert(t.var);
      first = false;
    }
    if (first) line.Add("0");
    line.Add(std::string(SenseText(c.sense)) + " " + Num(c.rhs.ToDouble()));
    out += line.Finish();
  }
  out += "Bounds\n";
  std::vector<std::string> general;
  for (const Variable& v : model.variables()) {
    const std::string name = VariableName(v.ref);
    const bool lower_default = v.lower == 0.0;
    const bool upper_inf = v.upper == kInf;
    if (v.integer) general.push_back(name);
    if (std::isinf(v.lower) && v.lower < 0 && upper_inf) {
      out += " " + name + " free\n";
    } else if (upper_inf) {
      if (!lower_default || !referenced.contains(v.ref)) {
        out += " " + name + " >= " + Num(v.lower) + "\n";
      }
    } else {
      out += " " + Num(v.lower) + " <= " + name + " <= " + Num(v.upper) + "\n";
    }
  }
  if (!general.empty()) {
    out += "General\n";
    for (const std::string& name : general) out += " " + name + "\n";
  }
  out += "End\n";
  return out;
}

void WriteLp(const ModelInstance& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << FormatLp(model);
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

enum class TokenType { kIdent, kNumber, kSign, kSense, kColon, kEnd };

struct Token {
  TokenType type = TokenType::kEnd;
  std::string text;
  int line = 0;
  int column = 0;
  bool line_start = false;
};

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Lexer {
 public:
  Lexer(std::string_view text, std::string source)
      : text_(text), source_(std::move(source)) {}

  std::vector<Token> Run() {
    std::vector<Token> tokens;
    bool line_start = true;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
        line_start = true;
        continue;
      }
      if (c == '\\') {
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
        continue;
      }
      Token t;
      t.line = line_;
      t.column = column_;
      t.line_start = line_start;
      line_start = false;
      if (IsIdentStart(c)) {
        t.type = TokenType::kIdent;
        while (pos_ < text_.size() && IsIdentChar(text_[pos_])) {
          t.text.push_back(text_[pos_]);
          Advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        t.type = TokenType::kNumber;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '.')) {
          t.text.push_back(text_[pos_]);
          Advance();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
          t.text.push_back(text_[pos_]);
          Advance();
          if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
            t.text.push_back(text_[pos_]);
            Advance();
          }
          while (pos_ < text_.size() &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            t.text.push_back(text_[pos_]);
            Advance();
          }
        }
      } else if (c == '+' || c == '-') {
        t.type = TokenType::kSign;
        t.text = c;
        Advance();
      } else if (c == ':') {
        t.type = TokenType::kColon;
        t.text = ":";
        Advance();
      } else if (c == '<' || c == '>' || c == '=') {
        t.type = TokenType::kSense;
        t.text = c;
        Advance();
        if (pos_ < text_.size() &&
            (text_[pos_] == '=' || text_[pos_] == '<' || text_[pos_] == '>')) {
          t.text.push_back(text_[pos_]);
          Advance();
        }
      } else {
        throw ParseError(source_, line_, column_,
                         std::string("unexpected character '") + c + "'");
      }
      tokens.push_back(std::move(t));
    }
    Token end;
    end.line = line_;
    end.column = column_;
    end.line_start = true;
    tokens.push_back(end);
    return tokens;
  }

 private:
  void Advance() {
    ++pos_;
    ++column_;
  }

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

enum class Section { kNone, kObjective, kConstraints, kBounds, kGeneral, kBinary, kEnd };

struct VarData {
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string source)
      : tokens_(std::move(tokens)), source_(std::move(source)) {}

  ModelInstance Run() {
    Section section = Section::kNone;
    while (Peek().type != TokenType::kEnd) {
      const Token& header = Peek();
      if (auto next = SectionHeader()) {
        if (section == Section::kNone && *next != Section::kObjective) {
          Fail(header, "expected Minimize");
        }
        const bool integer_lists = (*next == Section::kGeneral || *next == Section::kBinary) &&
                                   (section == Section::kGeneral || section == Section::kBinary);
        if (*next <= section && !integer_lists) Fail(header, "section out of order");
        section = *next;
        if (section == Section::kEnd) break;
        continue;
      }
      switch (section) {
        case Section::kNone:
          Fail(Peek(), "expected Minimize");
          break;
        case Section::kObjective: ParseObjective(); break;
        case Section::kConstraints: ParseConstraint(); break;
        case Section::kBounds: ParseBound(); break;
        case Section::kGeneral:
        case Section::kBinary: {
          const Token& t = Expect(TokenType::kIdent, "variable name");
          VarData& v = Var(t);
          v.integer = true;
          if (section == Section::kBinary) {
            v.lower = 0.0;
            v.upper = 1.0;
          }
          break;
        }
        case Section::kEnd: break;
      }
    }
    if (section != Section::kEnd) Fail(Peek(), "missing End");
    return Build();
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& Next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  [[noreturn]] void Fail(const Token& t, const std::string& what) const {
    throw ParseError(source_, t.line, t.column,
                     what + (t.type == TokenType::kEnd
                                 ? std::string(" at end of input")
                                 : " near '" + t.text + "'"));
  }
  const Token& Expect(TokenType type, const std::string& what) {
    if (Peek().type != type) Fail(Peek(), "expected " + what);
    return Next();
  }

  std::optional<Section> SectionHeader() {
    const Token& t = Peek();
    if (!t.line_start || t.type != TokenType::kIdent) return std::nullopt;
    const std::string w = Lower(t.text);
    // A label such as "st:" is a row name, not a header.
    if (Peek(1).type == TokenType::kColon) return std::nullopt;
    if (w == "minimize" || w == "minimise" || w == "minimum" || w == "min") {
      Next();
      return Section::kObjective;
    }
    if (w == "subject" && Lower(Peek(1).text) == "to") {
      Next();
      Next();
      return Section::kConstraints;
    }
    if (w == "such" && Lower(Peek(1).text) == "that") {
      Next();
      Next();
      return Section::kConstraints;
    }
    if (w == "st" || w == "s.t.") {
      Next();
      return Section::kConstraints;
    }
    if (w == "bounds" || w == "bound") {
      Next();
      return Section::kBounds;
    }
    if (w == "general" || w == "generals" || w == "gen") {
      Next();
      return Section::kGeneral;
    }
    if (w == "binaries" || w == "binary" || w == "bin") {
      Next();
      return Section::kBinary;
    }
    if (w == "end") {
      Next();
      return Section::kEnd;
    }
    if (w == "maximize" || w == "maximise" || w == "max") {
      Fail(t, "maximization is not supported");
    }
    return std::nullopt;
  }

  VariableRef Ref(const Token& t) {
    auto it = refs_.find(t.text);
    if (it != refs_.end()) return it->second;
    try {
      VariableRef ref = ParseVariableName(t.text);
      refs_.emplace(t.text, ref);
      if (!vars_.contains(ref)) order_.push_back(ref);
      vars_.try_emplace(ref);
      return ref;
    } catch (const ModelError& e) {
      Fail(t, e.what());
    }
  }
  VarData& Var(const Token& t) { return vars_.at(Ref(t)); }

  double NumberValue(const Token& t) {
    if (t.type == TokenType::kIdent) {
      const std::string w = Lower(t.text);
      if (w == "inf" || w == "infinity") return kInf;
      Fail(t, "expected a number");
    }
    if (t.type != TokenType::kNumber) Fail(t, "expected a number");
    char* end = nullptr;
    const double v = std::strtod(t.text.c_str(), &end);
    if (end != t.text.c_str() + t.text.size()) Fail(t, "malformed number");
    return v;
  }

  // Optional sign followed by a number (or inf).
  double SignedNumber() {
    double sign = 1.0;
    while (Peek().type == TokenType::kSign) {
      if (Next().text == "-") sign = -sign;
    }
    return sign * NumberValue(Next());
  }

  bool AtRowStart() const {
    const Token& t = Peek();
    return t.type == TokenType::kEnd ||
           (t.line_start && t.type == TokenType::kIdent &&
            Peek(1).type == TokenType::kColon);
  }

  // Linear expression up to (not including) a sense token or the next row.
  // Returns the constant part.
  double Expression(std::vector<std::pair<Token, double>>& terms,
                    bool stop_at_row_start) {
    double constant = 0.0;
    bool first = true;
    while (true) {
      const Token& t = Peek();
      if (t.type == TokenType::kSense || t.type == TokenType::kEnd) break;
      if (stop_at_row_start && AtRowStart()) break;
      if (SectionStart()) break;
      double sign = 1.0;
      bool saw_sign = false;
      while (Peek().type == TokenType::kSign) {
        saw_sign = true;
        if (Next().text == "-") sign = -sign;
      }
      if (!first && !saw_sign) Fail(Peek(), "expected '+' or '-'");
      double coef = 1.0;
      bool has_coef = false;
      if (Peek().type == TokenType::kNumber) {
        coef = NumberValue(Next());
        has_coef = true;
      }
      if (Peek().type == TokenType::kIdent && !SectionStart()) {
        terms.emplace_back(Next(), sign * coef);
      } else if (has_coef) {
        constant += sign * coef;
      } else {
        Fail(Peek(), "expected a term");
      }
      first = false;
    }
    return constant;
  }

  bool SectionStart() {
    const Token& t = Peek();
    if (!t.line_start || t.type != TokenType::kIdent) return false;
    if (Peek(1).type == TokenType::kColon) return false;
    const std::string w = Lower(t.text);
    static const std::set<std::string> kWords = {
        "minimize", "minimise", "minimum", "min",     "subject", "such",
        "st",       "s.t.",     "bounds",  "bound",   "general", "generals",
        "gen",      "binaries", "binary",  "bin",     "end",     "maximize",
        "maximise", "max"};
    return kWords.contains(w);
  }

  void ParseObjective() {
    if (Peek().type == TokenType::kIdent && Peek(1).type == TokenType::kColon) {
      Next();
      Next();
    }
    std::vector<std::pair<Token, double>> terms;
    objective_.constant += Expression(terms, false);
    for (const auto& [tok, coef] : terms) {
      objective_.terms.push_back({Ref(tok), coef});
    }
  }

  void ParseConstraint() {
    LinearConstraint c;
    const Token& start = Peek();
    if (Peek().type == TokenType::kIdent && Peek(1).type == TokenType::kColon) {
      const Token& label = Next();
      Next();
      try {
        c.name = ParseConstraintName(label.text);
      } catch (const ModelError& e) {
        Fail(label, e.what());
      }
    } else {
      Fail(start, "constraint needs a name");
    }
    std::vector<std::pair<Token, double>> terms;
    const double constant = Expression(terms, true);
    const Token& sense_token = Peek();
    if (sense_token.type != TokenType::kSense) Fail(sense_token, "expected a sense");
    Next();
    const std::string s = sense_token.text;
    if (s == "<=" || s == "=<" || s == "<") {
      c.sense = Sense::kLessEqual;
    } else if (s == ">=" || s == "=>" || s == ">") {
      c.sense = Sense::kGreaterEqual;
    } else if (s == "=" || s == "==") {
      c.sense = Sense::kEqual;
    } else {
      Fail(sense_token, "unknown sense");
    }
    const Token& rhs_token = Peek();
    const double rhs = SignedNumber() - constant;
    if (!std::isfinite(rhs)) Fail(rhs_token, "right-hand side must be finite");
    try {
      c.rhs = Rational::FromDouble(rhs);
      std::map<VariableRef, Rational> merged;
      std::vector<VariableRef> order;
      for (const auto& [tok, coef] : terms) {
        const VariableRef ref = Ref(tok);
        auto [it, inserted] = merged.try_emplace(ref, Rational(0));
        if (inserted) order.push_back(ref);
        it->second += Rational::FromDouble(coef);
      }
      for (const VariableRef& ref : order) {
        if (!merged.at(ref).IsZero()) c.terms.push_back({ref, merged.at(ref)});
      }
    } catch (const std::overflow_error& e) {
      Fail(rhs_token, e.what());
    }
    model_constraints_.push_back(std::move(c));
  }

  void ParseBound() {
    const Token& first = Peek();
    // "x free", "x >= l", "x <= u", "x = v"
    if (first.type == TokenType::kIdent &&
        !(Lower(first.text) == "inf" || Lower(first.text) == "infinity")) {
      const Token& name = Next();
      VarData& v = Var(name);
      if (Peek().type == TokenType::kIdent && Lower(Peek().text) == "free") {
        Next();
        v.lower = -kInf;
        v.upper = kInf;
        return;
      }
      const Token& sense = Expect(TokenType::kSense, "a bound sense");
      const double value = SignedNumber();
      if (sense.text == ">=" || sense.text == "=>" || sense.text == ">") {
        v.lower = value;
      } else if (sense.text == "<=" || sense.text == "=<" || sense.text == "<") {
        v.upper = value;
      } else {
        v.lower = value;
        v.upper = value;
      }
      return;
    }
    // "l <= x" or "l <= x <= u"
    const double lower = SignedNumber();
    const Token& s1 = Expect(TokenType::kSense, "a bound sense");
    if (s1.text != "<=" && s1.text != "=<" && s1.text != "<") {
      Fail(s1, "expected '<='");
    }
    const Token& name = Expect(TokenType::kIdent, "variable name");
    VarData& v = Var(name);
    v.lower = lower;
    if (Peek().type == TokenType::kSense) {
      const Token& s2 = Next();
      if (s2.text != "<=" && s2.text != "=<" && s2.text != "<") {
        Fail(s2, "expected '<='");
      }
      v.upper = SignedNumber();
    }
  }

  ModelInstance Build() {
    ModelInstance model;
    for (const VariableRef& ref : order_) {
      const VarData& d = vars_.at(ref);
      model.AddVariable({ref, d.lower, d.upper, d.integer});
    }
    for (LinearConstraint& c : model_constraints_) model.AddConstraint(std::move(c));
    model.SetObjective(objective_);
    model.SortVariables();
    try {
      model.CheckConsistency();
    } catch (const ModelError& e) {
      throw ParseError(source_, 0, 0, e.what());
    }
    return model;
  }

  std::vector<Token> tokens_;
  std::string source_;
  std::size_t pos_ = 0;
  std::map<std::string, VariableRef> refs_;
  std::map<VariableRef, VarData> vars_;
  std::vector<VariableRef> order_;
  std::vector<LinearConstraint> model_constraints_;
  Objective objective_;
};

}  // namespace

ModelInstance ParseLp(std::string_view text, std::string_view source) {
  std::string src(source);
  return Parser(Lexer(text, src).Run(), src).Run();
}

ModelInstance ReadLp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseLp(buffer.str(), path.filename().string());
}

}  // namespace flexplan
