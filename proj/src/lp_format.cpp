#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "biloc/error.hpp"
#include "biloc/milp.hpp"
#include "format.hpp"

namespace biloc {

namespace {

constexpr std::size_t kWrapColumn = 200;

class LineWriter {
 public:
  explicit LineWriter(std::string& out) : out_(out) {}

  void start(std::string_view head) {
    line_.assign(head);
    fresh_ = true;
  }
  void term(double coefficient, const std::string& name) {
    std::string t;
    const double mag = std::abs(coefficient);
    if (fresh_) {
      if (coefficient < 0) t += "- ";
    } else {
      t += coefficient < 0 ? " - " : " + ";
    }
    if (mag != 1.0) {
      t += detail::format_number(mag);
      t += ' ';
    }
    t += name;
    if (!fresh_ && line_.size() + t.size() > kWrapColumn) {
      out_ += line_;
      out_ += '\n';
      line_ = "  ";
      line_ += t.substr(1);
    } else {
      if (fresh_) line_ += ' ';
      line_ += t;
    }
    fresh_ = false;
  }
  void tail(std::string_view text) { line_ += text; }
  void finish() {
    out_ += line_;
    out_ += '\n';
    line_.clear();
  }

 private:
  std::string& out_;
  std::string line_;
  bool fresh_ = true;
};

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::le:
      return "<=";
    case Sense::ge:
      return ">=";
    case Sense::eq:
      return "=";
  }
  return "=";
}

std::string bound_text(double v) {
  if (v == kInfinity) return "inf";
  if (v == -kInfinity) return "-inf";
  return detail::format_number(v);
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  std::string out;
  out += "\\ biloc model\n";
  out += "Maximize\n";
  LineWriter w(out);
  w.start(" obj:");
  bool any = false;
  for (int v = 0; v < model.variable_count(); ++v) {
    const double c = model.objective_coefficient(v);
    if (c == 0.0) continue;
    w.term(c, model.variables()[v].name);
    any = true;
  }
  if (!any && !model.empty()) w.tail(" 0 " + model.variables().front().name);
  w.finish();

  out += "Subject To\n";
  for (std::size_t r = 0; r < model.constraints().size(); ++r) {
    const auto& c = model.constraints()[r];
    const std::string name = c.name.empty() ? "c" + std::to_string(r + 1) : c.name;
    w.start(" " + name + ":");
    for (const auto& [v, a] : c.terms) {
      if (a != 0.0) w.term(a, model.variables()[v].name);
    }
    w.tail(std::string(" ") + sense_text(c.sense) + " " + detail::format_number(c.rhs));
    w.finish();
  }

  out += "Bounds\n";
  for (const auto& v : model.variables()) {
    out += ' ';
    if (v.lower == -kInfinity && v.upper == kInfinity) {
      out += v.name + " free";
    } else if (v.upper == kInfinity) {
      out += v.name + " >= " + bound_text(v.lower);
    } else {
      out += bound_text(v.lower) + " <= " + v.name + " <= " + bound_text(v.upper);
    }
    out += '\n';
  }

  bool has_binary = false;
  for (const auto& v : model.variables()) has_binary = has_binary || v.kind == VarKind::binary;
  if (has_binary) {
    out += "Binaries\n";
    LineWriter b(out);
    b.start("");
    std::size_t width = 0;
    for (const auto& v : model.variables()) {
      if (v.kind != VarKind::binary) continue;
      if (width > 0 && width + v.name.size() + 1 > kWrapColumn) {
        b.finish();
        b.start("");
        width = 0;
      }
      b.tail(" " + v.name);
      width += v.name.size() + 1;
    }
    b.finish();
  }
  out += "End\n";
  return out;
}

namespace {

enum class Section { none, objective, constraints, bounds, binaries, generals, end };

struct Token {
  enum Kind { ident, number, op, colon } kind;
  std::string text;
  double value = 0.0;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& message) {
  throw ParseError("lp line " + std::to_string(line) + ": " + message);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<Section> section_of(std::string_view trimmed) {
  const std::string s = lower(trimmed);
  if (s == "maximize" || s == "maximise" || s == "maximum" || s == "max") return Section::objective;
  if (s == "minimize" || s == "minimise" || s == "minimum" || s == "min") return Section::objective;
  if (s == "subject to" || s == "such that" || s == "st" || s == "s.t.") return Section::constraints;
  if (s == "bounds" || s == "bound") return Section::bounds;
  if (s == "binaries" || s == "binary" || s == "bin") return Section::binaries;
  if (s == "generals" || s == "general" || s == "gen") return Section::generals;
  if (s == "end") return Section::end;
  return std::nullopt;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']' || c == '#' ||
         c == '$' || c == '%' || c == '&' || c == '(' || c == ')' || c == ',' || c == ';' || c == '?' || c == '@' ||
         c == '\'' || c == '{' || c == '}' || c == '~' || c == '!' || c == '"';
}

std::optional<double> special_number(const std::string& s) {
  const std::string l = lower(s);
  if (l == "inf" || l == "infinity") return kInfinity;
  return std::nullopt;
}

void tokenize(std::string_view text, int line, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == ':') {
      out.push_back({Token::colon, ":", 0.0, line});
      ++i;
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      ++i;
      if (i < text.size() && (text[i] == '=' || text[i] == '<' || text[i] == '>')) op += text[i++];
      if (op == "=<") op = "<=";
      if (op == "=>") op = ">=";
      if (op == "<") op = "<=";
      if (op == ">") op = ">=";
      if (op != "<=" && op != ">=" && op != "=") fail(line, "unknown operator '" + op + "'");
      out.push_back({Token::op, op, 0.0, line});
      continue;
    }
    if (c == '+' || c == '-') {
      out.push_back({Token::op, std::string(1, c), 0.0, line});
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [end, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
      if (ec != std::errc()) fail(line, "malformed number");
      const std::size_t len = static_cast<std::size_t>(end - (text.data() + i));
      out.push_back({Token::number, std::string(text.substr(i, len)), v, line});
      i += len;
      continue;
    }
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (auto v = special_number(word)) {
        out.push_back({Token::number, word, *v, line});
      } else {
        out.push_back({Token::ident, word, 0.0, line});
      }
      i = j;
      continue;
    }
    fail(line, std::string("unexpected character '") + c + "'");
  }
}

// Parses "r_i3", "y_n0_m1_p2" and similar canonical names.
bool match_indices(std::string_view name, std::string_view head, std::string_view letters, std::array<int, 4>& idx) {
  if (name.substr(0, head.size()) != head) return false;
  std::size_t pos = head.size();
  for (std::size_t k = 0; k < letters.size(); ++k) {
    if (pos >= name.size() || name[pos] != '_') return false;
    ++pos;
    if (pos >= name.size() || name[pos] != letters[k]) return false;
    ++pos;
    int v = 0;
    auto [end, ec] = std::from_chars(name.data() + pos, name.data() + name.size(), v);
    if (ec != std::errc() || end == name.data() + pos || v < 0) return false;
    const std::size_t len = static_cast<std::size_t>(end - (name.data() + pos));
    if (len > 1 && name[pos] == '0') return false;
    pos += len;
    idx[k] = v;
  }
  return pos == name.size();
}

void infer_role(Variable& v) {
  std::array<int, 4> idx{-1, -1, -1, -1};
  if (match_indices(v.name, "r", "i", idx)) {
    v.role = VarRole::open;
  } else if (match_indices(v.name, "y", "nmp", idx)) {
    v.role = VarRole::price;
  } else if (match_indices(v.name, "z", "nkm", idx)) {
    v.role = VarRole::service;
  } else if (match_indices(v.name, "w", "ijm", idx)) {
    v.role = VarRole::assign;
  } else if (match_indices(v.name, "pi", "nkmp", idx)) {
    v.role = VarRole::offer_product;
  } else if (match_indices(v.name, "nu", "ijmp", idx)) {
    v.role = VarRole::cost_product;
  } else {
    v.role = VarRole::other;
    idx = {-1, -1, -1, -1};
  }
  v.index = idx;
}

RowFamily infer_family(const std::string& name) {
  static const RowFamily families[] = {
      RowFamily::pi_le_z,  RowFamily::pi_le_y,        RowFamily::pi_ge,      RowFamily::nu_le_w,
      RowFamily::nu_le_y,  RowFamily::nu_ge,          RowFamily::one_price,  RowFamily::offer_cap,
      RowFamily::one_service, RowFamily::service_priced, RowFamily::capacity, RowFamily::open_only,
      RowFamily::assign,   RowFamily::min_demand,
  };
  for (RowFamily f : families) {
    const std::string prefix = std::string(to_string(f)) + "_";
    if (name.compare(0, prefix.size(), prefix) == 0) return f;
  }
  return RowFamily::other;
}

struct ParsedVar {
  Variable var;
  double objective = 0.0;
  bool in_bounds = false;
  int first_seen = 0;
  int bounds_order = -1;
};

class Parser {
 public:
  MilpModel run(const std::string& text) {
    std::vector<Token> objective_tokens;
    std::vector<Token> constraint_tokens;
    Section section = Section::none;
    bool minimize = false;
    bool seen_objective = false;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string_view view(raw);
      if (auto c = view.find('\\'); c != std::string_view::npos) view = view.substr(0, c);
      while (!view.empty() && std::isspace(static_cast<unsigned char>(view.front()))) view.remove_prefix(1);
      while (!view.empty() && std::isspace(static_cast<unsigned char>(view.back()))) view.remove_suffix(1);
      if (view.empty()) continue;
      if (auto s = section_of(view)) {
        if (*s == Section::objective) {
          if (seen_objective) fail(line, "second objective section");
          seen_objective = true;
          minimize = lower(view).rfind("min", 0) == 0;
        }
        if (*s != Section::objective && !seen_objective) fail(line, "objective section must come first");
        section = *s;
        continue;
      }
      switch (section) {
        case Section::none:
          fail(line, "content before the objective section");
        case Section::objective:
          tokenize(view, line, objective_tokens);
          break;
        case Section::constraints:
          tokenize(view, line, constraint_tokens);
          break;
        case Section::bounds:
          parse_bound(view, line);
          break;
        case Section::binaries: {
          std::vector<Token> toks;
          tokenize(view, line, toks);
          for (const auto& t : toks) {
            if (t.kind != Token::ident) fail(line, "expected a variable name in the binaries section");
            const int v = variable(t.text);
            binary_.push_back(v);
          }
          break;
        }
        case Section::generals:
          fail(line, "general integer variables are not supported");
        case Section::end:
          fail(line, "content after End");
      }
    }
    if (!seen_objective) fail(line, "missing objective section");
    if (section != Section::end) fail(line, "missing End");

    parse_objective(objective_tokens, minimize);
    parse_constraints(constraint_tokens);
    if (vars_.empty()) fail(line, "model declares no variables");

    for (int v : binary_) {
      auto& var = vars_[v].var;
      var.kind = VarKind::binary;
      if (!vars_[v].in_bounds) {
        var.lower = 0.0;
        var.upper = 1.0;
      } else {
        var.lower = std::max(var.lower, 0.0);
        var.upper = std::min(var.upper, 1.0);
      }
    }

    // Variables listed in Bounds keep that order; the rest follow by first use.
    std::vector<int> order(vars_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [this](int a, int b) {
      const auto& x = vars_[a];
      const auto& y = vars_[b];
      const bool xb = x.bounds_order >= 0, yb = y.bounds_order >= 0;
      if (xb != yb) return xb;
      if (xb) return x.bounds_order < y.bounds_order;
      return x.first_seen < y.first_seen;
    });
    std::vector<int> remap(vars_.size());
    MilpModel model;
    for (int old : order) {
      auto v = vars_[old].var;
      infer_role(v);
      remap[old] = model.add_variable(std::move(v), vars_[old].objective);
    }
    for (auto& c : rows_) {
      for (auto& t : c.terms) t.first = remap[t.first];
      model.add_constraint(std::move(c));
    }
    return model;
  }

 private:
  int variable(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(vars_.size());
    ParsedVar pv;
    pv.var.name = name;
    pv.var.kind = VarKind::continuous;
    pv.var.lower = 0.0;
    pv.var.upper = kInfinity;
    pv.first_seen = id;
    vars_.push_back(std::move(pv));
    index_.emplace(name, id);
    return id;
  }

  // Reads [sign] [number] name terms until a non-term token; merges repeats.
  std::vector<std::pair<int, double>> expression(const std::vector<Token>& t, std::size_t& pos) {
    std::vector<std::pair<int, double>> terms;
    std::unordered_map<int, std::size_t> slot;
    while (pos < t.size()) {
      double sign = 1.0;
      std::size_t p = pos;
      bool had_sign = false;
      while (p < t.size() && t[p].kind == Token::op && (t[p].text == "+" || t[p].text == "-")) {
        if (t[p].text == "-") sign = -sign;
        had_sign = true;
        ++p;
      }
      double coef = 1.0;
      if (p < t.size() && t[p].kind == Token::number) {
        if (p + 1 >= t.size() || t[p + 1].kind != Token::ident) {
          if (had_sign || p != pos) fail(t[p].line, "constant terms are not supported in expressions");
          break;
        }
        coef = t[p].value;
        ++p;
      }
      if (p >= t.size() || t[p].kind != Token::ident) {
        if (had_sign) fail(p < t.size() ? t[p].line : t.back().line, "dangling sign in expression");
        break;
      }
      if (p + 1 < t.size() && t[p + 1].kind == Token::colon) {
        if (had_sign || coef != 1.0) fail(t[p].line, "unexpected label");
        break;
      }
      const int v = variable(t[p].text);
      const double a = sign * coef;
      auto [it, inserted] = slot.emplace(v, terms.size());
      if (inserted) {
        terms.emplace_back(v, a);
      } else {
        terms[it->second].second += a;
      }
      pos = p + 1;
    }
    return terms;
  }

  void parse_objective(const std::vector<Token>& t, bool minimize) {
    std::size_t pos = 0;
    if (t.size() >= 2 && t[0].kind == Token::ident && t[1].kind == Token::colon) pos = 2;
    auto terms = expression(t, pos);
    if (pos != t.size()) fail(t[pos].line, "unexpected token '" + t[pos].text + "' in objective");
    for (const auto& [v, a] : terms) vars_[v].objective = minimize ? -a : a;
  }

  void parse_constraints(const std::vector<Token>& t) {
    std::size_t pos = 0;
    while (pos < t.size()) {
      Constraint c;
      const int line = t[pos].line;
      if (pos + 1 < t.size() && t[pos].kind == Token::ident && t[pos + 1].kind == Token::colon) {
        c.name = t[pos].text;
        pos += 2;
      } else {
        c.name = "c" + std::to_string(rows_.size() + 1);
      }
      c.terms = expression(t, pos);
      if (c.terms.empty()) fail(line, "constraint '" + c.name + "' has no terms");
      if (pos >= t.size() || t[pos].kind != Token::op || (t[pos].text != "<=" && t[pos].text != ">=" && t[pos].text != "=")) {
        fail(pos < t.size() ? t[pos].line : line, "constraint '" + c.name + "' lacks a sense");
      }
      c.sense = t[pos].text == "<=" ? Sense::le : t[pos].text == ">=" ? Sense::ge : Sense::eq;
      ++pos;
      double sign = 1.0;
      while (pos < t.size() && t[pos].kind == Token::op && (t[pos].text == "+" || t[pos].text == "-")) {
        if (t[pos].text == "-") sign = -sign;
        ++pos;
      }
      if (pos >= t.size() || t[pos].kind != Token::number) fail(line, "constraint '" + c.name + "' lacks a right-hand side");
      c.rhs = sign * t[pos].value;
      ++pos;
      c.family = infer_family(c.name);
      rows_.push_back(std::move(c));
    }
  }

  static std::optional<double> signed_number(const std::vector<Token>& t, std::size_t& pos) {
    double sign = 1.0;
    std::size_t p = pos;
    while (p < t.size() && t[p].kind == Token::op && (t[p].text == "+" || t[p].text == "-")) {
      if (t[p].text == "-") sign = -sign;
      ++p;
    }
    if (p < t.size() && t[p].kind == Token::number) {
      pos = p + 1;
      return sign * t[p].value;
    }
    return std::nullopt;
  }

  void parse_bound(std::string_view text, int line) {
    std::vector<Token> t;
    tokenize(text, line, t);
    std::size_t pos = 0;
    auto op_at = [&](std::size_t p) -> std::string {
      return p < t.size() && t[p].kind == Token::op ? t[p].text : std::string();
    };
    auto mark = [&](int v) {
      auto& pv = vars_[v];
      if (!pv.in_bounds) {
        pv.in_bounds = true;
        pv.bounds_order = bounds_seen_++;
      }
      return &pv.var;
    };
    if (auto lo = signed_number(t, pos)) {
      // lo <= x [<= hi]
      if (op_at(pos) != "<=") fail(line, "expected '<=' in bound");
      ++pos;
      if (pos >= t.size() || t[pos].kind != Token::ident) fail(line, "expected a variable in bound");
      Variable* v = mark(variable(t[pos].text));
      ++pos;
      v->lower = *lo;
      if (pos < t.size()) {
        if (op_at(pos) != "<=") fail(line, "expected '<=' in bound");
        ++pos;
        auto hi = signed_number(t, pos);
        if (!hi) fail(line, "expected an upper bound");
        v->upper = *hi;
      }
    } else {
      if (pos >= t.size() || t[pos].kind != Token::ident) fail(line, "expected a variable in bound");
      Variable* v = mark(variable(t[pos].text));
      ++pos;
      if (pos < t.size() && t[pos].kind == Token::ident && lower(t[pos].text) == "free") {
        v->lower = -kInfinity;
        v->upper = kInfinity;
        ++pos;
      } else {
        const std::string op = op_at(pos);
        ++pos;
        auto value = signed_number(t, pos);
        if (op.empty() || !value) fail(line, "malformed bound");
        if (op == ">=") {
          v->lower = *value;
        } else if (op == "<=") {
          v->upper = *value;
        } else {
          v->lower = *value;
          v->upper = *value;
        }
      }
    }
    if (pos != t.size()) fail(line, "trailing tokens in bound");
  }

  std::vector<ParsedVar> vars_;
  std::unordered_map<std::string, int> index_;
  std::vector<Constraint> rows_;
  std::vector<int> binary_;
  int bounds_seen_ = 0;
};

}  // namespace

MilpModel parse_lp(const std::string& text) { return Parser().run(text); }

}  // namespace biloc
