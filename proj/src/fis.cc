// Copyright 2026  The ClearSpeech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "clearspeech/fis.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace clearspeech {

namespace {

std::string FormatNumber(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool IEquals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

// Character cursor over one source line; positions are reported 1-based.
class Cursor {
 public:
  Cursor(std::string_view text, int line, std::size_t start = 0)
      : text_(text), line_(line), pos_(start) {}

  [[noreturn]] void Fail(const std::string &msg,
                         ErrorCode code = ErrorCode::kSyntaxError) const {
    throw FisParseError(code, line_, static_cast<int>(pos_) + 1, msg);
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  bool AtEnd() {
    SkipSpace();
    return pos_ >= text_.size();
  }
  char Peek() {
    SkipSpace();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool TryConsume(char c) {
    if (Peek() != c) return false;
    ++pos_;
    return true;
  }
  void Expect(char c) {
    if (!TryConsume(c)) Fail(std::string("expected '") + c + "'");
  }
  std::string Word() {
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) Fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }
  bool TryKeyword(std::string_view kw) {
    SkipSpace();
    if (text_.size() - pos_ < kw.size() || !IEquals(text_.substr(pos_, kw.size()), kw))
      return false;
    std::size_t after = pos_ + kw.size();
    if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after])))
      return false;
    pos_ = after;
    return true;
  }
  double Number() {
    SkipSpace();
    const char *begin = text_.data() + pos_;
    const char *end = text_.data() + text_.size();
    if (begin != end && *begin == '+') ++begin;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) Fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }
  // 'quoted' or a bare word.
  std::string StringValue() {
    SkipSpace();
    if (TryConsume('\'')) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != '\'') ++pos_;
      if (pos_ >= text_.size()) Fail("unterminated string");
      std::string s(text_.substr(start, pos_ - start));
      ++pos_;
      return s;
    }
    return Word();
  }
  std::vector<double> NumberList() {
    Expect('[');
    std::vector<double> out;
    while (!TryConsume(']')) {
      if (AtEnd()) Fail("unterminated '['");
      out.push_back(Number());
      TryConsume(',');
    }
    return out;
  }
  void ExpectEnd() {
    if (!AtEnd()) Fail("unexpected trailing text");
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_;
};

struct PendingVariable {
  int line = 0;
  std::optional<std::string> name;
  std::optional<std::pair<double, double>> range;
  std::optional<int> num_mfs;
  std::map<int, MembershipFunction> mfs;
};

struct RuleLine {
  int line = 0;
  std::string text;
};

bool LooksLikeTextRule(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  std::size_t digits = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > digits) {
    if (i >= s.size() || s[i] != '.') return false;
    ++i;
  }
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.size() - i >= 3 && IEquals(s.substr(i, 2), "if") &&
         (std::isspace(static_cast<unsigned char>(s[i + 2])) || s[i + 2] == '(');
}

bool LooksLikeNumericRule(std::string_view s) {
  auto comma = s.find(',');
  if (comma == std::string_view::npos || s.find('(') == std::string_view::npos)
    return false;
  bool any_digit = false;
  for (std::size_t i = 0; i < comma; ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) any_digit = true;
    else if (c != ' ' && c != '\t' && c != '-') return false;
  }
  return any_digit;
}

int FindVariable(const std::vector<FuzzyVariable> &vars, const std::string &name) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  return -1;
}

int FindMf(const FuzzyVariable &var, const std::string &name) {
  for (std::size_t i = 0; i < var.mfs.size(); ++i)
    if (var.mfs[i].name == name) return static_cast<int>(i);
  return -1;
}

RuleTerm ParseTerm(Cursor &cur, const std::vector<FuzzyVariable> &vars,
                   std::string_view role) {
  cur.Expect('(');
  std::string var = cur.Word();
  if (!cur.TryKeyword("is")) cur.Fail("expected 'is'");
  if (cur.TryKeyword("not")) cur.Fail("negated terms are not supported");
  std::string term = cur.Word();
  cur.Expect(')');
  int v = FindVariable(vars, var);
  if (v < 0) cur.Fail("unknown " + std::string(role) + " variable '" + var + "'");
  int m = FindMf(vars[v], term);
  if (m < 0) cur.Fail("variable '" + var + "' has no membership function '" + term + "'");
  return {v, m};
}

FuzzyRule ParseTextRule(const RuleLine &rl, const FisConfig &fis) {
  Cursor cur(rl.text, rl.line);
  if (std::isdigit(static_cast<unsigned char>(cur.Peek()))) {
    cur.Number();
    cur.TryConsume('.');
  }
  if (!cur.TryKeyword("if")) cur.Fail("expected 'If'");
  FuzzyRule rule;
  rule.antecedent.push_back(ParseTerm(cur, fis.inputs, "input"));
  std::optional<Connective> conn;
  while (!cur.TryKeyword("then")) {
    Connective c;
    if (cur.TryKeyword("and")) c = Connective::kAnd;
    else if (cur.TryKeyword("or")) c = Connective::kOr;
    else cur.Fail("expected 'and', 'or' or 'then'");
    if (conn && *conn != c) cur.Fail("mixed 'and'/'or' in one rule");
    conn = c;
    rule.antecedent.push_back(ParseTerm(cur, fis.inputs, "input"));
  }
  rule.connective = conn.value_or(Connective::kAnd);
  rule.consequent = ParseTerm(cur, fis.outputs, "output");
  if (cur.TryConsume('(')) {
    rule.weight = cur.Number();
    cur.Expect(')');
  }
  cur.ExpectEnd();
  return rule;
}

// "i1 i2 i3, o1 (w) : conn" with 1-based MF indices, 0 = unused.
FuzzyRule ParseNumericRule(const RuleLine &rl, const FisConfig &fis) {
  Cursor cur(rl.text, rl.line);
  FuzzyRule rule;
  for (std::size_t i = 0; i < fis.inputs.size(); ++i) {
    double idx = cur.Number();
    if (idx < 0) cur.Fail("negated terms are not supported");
    if (idx != std::floor(idx) || idx > static_cast<double>(fis.inputs[i].mfs.size()))
      cur.Fail("membership index out of range");
    if (idx > 0) rule.antecedent.push_back({static_cast<int>(i), static_cast<int>(idx) - 1});
  }
  cur.Expect(',');
  int outputs_set = 0;
  for (std::size_t o = 0; o < fis.outputs.size(); ++o) {
    double idx = cur.Number();
    if (idx < 0 || idx != std::floor(idx) ||
        idx > static_cast<double>(fis.outputs[o].mfs.size()))
      cur.Fail("output membership index out of range");
    if (idx > 0) {
      rule.consequent = {static_cast<int>(o), static_cast<int>(idx) - 1};
      ++outputs_set;
    }
  }
  if (outputs_set != 1) cur.Fail("a rule must name exactly one consequent");
  cur.Expect('(');
  rule.weight = cur.Number();
  cur.Expect(')');
  cur.Expect(':');
  double c = cur.Number();
  if (c == 1) rule.connective = Connective::kAnd;
  else if (c == 2) rule.connective = Connective::kOr;
  else cur.Fail("connective must be 1 (and) or 2 (or)");
  cur.ExpectEnd();
  if (rule.antecedent.empty()) cur.Fail("rule has no antecedent");
  return rule;
}

FuzzyVariable Finish(const PendingVariable &pv, const std::string &section) {
  auto fail = [&](ErrorCode code, const std::string &msg) {
    throw FisParseError(code, pv.line, 1, "[" + section + "] " + msg);
  };
  if (!pv.name) fail(ErrorCode::kSyntaxError, "missing Name");
  if (!pv.range) fail(ErrorCode::kSyntaxError, "missing Range");
  if (!pv.num_mfs) fail(ErrorCode::kSyntaxError, "missing NumMFs");
  if (static_cast<int>(pv.mfs.size()) != *pv.num_mfs)
    fail(ErrorCode::kCountMismatch,
         "NumMFs=" + std::to_string(*pv.num_mfs) + " but " +
             std::to_string(pv.mfs.size()) + " MF lines");
  FuzzyVariable v;
  v.name = *pv.name;
  v.lo = pv.range->first;
  v.hi = pv.range->second;
  int expect = 1;
  for (const auto &[idx, mf] : pv.mfs) {
    if (idx != expect++) fail(ErrorCode::kCountMismatch, "MF numbering has a gap");
    v.mfs.push_back(mf);
  }
  return v;
}

void RequireMethod(Cursor &cur, const std::string &key, const std::string &value,
                   std::string_view want) {
  if (value != want)
    cur.Fail(key + "='" + value + "' is unsupported (only '" + std::string(want) + "')");
}

}  // namespace

MembershipFunction MembershipFunction::Trimf(std::string name, double a, double b,
                                             double c) {
  return {std::move(name), MfKind::kTrimf, {a, b, c}};
}

MembershipFunction MembershipFunction::Gaussmf(std::string name, double sigma,
                                               double center) {
  return {std::move(name), MfKind::kGaussmf, {sigma, center}};
}

void FisConfig::Validate() const {
  auto check_var = [](const FuzzyVariable &v) {
    if (!(v.lo < v.hi))
      throw Error(ErrorCode::kBadRange, "variable '" + v.name + "' has lo >= hi");
    for (std::size_t i = 0; i < v.mfs.size(); ++i) {
      const auto &mf = v.mfs[i];
      for (std::size_t j = 0; j < i; ++j)
        if (v.mfs[j].name == mf.name)
          throw Error(ErrorCode::kSyntaxError,
                      "duplicate membership function '" + mf.name + "'");
      if (mf.kind == MfKind::kTrimf) {
        if (mf.params.size() != 3)
          throw Error(ErrorCode::kCountMismatch, "trimf takes 3 parameters");
        const double a = mf.params[0], b = mf.params[1], c = mf.params[2];
        if (!(a <= b && b <= c && a < c))
          throw Error(ErrorCode::kBadRange, "trimf '" + mf.name + "' needs a <= b <= c, a < c");
      } else {
        if (mf.params.size() != 2)
          throw Error(ErrorCode::kCountMismatch, "gaussmf takes 2 parameters");
        if (!(mf.params[0] > 0.0))
          throw Error(ErrorCode::kBadRange, "gaussmf '" + mf.name + "' needs sigma > 0");
      }
    }
  };
  for (const auto &v : inputs) check_var(v);
  for (const auto &v : outputs) check_var(v);
  for (const auto &r : rules) {
    if (!(r.weight >= 0.0 && r.weight <= 1.0))
      throw Error(ErrorCode::kBadRange, "rule weight outside [0, 1]");
    if (r.antecedent.empty())
      throw Error(ErrorCode::kSyntaxError, "rule without antecedent");
    for (const auto &t : r.antecedent)
      if (t.variable < 0 || t.variable >= static_cast<int>(inputs.size()) || t.mf < 0 ||
          t.mf >= static_cast<int>(inputs[t.variable].mfs.size()))
        throw Error(ErrorCode::kSyntaxError, "rule antecedent index out of range");
    const auto &c = r.consequent;
    if (c.variable < 0 || c.variable >= static_cast<int>(outputs.size()) || c.mf < 0 ||
        c.mf >= static_cast<int>(outputs[c.variable].mfs.size()))
      throw Error(ErrorCode::kSyntaxError, "rule consequent index out of range");
  }
}

FisConfig ParseFis(std::string_view text) {
  enum class Section { kNone, kSystem, kInput, kOutput, kRules };
  Section section = Section::kNone;
  std::string section_name;
  std::map<int, PendingVariable> inputs, outputs;
  PendingVariable *current = nullptr;
  std::vector<RuleLine> rule_lines;
  std::optional<int> num_inputs, num_outputs, num_rules;
  FisConfig fis;
  bool saw_system = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || std::isspace(static_cast<unsigned char>(line.back()))))
      line.remove_suffix(1);
    std::size_t lead = 0;
    while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
    if (lead == line.size()) continue;
    Cursor cur(line, line_no, lead);

    if (line[lead] == '[') {
      cur.Expect('[');
      std::string head = cur.Word();
      cur.Expect(']');
      cur.ExpectEnd();
      std::size_t digits = head.size();
      while (digits > 0 && std::isdigit(static_cast<unsigned char>(head[digits - 1]))) --digits;
      std::string base = head.substr(0, digits);
      int index = digits < head.size() ? std::stoi(head.substr(digits)) : 0;
      section_name = head;
      current = nullptr;
      if (base == "System" && index == 0) {
        section = Section::kSystem;
        saw_system = true;
      } else if (base == "Rules" && index == 0) {
        section = Section::kRules;
      } else if ((base == "Input" || base == "Output") && index >= 1) {
        auto &table = base == "Input" ? inputs : outputs;
        if (table.count(index)) cur.Fail("duplicate section [" + head + "]");
        section = base == "Input" ? Section::kInput : Section::kOutput;
        current = &table[index];
        current->line = line_no;
      } else {
        cur.Fail("unknown section [" + head + "]");
      }
      continue;
    }

    // Key=value line?
    std::size_t key_end = lead;
    while (key_end < line.size() && std::isalnum(static_cast<unsigned char>(line[key_end])))
      ++key_end;
    std::size_t eq = key_end;
    while (eq < line.size() && (line[eq] == ' ' || line[eq] == '\t')) ++eq;
    const bool is_key = key_end > lead &&
                        std::isalpha(static_cast<unsigned char>(line[lead])) &&
                        eq < line.size() && line[eq] == '=';
    if (!is_key) {
      if (section == Section::kRules &&
          (LooksLikeTextRule(line) || LooksLikeNumericRule(line)))
        rule_lines.push_back({line_no, std::string(line.substr(lead))});
      continue;  // commentary
    }

    const std::string key(line.substr(lead, key_end - lead));
    Cursor value(line, line_no, eq + 1);
    switch (section) {
      case Section::kNone:
        cur.Fail("key '" + key + "' outside any section");
      case Section::kRules:
        cur.Fail("unexpected key '" + key + "' in [Rules]");
      case Section::kSystem: {
        if (key == "Name") {
          fis.name = value.StringValue();
        } else if (key == "Type") {
          RequireMethod(value, key, value.StringValue(), "mamdani");
        } else if (key == "Version") {
          value.SkipSpace();
          fis.version = std::string(line.substr(eq + 1));
          fis.version.erase(0, fis.version.find_first_not_of(" \t"));
          continue;
        } else if (key == "NumInputs" || key == "NumOutputs" || key == "NumRules") {
          double v = value.Number();
          if (v < 0 || v != std::floor(v)) value.Fail(key + " must be a non-negative integer");
          (key == "NumInputs" ? num_inputs : key == "NumOutputs" ? num_outputs : num_rules) =
              static_cast<int>(v);
        } else if (key == "AndMethod") {
          RequireMethod(value, key, value.StringValue(), "min");
        } else if (key == "OrMethod") {
          RequireMethod(value, key, value.StringValue(), "max");
        } else if (key == "ImpMethod") {
          RequireMethod(value, key, value.StringValue(), "min");
        } else if (key == "AggMethod") {
          RequireMethod(value, key, value.StringValue(), "max");
        } else if (key == "DefuzzMethod") {
          RequireMethod(value, key, value.StringValue(), "centroid");
        } else {
          cur.Fail("unknown key '" + key + "' in [System]");
        }
        value.ExpectEnd();
        break;
      }
      case Section::kInput:
      case Section::kOutput: {
        if (key == "Name") {
          current->name = value.StringValue();
        } else if (key == "Range") {
          auto r = value.NumberList();
          if (r.size() != 2) value.Fail("Range takes two numbers", ErrorCode::kCountMismatch);
          if (!(r[0] < r[1])) value.Fail("Range needs lo < hi", ErrorCode::kBadRange);
          current->range = {r[0], r[1]};
        } else if (key == "NumMFs") {
          double v = value.Number();
          if (v < 0 || v != std::floor(v)) value.Fail("NumMFs must be a non-negative integer");
          current->num_mfs = static_cast<int>(v);
        } else if (key.rfind("MF", 0) == 0 && key.size() > 2 &&
                   std::all_of(key.begin() + 2, key.end(),
                               [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          int idx = std::stoi(key.substr(2));
          if (idx < 1 || current->mfs.count(idx)) cur.Fail("bad or duplicate " + key);
          MembershipFunction mf;
          mf.name = value.StringValue();
          value.Expect(':');
          std::string kind = value.Word();
          if (kind == "trimf") mf.kind = MfKind::kTrimf;
          else if (kind == "gaussmf") mf.kind = MfKind::kGaussmf;
          else value.Fail("unknown membership function kind '" + kind + "'",
                          ErrorCode::kUnknownMfKind);
          value.Expect(',');
          mf.params = value.NumberList();
          const std::size_t want = mf.kind == MfKind::kTrimf ? 3 : 2;
          if (mf.params.size() != want)
            value.Fail(kind + " takes " + std::to_string(want) + " parameters, got " +
                           std::to_string(mf.params.size()),
                       ErrorCode::kCountMismatch);
          if (mf.kind == MfKind::kTrimf) {
            const double a = mf.params[0], b = mf.params[1], c = mf.params[2];
            if (!(a <= b && b <= c && a < c))
              value.Fail("trimf needs a <= b <= c with a < c", ErrorCode::kBadRange);
          } else if (!(mf.params[0] > 0.0)) {
            value.Fail("gaussmf needs sigma > 0", ErrorCode::kBadRange);
          }
          current->mfs[idx] = std::move(mf);
        } else {
          cur.Fail("unknown key '" + key + "' in [" + section_name + "]");
        }
        value.ExpectEnd();
        break;
      }
    }
  }

  auto count_fail = [](const std::string &msg) -> void {
    throw FisParseError(ErrorCode::kCountMismatch, 1, 1, msg);
  };
  if (!saw_system) throw FisParseError(ErrorCode::kSyntaxError, 1, 1, "missing [System]");
  int expect = 1;
  for (const auto &[idx, pv] : inputs) {
    if (idx != expect++) count_fail("input sections are not numbered 1..N");
    fis.inputs.push_back(Finish(pv, "Input" + std::to_string(idx)));
  }
  expect = 1;
  for (const auto &[idx, pv] : outputs) {
    if (idx != expect++) count_fail("output sections are not numbered 1..N");
    fis.outputs.push_back(Finish(pv, "Output" + std::to_string(idx)));
  }
  if (!num_inputs || *num_inputs != static_cast<int>(fis.inputs.size()))
    count_fail("NumInputs does not match the number of [InputK] sections");
  if (!num_outputs || *num_outputs != static_cast<int>(fis.outputs.size()))
    count_fail("NumOutputs does not match the number of [OutputK] sections");
  for (const auto &rl : rule_lines)
    fis.rules.push_back(LooksLikeTextRule(rl.text) ? ParseTextRule(rl, fis)
                                                   : ParseNumericRule(rl, fis));
  if (!num_rules || *num_rules != static_cast<int>(fis.rules.size()))
    count_fail("NumRules does not match the number of rules");
  for (std::size_t i = 0; i < fis.rules.size(); ++i)
    if (!(fis.rules[i].weight >= 0.0 && fis.rules[i].weight <= 1.0))
      throw FisParseError(ErrorCode::kBadRange, rule_lines[i].line, 1,
                          "rule weight outside [0, 1]");
  fis.Validate();
  return fis;
}

FisConfig LoadFis(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return ParseFis(os.str());
}

std::string SerializeFis(const FisConfig &fis) {
  std::ostringstream os;
  os << "[System]\n"
     << "Name='" << fis.name << "'\n"
     << "Type='mamdani'\n"
     << "Version=" << fis.version << '\n'
     << "NumInputs=" << fis.inputs.size() << '\n'
     << "NumOutputs=" << fis.outputs.size() << '\n'
     << "NumRules=" << fis.rules.size() << '\n'
     << "AndMethod='min'\nOrMethod='max'\nImpMethod='min'\nAggMethod='max'\n"
     << "DefuzzMethod='centroid'\n";
  auto emit_var = [&os](const char *kind, std::size_t idx, const FuzzyVariable &v) {
    os << "\n[" << kind << idx + 1 << "]\n"
       << "Name='" << v.name << "'\n"
       << "Range=[" << FormatNumber(v.lo) << ' ' << FormatNumber(v.hi) << "]\n"
       << "NumMFs=" << v.mfs.size() << '\n';
    for (std::size_t i = 0; i < v.mfs.size(); ++i) {
      const auto &mf = v.mfs[i];
      os << "MF" << i + 1 << "='" << mf.name << "':"
         << (mf.kind == MfKind::kTrimf ? "trimf" : "gaussmf") << ",[";
      for (std::size_t p = 0; p < mf.params.size(); ++p)
        os << (p ? " " : "") << FormatNumber(mf.params[p]);
      os << "]\n";
    }
  };
  for (std::size_t i = 0; i < fis.inputs.size(); ++i) emit_var("Input", i, fis.inputs[i]);
  for (std::size_t i = 0; i < fis.outputs.size(); ++i) emit_var("Output", i, fis.outputs[i]);
  os << "\n[Rules]\n";
  for (std::size_t r = 0; r < fis.rules.size(); ++r) {
    const auto &rule = fis.rules[r];
    os << r + 1 << ". If ";
    for (std::size_t t = 0; t < rule.antecedent.size(); ++t) {
      const auto &term = rule.antecedent[t];
      const auto &var = fis.inputs[term.variable];
      if (t) os << (rule.connective == Connective::kAnd ? " and " : " or ");
      os << '(' << var.name << " is " << var.mfs[term.mf].name << ')';
    }
    const auto &out = fis.outputs[rule.consequent.variable];
    os << " then (" << out.name << " is " << out.mfs[rule.consequent.mf].name << ") ("
       << FormatNumber(rule.weight) << ")\n";
  }
  return os.str();
}

double Membership(const MembershipFunction &mf, double x) {
  if (mf.kind == MfKind::kGaussmf) {
    const double sigma = mf.params[0], center = mf.params[1];
    const double z = (x - center) / sigma;
    return std::exp(-0.5 * z * z);
  }
  const double a = mf.params[0], b = mf.params[1], c = mf.params[2];
  if (x < a || x > c) return 0.0;
  if (x == b) return 1.0;
  if (x < b) return (x - a) / (b - a);
  return (c - x) / (c - b);
}

FisOutput Evaluate(const FisConfig &fis, const std::vector<double> &inputs) {
  if (inputs.size() != fis.inputs.size())
    throw Error(ErrorCode::kArityMismatch,
                "system has " + std::to_string(fis.inputs.size()) + " inputs, got " +
                    std::to_string(inputs.size()));
  FisOutput out;
  out.rule_strengths.reserve(fis.rules.size());
  for (const auto &rule : fis.rules) {
    double strength = rule.connective == Connective::kAnd ? 1.0 : 0.0;
    for (const auto &t : rule.antecedent) {
      const double mu = Membership(fis.inputs[t.variable].mfs[t.mf], inputs[t.variable]);
      strength = rule.connective == Connective::kAnd ? std::min(strength, mu)
                                                     : std::max(strength, mu);
    }
    out.rule_strengths.push_back(strength * rule.weight);
  }

  for (std::size_t o = 0; o < fis.outputs.size(); ++o) {
    const auto &var = fis.outputs[o];
    const double step = (var.hi - var.lo) / (kCentroidPoints - 1);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < kCentroidPoints; ++i) {
      const double x = var.lo + step * i;
      double mu = 0.0;
      for (std::size_t r = 0; r < fis.rules.size(); ++r) {
        const auto &c = fis.rules[r].consequent;
        if (c.variable != static_cast<int>(o) || out.rule_strengths[r] <= 0.0) continue;
        mu = std::max(mu, std::min(out.rule_strengths[r], Membership(var.mfs[c.mf], x)));
      }
      num += x * mu;
      den += mu;
    }
    const bool none = den <= 0.0;
    out.crisp.push_back(none ? 0.5 * (var.lo + var.hi) : num / den);
    out.no_rule_fired.push_back(none);
  }
  return out;
}

FisConfig SpeechAccuracyFis() {
  using MF = MembershipFunction;
  FisConfig fis;
  fis.name = "SpeechAccuracy";
  fis.version = "2.0";
  fis.inputs = {
      {"Environment", 10, 50,
       {MF::Trimf("VNoisy", -6, 10, 20), MF::Trimf("Noisy", 20, 30, 35),
        MF::Trimf("Clean", 35, 50, 66)}},
      {"WinSz", 240, 270,
       {MF::Trimf("Small", 225, 240, 250), MF::Trimf("Medium", 250, 255, 260),
        MF::Trimf("Large", 260, 270, 282)}},
      {"FrOver", 20, 60,
       {MF::Trimf("Small", 4, 20, 40), MF::Trimf("Medium", 40, 45, 50),
        MF::Trimf("Large", 50, 60, 76)}},
  };
  fis.outputs = {
      {"Accuracy", 95, 100,
       {MF::Gaussmf("Good", 0.8493, 95), MF::Gaussmf("Better", 0.8493, 97.5),
        MF::Gaussmf("Best", 0.8493, 100)}},
  };
  constexpr int kEnv = 0, kWin = 1, kOver = 2;
  constexpr int kClean = 2, kMedium = 1, kBetter = 1, kBest = 2;
  fis.rules = {
      {{{kEnv, kClean}}, Connective::kAnd, {0, kBetter}, 0.5},
      {{{kEnv, kClean}, {kOver, kMedium}}, Connective::kAnd, {0, kBest}, 0.75},
      {{{kEnv, kClean}, {kWin, kMedium}, {kOver, kMedium}}, Connective::kAnd, {0, kBest}, 1.0},
      {{{kOver, kMedium}}, Connective::kAnd, {0, kBetter}, 0.5},
      {{{kWin, kMedium}}, Connective::kAnd, {0, kBetter}, 0.5},
  };
  return fis;
}

OptimizeResult OptimizeParams(const FisConfig &fis, const std::vector<GridRow> &grid) {
  if (grid.empty()) throw Error(ErrorCode::kEmptyGrid, "empty parameter grid");
  std::optional<OptimizeResult> best;
  double best_measured = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto &row = grid[i];
    auto eval = Evaluate(fis, {row.snr_db, static_cast<double>(row.window_len), row.overlap_pct});
    OptimizeResult cand{row.window_len, row.overlap_pct, eval.crisp[0], eval.no_rule_fired[0], i};
    auto better = [&]() {
      if (!best) return true;
      if (cand.no_rule_fired != best->no_rule_fired) return !cand.no_rule_fired;
      if (cand.predicted_accuracy != best->predicted_accuracy)
        return cand.predicted_accuracy > best->predicted_accuracy;
      if (row.accuracy_pct != best_measured) return row.accuracy_pct > best_measured;
      if (cand.window_len != best->window_len) return cand.window_len < best->window_len;
      return cand.overlap_pct < best->overlap_pct;
    };
    if (better()) {
      best = cand;
      best_measured = row.accuracy_pct;
    }
  }
  return *best;
}

OptimizeResult OptimizeParams(const std::vector<GridRow> &grid) {
  static const FisConfig fis = SpeechAccuracyFis();
  return OptimizeParams(fis, grid);
}

}  // namespace clearspeech
