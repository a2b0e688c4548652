#include "reluinv/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

#include "reluinv/errors.hpp"

namespace reluinv {

std::size_t LpFileModel::var(const std::string& name) const {
  const auto it = index.find(name);
  if (it == index.end()) throw InvalidInput("LP file: unknown variable '" + name + "'");
  return it->second;
}

LinearProgram LpFileModel::program() const {
  LinearProgram lp;
  lp.objective = maximize ? Vector(-objective) : objective;
  lp.rows = rows;
  lp.lower = lower;
  lp.upper = upper;
  return lp;
}

namespace {

enum class Section { None, Objective, Constraints, Bounds, Binaries, Generals, End };

using Terms = std::vector<std::pair<std::size_t, double>>;

std::string lower_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_number(const std::string& tok, double& out) {
  const std::string t = lower_case(tok);
  if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") {
    out = kInfinity;
    return true;
  }
  if (t == "-inf" || t == "-infinity") {
    out = -kInfinity;
    return true;
  }
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

bool is_sense(const std::string& tok) {
  return tok == "<=" || tok == ">=" || tok == "=" || tok == "<" || tok == ">" || tok == "=<" ||
         tok == "=>";
}

RowSense to_sense(const std::string& tok) {
  if (tok == "<=" || tok == "<" || tok == "=<") return RowSense::LessEqual;
  if (tok == ">=" || tok == ">" || tok == "=>") return RowSense::GreaterEqual;
  return RowSense::Equal;
}

// Splits a line on whitespace, also separating sense operators and signs
// glued to neighbors such as "x0<=3".
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string op(1, c);
      if (i + 1 < line.size() && (line[i + 1] == '=' || line[i + 1] == '<' || line[i + 1] == '>')) {
        op += line[++i];
      }
      out.push_back(op);
    } else if ((c == '+' || c == '-') && cur.empty()) {
      // sign: keep attached when a number follows directly ("-3"), else split
      if (i + 1 < line.size() &&
          (std::isdigit(static_cast<unsigned char>(line[i + 1])) || line[i + 1] == '.' ||
           std::tolower(static_cast<unsigned char>(line[i + 1])) == 'i')) {
        cur += c;
      } else {
        out.emplace_back(1, c);
      }
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

class Parser {
 public:
  LpFileModel run(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      line_ = line_no;
      const auto bs = raw.find('\\');
      if (bs != std::string::npos) {
        const std::string comment = trim(std::string_view(raw).substr(bs + 1));
        if (trim(std::string_view(raw).substr(0, bs)).empty()) model_.comments.push_back(comment);
        raw.erase(bs);
      }
      const std::string line = trim(raw);
      if (line.empty()) continue;
      if (switch_section(line)) continue;
      handle(line);
    }
    if (section_ != Section::End) fail("missing End");
    return finish();
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("LP file line " + std::to_string(line_) + ": " + what);
  }

  bool switch_section(const std::string& line) {
    const std::string l = lower_case(line);
    if (l == "minimize" || l == "minimum" || l == "min") {
      section_ = Section::Objective;
    } else if (l == "maximize" || l == "maximum" || l == "max") {
      section_ = Section::Objective;
      model_.maximize = true;
    } else if (l == "subject to" || l == "such that" || l == "st" || l == "s.t.") {
      section_ = Section::Constraints;
    } else if (l == "bounds" || l == "bound") {
      section_ = Section::Bounds;
    } else if (l == "binaries" || l == "binary" || l == "bin") {
      section_ = Section::Binaries;
    } else if (l == "generals" || l == "general" || l == "gen") {
      section_ = Section::Generals;
    } else if (l == "end") {
      section_ = Section::End;
    } else {
      return false;
    }
    return true;
  }

  std::size_t ensure(const std::string& name) {
    if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])) || name[0] == '.') {
      fail("bad variable name '" + name + "'");
    }
    const auto [it, inserted] = model_.index.emplace(name, model_.variables.size());
    if (inserted) model_.variables.push_back(name);
    return it->second;
  }

  // Linear expression tokens[begin, end) into `terms`.
  void expression(const std::vector<std::string>& toks, std::size_t begin, std::size_t end,
                  Terms& terms) {
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    for (std::size_t i = begin; i < end; ++i) {
      const std::string& t = toks[i];
      double v = 0.0;
      if (t == "+") {
        sign = 1.0;
      } else if (t == "-") {
        sign = -1.0;
      } else if (parse_number(t, v)) {
        if (have_coef) fail("two coefficients in a row");
        coef = v;
        have_coef = true;
      } else {
        terms.emplace_back(ensure(t), sign * coef);
        sign = 1.0;
        coef = 1.0;
        have_coef = false;
      }
    }
    if (have_coef && coef != 0.0) fail("constant term without variable");
  }

  // Strips a leading "name:" and returns the index of the first remaining token.
  std::size_t label(std::vector<std::string>& toks, std::string& name) {
    if (toks.empty()) return 0;
    const auto colon = toks[0].find(':');
    if (colon == std::string::npos) return 0;
    name = toks[0].substr(0, colon);
    const std::string rest = toks[0].substr(colon + 1);
    if (rest.empty()) return 1;
    toks[0] = rest;
    return 0;
  }

  void handle(const std::string& line) {
    std::vector<std::string> toks = tokenize(line);
    switch (section_) {
      case Section::Objective: {
        std::string name;
        const std::size_t b = label(toks, name);
        expression(toks, b, toks.size(), objective_);
        break;
      }
      case Section::Constraints:
        constraint(toks);
        break;
      case Section::Bounds:
        bound(toks);
        break;
      case Section::Binaries:
        for (const std::string& t : toks) binaries_.push_back(ensure(t));
        break;
      case Section::Generals:
        fail("general integer variables are not supported");
      case Section::None:
        fail("text before the objective section");
      case Section::End:
        fail("text after End");
    }
  }

  void constraint(std::vector<std::string>& toks) {
    std::string name = "r" + std::to_string(rows_.size());
    const std::size_t b = label(toks, name);
    std::size_t s = b;
    while (s < toks.size() && !is_sense(toks[s])) ++s;
    if (s + 1 >= toks.size()) fail("constraint without sense and right-hand side");
    Terms terms;
    expression(toks, b, s, terms);
    double rhs = 0.0;
    std::string rhs_tok = toks[s + 1];
    if ((rhs_tok == "-" || rhs_tok == "+") && s + 2 < toks.size()) rhs_tok += toks[s + 2];
    if (!parse_number(rhs_tok, rhs)) fail("bad right-hand side '" + rhs_tok + "'");
    names_.push_back(name);
    rows_.push_back({std::move(terms), rhs, to_sense(toks[s])});
  }

  void bound(const std::vector<std::string>& toks) {
    double a = 0.0;
    double c = 0.0;
    if (toks.size() == 2 && lower_case(toks[1]) == "free") {
      const std::size_t v = ensure(toks[0]);
      set_lower(v, -kInfinity);
      set_upper(v, kInfinity);
    } else if (toks.size() == 5 && parse_number(toks[0], a) && is_sense(toks[1]) &&
               is_sense(toks[3]) && parse_number(toks[4], c)) {
      const std::size_t v = ensure(toks[2]);
      set_lower(v, a);
      set_upper(v, c);
    } else if (toks.size() == 3 && parse_number(toks[2], c) && is_sense(toks[1])) {
      const std::size_t v = ensure(toks[0]);
      apply(v, to_sense(toks[1]), c);
    } else if (toks.size() == 3 && parse_number(toks[0], a) && is_sense(toks[1])) {
      // "a <= v" reads as v >= a
      const std::size_t v = ensure(toks[2]);
      const RowSense s = to_sense(toks[1]);
      apply(v, s == RowSense::LessEqual    ? RowSense::GreaterEqual
               : s == RowSense::GreaterEqual ? RowSense::LessEqual
                                             : RowSense::Equal,
            a);
    } else {
      fail("unrecognized bound");
    }
  }

  void apply(std::size_t v, RowSense s, double value) {
    if (s != RowSense::LessEqual) set_lower(v, value);
    if (s != RowSense::GreaterEqual) set_upper(v, value);
  }
  void set_lower(std::size_t v, double value) { lower_[v] = value; }
  void set_upper(std::size_t v, double value) { upper_[v] = value; }

  LpFileModel finish() {
    const std::size_t n = model_.variables.size();
    const auto d = static_cast<Eigen::Index>(n);
    model_.objective = Vector::Zero(d);
    for (const auto& [v, c] : objective_) model_.objective[static_cast<Eigen::Index>(v)] += c;
    model_.lower = Vector::Zero(d);
    model_.upper = Vector::Constant(d, kInfinity);
    for (std::size_t v : binaries_) model_.upper[static_cast<Eigen::Index>(v)] = 1.0;
    for (const auto& [v, x] : lower_) model_.lower[static_cast<Eigen::Index>(v)] = x;
    for (const auto& [v, x] : upper_) model_.upper[static_cast<Eigen::Index>(v)] = x;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      Vector coeffs = Vector::Zero(d);
      for (const auto& [v, c] : rows_[r].terms) coeffs[static_cast<Eigen::Index>(v)] += c;
      model_.rows.push_back({std::move(coeffs), rows_[r].rhs, rows_[r].sense});
    }
    model_.row_names = std::move(names_);
    std::sort(binaries_.begin(), binaries_.end());
    binaries_.erase(std::unique(binaries_.begin(), binaries_.end()), binaries_.end());
    model_.binaries = std::move(binaries_);
    return std::move(model_);
  }

  struct RawRow {
    Terms terms;
    double rhs;
    RowSense sense;
  };

  LpFileModel model_;
  Section section_ = Section::None;
  std::size_t line_ = 0;
  Terms objective_;
  std::vector<RawRow> rows_;
  std::vector<std::string> names_;
  std::vector<std::size_t> binaries_;
  std::unordered_map<std::size_t, double> lower_;
  std::unordered_map<std::size_t, double> upper_;
};

}  // namespace

LpFileModel parse_lp_file(std::string_view text) { return Parser().run(text); }

}  // namespace reluinv
