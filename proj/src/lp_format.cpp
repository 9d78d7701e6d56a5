#include "bustsp/lp_format.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace bustsp::milp {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string safe_name(const std::string& raw, VarId id, const char* prefix) {
  std::string s;
  for (char c : raw) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')
      s.push_back(c);
    else
      s.push_back('_');
  }
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.')
    s = std::string(prefix) + std::to_string(id) + (s.empty() ? "" : "_" + s);
  return s;
}

void write_terms(std::ostringstream& os, const std::vector<Term>& terms,
                 const std::vector<std::string>& names) {
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    const double a = t.coef;
    if (first) {
      if (a < 0) os << "- ";
      first = false;
    } else {
      os << (a < 0 ? " - " : " + ");
    }
    const double mag = std::fabs(a);
    if (mag != 1.0) os << num(mag) << " ";
    os << names[static_cast<size_t>(t.var)];
  }
  if (first) os << "0 " << (names.empty() ? "x0" : names[0]);
}

}  // namespace

std::string export_lp_text(const MilpProblem& p) {
  // Unique LP-safe variable names.
  std::vector<std::string> names(p.variables.size());
  for (const auto& v : p.variables)
    names[static_cast<size_t>(v.id)] = safe_name(v.name, v.id, "x");
  {
    std::map<std::string, int> seen;
    for (size_t i = 0; i < names.size(); ++i) {
      int& n = seen[names[i]];
      if (n++ > 0) names[i] += "_" + std::to_string(i);
    }
  }

  std::ostringstream os;
  os << "Minimize\n obj: ";
  write_terms(os, p.objective.terms, names);
  if (p.objective.constant != 0.0) {
    os << (p.objective.constant < 0 ? " - " : " + ")
       << num(std::fabs(p.objective.constant));
  }
  os << "\nSubject To\n";
  int ci = 0;
  for (const auto& c : p.constraints) {
    os << " " << safe_name(c.name, ci, "c") << "_" << ci << ": ";
    write_terms(os, c.terms, names);
    switch (c.sense) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::Equal: os << " = "; break;
      case Sense::GreaterEqual: os << " >= "; break;
    }
    os << num(c.rhs) << "\n";
    ++ci;
  }
  os << "Bounds\n";
  for (const auto& v : p.variables) {
    const std::string& n = names[static_cast<size_t>(v.id)];
    const bool lf = std::isfinite(v.lower), uf = std::isfinite(v.upper);
    if (!lf && !uf) {
      os << " " << n << " free\n";
    } else if (lf && uf) {
      os << " " << num(v.lower) << " <= " << n << " <= " << num(v.upper) << "\n";
    } else if (lf) {
      if (v.lower != 0.0) os << " " << n << " >= " << num(v.lower) << "\n";
    } else {
      os << " -inf <= " << n << " <= " << num(v.upper) << "\n";
    }
  }
  bool any_bin = false;
  for (const auto& v : p.variables) {
    if (v.kind != VarKind::Binary) continue;
    if (!any_bin) {
      os << "Binaries\n";
      any_bin = true;
    }
    os << " " << names[static_cast<size_t>(v.id)] << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace bustsp::milp
