#ifndef MATCHPOOL_CSV_HPP
#define MATCHPOOL_CSV_HPP

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "matchpool/solver.hpp"
#include "matchpool/twopop.hpp"

// CSV emission: comma separator, LF line endings, mandatory header row,
// no quoting (every field is numeric or a bare identifier). Floats carry
// 17 significant digits so parsing a row reproduces the doubles exactly.

namespace matchpool {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline const char* result_row_header() {
  return "alpha_H,alpha_L,Y_H,Y_L,theta_H,theta_L,psi,"
         "W_star,i_H,i_L,pi_H,pi_L,activity,stability,regime,pareto";
}

// One row per equilibrium: the economy's primitives, then the
// equilibrium, the economy's regime tag and the Pareto-dominant marker.
inline std::string result_row(const ModelParams& p, const Equilibrium& eq,
                              RegimeTag regime, bool pareto) {
  std::ostringstream out;
  out << fmt_double(p.alpha_H) << ',' << fmt_double(p.alpha_L) << ','
      << fmt_double(p.Y_H) << ',' << fmt_double(p.Y_L) << ','
      << fmt_double(p.theta_H) << ',' << fmt_double(p.theta_L) << ','
      << fmt_double(p.psi) << ',' << fmt_double(eq.W_star) << ','
      << fmt_double(eq.i_H) << ',' << fmt_double(eq.i_L) << ','
      << fmt_double(eq.pi_H) << ',' << fmt_double(eq.pi_L) << ','
      << to_string(eq.activity) << ',' << to_string(eq.stability) << ','
      << to_string(regime) << ',' << (pareto ? 1 : 0);
  return out.str();
}

inline const char* twopop_row_header() {
  return "W_f,W_m,i_fH,i_fL,i_mH,i_mL,pi_fH,pi_fL,pi_mH,pi_mL,stability,residual";
}

inline std::string twopop_row(const TwoPopEquilibrium& eq) {
  std::ostringstream out;
  out << fmt_double(eq.W_f) << ',' << fmt_double(eq.W_m) << ','
      << fmt_double(eq.i_fH) << ',' << fmt_double(eq.i_fL) << ','
      << fmt_double(eq.i_mH) << ',' << fmt_double(eq.i_mL) << ','
      << fmt_double(eq.pi_fH) << ',' << fmt_double(eq.pi_fL) << ','
      << fmt_double(eq.pi_mH) << ',' << fmt_double(eq.pi_mL) << ','
      << to_string(eq.stability) << ',' << fmt_double(eq.residual);
  return out.str();
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace matchpool

#endif  // MATCHPOOL_CSV_HPP
