#pragma once

// JSON and CSV wire formats shared by the command-line tool and tests.
//
//   matrix       {"rows": r, "cols": c, "data": [[re, im], ...]}  row-major
//   ratfun       {"m": m, "entries": [[{"num": [...], "den": [...]}, ...]]}
//                ascending real coefficients
//   realization  {"n": n, "m": m, "A": <matrix>, ..., "D": <matrix>}
//   circuit      {"topology": "series-shunt-rc"|"lossless-ladder",
//                 "values": {...}}  (aliases "fig2"/"fig3" accepted)
//   system       {"matrices": [<matrix>, ...], "H": <matrix>?}
//   trajectory   CSV with columns t, x_1_re, x_1_im, ..., norm
//
// Parsing failures throw Error; serialization is deterministic (keys are
// emitted sorted, numbers use shortest round-trip form).

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcic/cones.hpp"
#include "mcic/incsim.hpp"
#include "mcic/kyp.hpp"
#include "mcic/matcore.hpp"
#include "mcic/network.hpp"
#include "mcic/rational.hpp"
#include "mcic/realization.hpp"

namespace mcic {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Matrix matrix_from_json(const Json& j) {
  require(j.is_object() && j.contains("rows") && j.contains("cols") &&
              j.contains("data"),
          "matrix JSON: need rows, cols, data");
  Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  require(rows >= 0 && cols >= 0, "matrix JSON: negative shape");
  const Json& data = j.at("data");
  require(data.is_array() && Eigen::Index(data.size()) == rows * cols,
          "matrix JSON: data length must be rows*cols");
  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index jj = 0; jj < cols; ++jj, ++k) {
      const Json& cell = data.at(size_t(k));
      if (cell.is_array()) {
        require(cell.size() == 2, "matrix JSON: entries are [re, im] pairs");
        m(i, jj) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
      } else if (cell.is_number()) {
        m(i, jj) = Complex(cell.get<double>(), 0.0);
      } else {
        throw Error("matrix JSON: entries are [re, im] pairs or numbers");
      }
    }
  }
  require_finite(m, "matrix JSON");
  return m;
}

inline Json polynomial_to_json(const Polynomial& p) {
  Json arr = Json::array();
  if (p.is_zero()) {
    arr.push_back(0.0);
    return arr;
  }
  for (int k = 0; k <= p.degree(); ++k) arr.push_back(p.coeff(k));
  return arr;
}

inline Polynomial polynomial_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "polynomial JSON: non-empty array");
  std::vector<double> c;
  c.reserve(j.size());
  for (const Json& v : j) {
    require(v.is_number(), "polynomial JSON: numeric coefficients");
    c.push_back(v.get<double>());
  }
  return Polynomial(c);
}

inline Json rational_to_json(const Rational& r) {
  return Json{{"num", polynomial_to_json(r.num())},
              {"den", polynomial_to_json(r.den())}};
}

inline Rational rational_from_json(const Json& j) {
  require(j.is_object() && j.contains("num") && j.contains("den"),
          "rational JSON: need num and den");
  return Rational(polynomial_from_json(j.at("num")),
                  polynomial_from_json(j.at("den")));
}

inline Json rational_matrix_to_json(const RationalMatrix& f) {
  Json rows = Json::array();
  for (int i = 0; i < f.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < f.size(); ++j) row.push_back(rational_to_json(f.at(i, j)));
    rows.push_back(row);
  }
  return Json{{"m", f.size()}, {"entries", rows}};
}

inline RationalMatrix rational_matrix_from_json(const Json& j) {
  require(j.is_object() && j.contains("m") && j.contains("entries"),
          "ratfun JSON: need m and entries");
  int m = j.at("m").get<int>();
  require(m >= 1, "ratfun JSON: m must be positive");
  const Json& entries = j.at("entries");
  require(entries.is_array() && int(entries.size()) == m,
          "ratfun JSON: entries must have m rows");
  RationalMatrix f(m);
  for (int i = 0; i < m; ++i) {
    const Json& row = entries.at(size_t(i));
    require(row.is_array() && int(row.size()) == m,
            "ratfun JSON: each row must have m entries");
    for (int jj = 0; jj < m; ++jj) {
      f.at(i, jj) = rational_from_json(row.at(size_t(jj)));
    }
  }
  return f;
}

inline Json realization_to_json(const Realization& r) {
  return Json{{"n", r.n},
              {"m", r.m},
              {"A", matrix_to_json(r.A)},
              {"B", matrix_to_json(r.B)},
              {"C", matrix_to_json(r.C)},
              {"D", matrix_to_json(r.D)}};
}

inline Realization realization_from_json(const Json& j) {
  require(j.is_object() && j.contains("n") && j.contains("m") &&
              j.contains("A") && j.contains("B") && j.contains("C") &&
              j.contains("D"),
          "realization JSON: need n, m, A, B, C, D");
  Realization r;
  r.n = j.at("n").get<int>();
  r.m = j.at("m").get<int>();
  r.A = matrix_from_json(j.at("A"));
  r.B = matrix_from_json(j.at("B"));
  r.C = matrix_from_json(j.at("C"));
  r.D = matrix_from_json(j.at("D"));
  r.validate();
  return r;
}

inline Json circuit_to_json(const CircuitSpec& spec) {
  Json values;
  if (spec.topology == CircuitSpec::Topology::SeriesShuntRc) {
    values = Json{{"r1", spec.r1}, {"r2", spec.r2}, {"c", spec.c}};
    return Json{{"topology", "series-shunt-rc"}, {"values", values}};
  }
  values = Json{
      {"ca", spec.ca}, {"lb", spec.lb}, {"lc", spec.lc}, {"cd", spec.cd}};
  return Json{{"topology", "lossless-ladder"}, {"values", values}};
}

inline CircuitSpec circuit_from_json(const Json& j) {
  require(j.is_object() && j.contains("topology"),
          "circuit JSON: need topology");
  std::string topo = j.at("topology").get<std::string>();
  Json values = j.value("values", Json::object());
  CircuitSpec spec;
  if (topo == "series-shunt-rc" || topo == "fig2") {
    spec.topology = CircuitSpec::Topology::SeriesShuntRc;
    spec.r1 = values.value("r1", 1.0);
    spec.r2 = values.value("r2", 1.0);
    spec.c = values.value("c", 1.0);
  } else if (topo == "lossless-ladder" || topo == "fig3") {
    spec.topology = CircuitSpec::Topology::LosslessLadder;
    spec.ca = values.value("ca", 1.0);
    spec.lb = values.value("lb", 1.0);
    spec.lc = values.value("lc", 1.0);
    spec.cd = values.value("cd", 1.0);
  } else {
    throw Error("circuit JSON: unknown topology '" + topo + "'");
  }
  return spec;
}

inline Json system_to_json(const SwitchedSystem& sys) {
  Json mats = Json::array();
  for (const Matrix& a : sys.matrices) mats.push_back(matrix_to_json(a));
  Json j{{"matrices", mats}};
  if (sys.H) j["H"] = matrix_to_json(*sys.H);
  return j;
}

inline SwitchedSystem system_from_json(const Json& j) {
  require(j.is_object() && j.contains("matrices"),
          "system JSON: need matrices");
  SwitchedSystem sys;
  const Json& mats = j.at("matrices");
  require(mats.is_array() && !mats.empty(),
          "system JSON: matrices must be a non-empty array");
  for (const Json& m : mats) sys.matrices.push_back(matrix_from_json(m));
  if (j.contains("H")) sys.H = matrix_from_json(j.at("H"));
  sys.validate();
  return sys;
}

inline Json membership_to_json(const ConeMembership& m) {
  return Json{{"in_open", m.in_open},
              {"in_closed", m.in_closed},
              {"min_eig", m.min_eig},
              {"certificate", matrix_to_json(m.certificate)}};
}

inline Json definiteness_to_json(const DefinitenessVerdict& v) {
  return Json{{"kind", to_string(v.kind)},
              {"min_eig", v.min_eig},
              {"max_eig", v.max_eig}};
}

inline Json certificate_to_json(const KypCertificate& c) {
  return Json{{"H", matrix_to_json(c.H)},
              {"Q", matrix_to_json(c.Q)},
              {"verdict", definiteness_to_json(c.verdict)},
              {"valid", c.valid}};
}

inline Json envelope_to_json(const EnvelopeReport& r) {
  Json viols = Json::array();
  for (const EnvelopeViolation& v : r.violations) {
    viols.push_back(Json{{"t0", v.t0}, {"t", v.t}, {"ratio", v.ratio}});
  }
  return Json{{"alpha", r.alpha},
              {"beta", r.beta},
              {"max_ratio", r.max_ratio},
              {"violations", viols}};
}

// CSV columns: t, x_1_re, x_1_im, ..., x_n_re, x_n_im, norm.
inline void trajectory_to_csv(const Trajectory& traj, std::ostream& os) {
  size_t n = traj.states.empty() ? 0 : size_t(traj.states.front().size());
  os << "t";
  for (size_t i = 1; i <= n; ++i) {
    os << ",x_" << i << "_re,x_" << i << "_im";
  }
  os << ",norm\n";
  os.precision(17);
  for (size_t k = 0; k < traj.times.size(); ++k) {
    os << traj.times[k];
    for (size_t i = 0; i < n; ++i) {
      os << ',' << traj.states[k](Eigen::Index(i)).real() << ','
         << traj.states[k](Eigen::Index(i)).imag();
    }
    os << ',' << traj.norms[k] << '\n';
  }
}

}  // namespace mcic
