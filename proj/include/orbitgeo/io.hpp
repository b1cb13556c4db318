#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "orbitgeo/orbit.hpp"

namespace orbitgeo::io {

using json = nlohmann::json;

/// Decimal with 17 significant digits.
inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_string(std::ostream& os, const std::string& s) { os << json(s).dump(); }

inline void write(std::ostream& os, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        write_string(os, it.key());
        os << ':';
        write(os, it.value());
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ',';
        write(os, j[i]);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float: os << format_number(j.get<double>()); break;
    default: os << j.dump(); break;
  }
}

inline json matrix_rows(const Matrix& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(imag ? m(i, k).imag() : m(i, k).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string("expected a number in ") + what);
  return j.get<double>();
}

inline void read_rows(const json& rows, Matrix& m, bool imag, const char* key) {
  const Eigen::Index n = m.rows();
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
    throw ParseError(std::string(key) + ": expected " + std::to_string(n) + " rows");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError(std::string(key) + ": expected " + std::to_string(n) + " columns");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const double v = number(row[k], key);
      if (imag) {
        m(i, k).imag(v);
      } else {
        m(i, k).real(v);
      }
    }
  }
}

}  // namespace detail

/// Serialized with 17 significant digits, no whitespace.
inline std::string dump(const json& j) {
  std::ostringstream os;
  detail::write(os, j);
  return os.str();
}

inline json to_json(const UnitizedOperator& x) {
  return {{"dim", x.dim()},
          {"scalar", {x.scalar().real(), x.scalar().imag()}},
          {"part_re", detail::matrix_rows(x.part(), false)},
          {"part_im", detail::matrix_rows(x.part(), true)}};
}

/// A plain matrix in the shared format (scalar 0).
inline json matrix_to_json(const Matrix& m) { return to_json(UnitizedOperator::pure(m)); }

inline UnitizedOperator operator_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("matrix: expected a JSON object");
  for (const char* key : {"dim", "scalar", "part_re", "part_im"}) {
    if (!j.contains(key)) throw ParseError(std::string("matrix: missing key '") + key + "'");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw ParseError("matrix: 'dim' must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(j["dim"].get<long long>());
  const json& s = j["scalar"];
  if (!s.is_array() || s.size() != 2) throw ParseError("matrix: 'scalar' must be [re, im]");
  Matrix part = Matrix::Zero(n, n);
  detail::read_rows(j["part_re"], part, false, "part_re");
  detail::read_rows(j["part_im"], part, true, "part_im");
  return {Complex(detail::number(s[0], "scalar"), detail::number(s[1], "scalar")), part};
}

/// Validated with structural tolerance 1e-12 and returned exactly Hermitian.
inline UnitizedOperator hermitian_from_json(const json& j) {
  const UnitizedOperator x = operator_from_json(j);
  if (!x.is_hermitian(kStructuralTol)) throw NotHermitian("matrix: input is not Hermitian");
  return x.hermitian_part();
}

inline PositivePoint positive_from_json(const json& j) { return PositivePoint(hermitian_from_json(j)); }

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

/// {"base": matrix, "g": matrix}; the base is read as a Hermitian realization
/// and the unitary g as the realization of its pair.
inline OrbitPoint orbit_point_from_json(const json& j) {
  if (!j.is_object() || !j.contains("base") || !j.contains("g")) {
    throw ParseError("orbit point: expected keys 'base' and 'g'");
  }
  const Matrix a = hermitian_from_json(j["base"]).realize();
  return {FiniteSpectrumHermitian::from_matrix(a), operator_from_json(j["g"]).realize()};
}

inline json to_json(const OrbitPoint& p, double spectrum_drift, double commutation) {
  return {{"base", matrix_to_json(p.base().matrix())},
          {"g", matrix_to_json(p.g())},
          {"certificates", {{"spectrum_drift", spectrum_drift}, {"commutation", commutation}}}};
}

}  // namespace orbitgeo::io
