#pragma once

// JSON schemas for the CLI: matrices as {rows, cols, data} with [re, im]
// entry pairs, vectors as arrays of pairs, plus group / multiplier /
// representation / channel / measurement-model readers. Reports are emitted
// through a deterministic writer that renders every float with 17
// significant digits, so identical inputs produce byte-identical output.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <json.hpp>

#include "channels.hpp"
#include "group.hpp"
#include "multiplier.hpp"
#include "way.hpp"

namespace ssr {

inline constexpr std::string_view kToolName = "ssrlab";
inline constexpr std::string_view kToolVersion = "0.1.0";

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---- parsing ----

inline cplx parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("expected a complex entry as [re, im]");
  const cplx v(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw ShapeError("non-finite complex entry");
  return v;
}

inline Matrix parse_matrix(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw std::invalid_argument("expected a matrix object with rows, cols, data");
  const auto rows = j.at("rows").get<std::int64_t>();
  const auto cols = j.at("cols").get<std::int64_t>();
  if (rows <= 0 || cols <= 0 || rows > static_cast<std::int64_t>(kMaxDim) || cols > static_cast<std::int64_t>(kMaxDim))
    throw ShapeError("matrix dimensions out of range");
  const auto& data = j.at("data");
  if (!data.is_array() || data.size() != static_cast<std::size_t>(rows)) throw ShapeError("matrix data has wrong row count");
  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto& row = data[i];
    if (!row.is_array() || row.size() != m.cols()) throw ShapeError("matrix data has wrong column count");
    for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = parse_complex(row[k]);
  }
  return m;
}

inline Matrix parse_state_vector(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a state vector as an array of [re, im] pairs");
  Matrix v(j.size(), 1);
  for (std::size_t i = 0; i < j.size(); ++i) v(i, 0) = parse_complex(j[i]);
  return v;
}

inline FiniteGroup parse_group(const json& j) {
  if (!j.is_object() || !j.contains("order") || !j.contains("table"))
    throw std::invalid_argument("expected a group object with order and table");
  const auto order = j.at("order").get<std::int64_t>();
  const auto& tj = j.at("table");
  if (order <= 0 || !tj.is_array() || tj.size() != static_cast<std::size_t>(order))
    throw ShapeError("group table size disagrees with order");
  std::vector<std::vector<std::size_t>> table;
  for (const auto& row : tj) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(order)) throw ShapeError("group table row size mismatch");
    std::vector<std::size_t> r;
    for (const auto& v : row) {
      const auto x = v.get<std::int64_t>();
      if (x < 0) throw std::invalid_argument("group table entries must be nonnegative indices");
      r.push_back(static_cast<std::size_t>(x));
    }
    table.push_back(std::move(r));
  }
  return FiniteGroup::from_table(std::move(table));
}

inline Multiplier parse_multiplier(const json& j, const FiniteGroup& g) {
  if (!j.is_array() || j.size() != g.order) throw ShapeError("multiplier table size disagrees with group order");
  std::vector<std::vector<cplx>> vals;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != g.order) throw ShapeError("multiplier table row size mismatch");
    std::vector<cplx> r;
    for (const auto& v : row) r.push_back(parse_complex(v));
    vals.push_back(std::move(r));
  }
  return Multiplier::from_values(g, std::move(vals));
}

inline ProjectiveRep parse_projective_rep(const json& j, const FiniteGroup& g) {
  if (!j.is_object() || !j.contains("unitaries")) throw std::invalid_argument("expected a rep object with unitaries");
  const auto& us = j.at("unitaries");
  if (!us.is_array() || us.size() != g.order) throw ShapeError("rep needs one unitary per group element");
  std::vector<Matrix> mats;
  for (const auto& u : us) mats.push_back(parse_matrix(u));
  return ProjectiveRep::from_unitaries(g, std::move(mats));
}

inline UnitaryGroupRep parse_unitary_rep(const json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("unitaries"))
    throw std::invalid_argument("expected a rep object with group and unitaries");
  const FiniteGroup g = parse_group(j.at("group"));
  const auto& us = j.at("unitaries");
  if (!us.is_array() || us.size() != g.order) throw ShapeError("rep needs one unitary per group element");
  std::vector<Matrix> mats;
  for (const auto& u : us) mats.push_back(parse_matrix(u));
  return UnitaryGroupRep::from_unitaries(g, std::move(mats));
}

inline QuantumChannel parse_channel(const json& j) {
  if (!j.is_object() || !j.contains("kraus")) throw std::invalid_argument("expected a channel object with kraus");
  const auto& ks = j.at("kraus");
  if (!ks.is_array() || ks.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  std::vector<Matrix> mats;
  for (const auto& k : ks) mats.push_back(parse_matrix(k));
  std::vector<double> signs;
  if (j.contains("signs"))
    for (const auto& s : j.at("signs")) signs.push_back(s.get<double>());
  return QuantumChannel::from_kraus(std::move(mats), std::move(signs));
}

inline MeasurementModel parse_measurement_model(const json& j) {
  for (const char* key : {"P", "Q_S", "Q_A", "U", "s_states", "a_states", "a0"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("measurement model: missing field ") + key);
  MeasurementModel m;
  m.observable = parse_matrix(j.at("P"));
  m.u = parse_matrix(j.at("U"));
  m.neutral_pointer = parse_state_vector(j.at("a0"));
  for (const auto& s : j.at("s_states")) m.system_states.push_back(parse_state_vector(s));
  for (const auto& a : j.at("a_states")) m.pointer_states.push_back(parse_state_vector(a));
  for (const auto& s : m.system_states) {
    if (s.rows() != m.observable.rows()) throw ShapeError("measurement model: system state dimension mismatch");
    m.eigenvalues.push_back(hs_inner(s, m.observable * s).real());
  }
  return m;
}

// ---- serialization ----

inline ojson complex_to_json(cplx v) { return ojson::array({v.real(), v.imag()}); }

inline ojson matrix_to_json(const Matrix& m) {
  ojson j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  ojson data = ojson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    data.push_back(std::move(row));
  }
  j["data"] = std::move(data);
  return j;
}

inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

namespace detail {

inline std::string format_double_17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void escape_into(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

inline void dump_into(std::string& out, const ojson& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string pad_close(static_cast<std::size_t>(indent) * depth, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        escape_into(out, it.key());
        out += ": ";
        dump_into(out, it.value(), indent, depth + 1);
      }
      out += "\n" + pad_close + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line, nested structures get one
      // element per line
      bool scalar_only = true;
      for (const auto& v : j) scalar_only = scalar_only && !v.is_structured();
      if (scalar_only) {
        out += "[";
        bool first = true;
        for (const auto& v : j) {
          if (!first) out += ", ";
          first = false;
          dump_into(out, v, indent, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_into(out, v, indent, depth + 1);
      }
      out += "\n" + pad_close + "]";
      return;
    }
    case ojson::value_t::string: escape_into(out, j.get_ref<const std::string&>()); return;
    case ojson::value_t::boolean: out += j.get<bool>() ? "true" : "false"; return;
    case ojson::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); return;
    case ojson::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); return;
    case ojson::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw NumericalError("report serialization: non-finite number");
      out += format_double_17(v);
      return;
    }
    case ojson::value_t::null: out += "null"; return;
    default: throw NumericalError("report serialization: unsupported value type");
  }
}

}  // namespace detail

inline std::string dump_report(const ojson& j) {
  std::string out;
  detail::dump_into(out, j, 2, 0);
  out += "\n";
  return out;
}

}  // namespace ssr
