#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kslat/projector.hpp"

namespace kslat {

// Document order matters: it fixes context order and hence search order.
using Json = nlohmann::ordered_json;

/// Tolerance fields that may be set by a document or on the command line.
struct ToleranceOverrides {
  std::optional<double> eps_rank;
  std::optional<double> eps_entry;
  std::optional<double> eps_subspace;

  TolerancePolicy apply(TolerancePolicy base) const {
    if (eps_rank) base.eps_rank = *eps_rank;
    if (eps_entry) base.eps_entry = *eps_entry;
    if (eps_subspace) base.eps_subspace = *eps_subspace;
    return base;
  }
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  parse_fail(where + ": expected a complex number [re, im], got " + j.dump());
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline StateVector vector_from_json(const Json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array()) parse_fail(where + ": expected an array of " + std::to_string(dim) + " complex entries");
  if (static_cast<Eigen::Index>(j.size()) != dim) {
    parse_fail(where + ": has " + std::to_string(j.size()) + " entries, document dim is " + std::to_string(dim));
  }
  StateVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v(i) = complex_from_json(j[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

inline ComplexMatrix matrix_from_json(const Json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    parse_fail(where + ": expected " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    m.row(r) = vector_from_json(j[static_cast<std::size_t>(r)], dim, where + " row " + std::to_string(r)).transpose();
  }
  return m;
}

inline Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double positive_number(const Json& doc, const char* key) {
  const auto& v = doc[key];
  if (!v.is_number()) parse_fail(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace detail

/// Document tolerances layered as defaults < document < overrides.
inline TolerancePolicy document_tolerance(const Json& doc, const ToleranceOverrides& overrides = {}) {
  ToleranceOverrides from_doc;
  if (doc.contains("eps_rank")) from_doc.eps_rank = detail::positive_number(doc, "eps_rank");
  if (doc.contains("eps_entry")) from_doc.eps_entry = detail::positive_number(doc, "eps_entry");
  if (doc.contains("eps_subspace")) from_doc.eps_subspace = detail::positive_number(doc, "eps_subspace");
  auto tol = overrides.apply(from_doc.apply(TolerancePolicy{}));
  try {
    tol.check();
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, "tolerances", e);
  }
  return tol;
}

/// Builds a validated collection from an operator-set document. Structural
/// problems raise ParseError; failed projector or context axioms raise
/// ValidationError whose cause() is the specific violation.
inline ContextCollection parse_document(const Json& doc, const ToleranceOverrides& overrides = {}) {
  if (!doc.is_object()) detail::parse_fail("document must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    detail::parse_fail("'dim' must be a positive integer");
  }
  const auto dim = static_cast<Eigen::Index>(doc["dim"].get<long long>());
  const auto tol = document_tolerance(doc, overrides);

  const bool has_contexts = doc.contains("contexts");
  const bool has_rays = doc.contains("rays");
  if (has_contexts == has_rays) detail::parse_fail("document needs exactly one of 'contexts' or 'rays'");
  if (has_rays && !doc.contains("groups")) detail::parse_fail("'rays' requires 'groups'");
  if (has_contexts && doc.contains("groups")) detail::parse_fail("'groups' is only valid with 'rays'");

  std::vector<MaximalContext> contexts;
  if (has_contexts) {
    const auto& ctxs = doc["contexts"];
    if (!ctxs.is_object() || ctxs.empty()) detail::parse_fail("'contexts' must be a non-empty object");
    for (const auto& [name, mats] : ctxs.items()) {
      if (!mats.is_array() || mats.empty()) detail::parse_fail("context '" + name + "' must be a non-empty array");
      std::vector<ComplexMatrix> parsed;
      for (std::size_t i = 0; i < mats.size(); ++i) {
        parsed.push_back(detail::matrix_from_json(mats[i], dim, "context '" + name + "' matrix " + std::to_string(i)));
      }
      try {
        std::vector<Projector> members;
        for (std::size_t i = 0; i < parsed.size(); ++i) {
          members.push_back(Projector::validate(parsed[i], tol, name + "." + std::to_string(i + 1)));
        }
        contexts.push_back(MaximalContext::validate(std::move(members), tol, name));
      } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, "context '" + name + "'", e);
      }
    }
  } else {
    const auto& rays = doc["rays"];
    const auto& groups = doc["groups"];
    if (!rays.is_object() || rays.empty()) detail::parse_fail("'rays' must be a non-empty object");
    if (!groups.is_object() || groups.empty()) detail::parse_fail("'groups' must be a non-empty object");
    std::vector<std::pair<std::string, StateVector>> declared;
    for (const auto& [name, v] : rays.items()) {
      declared.emplace_back(name, detail::vector_from_json(v, dim, "ray '" + name + "'"));
    }
    auto lookup = [&](const std::string& ray) -> const StateVector& {
      for (const auto& [n, v] : declared) {
        if (n == ray) return v;
      }
      detail::parse_fail("group references undeclared ray '" + ray + "'");
    };
    for (const auto& [name, members] : groups.items()) {
      if (!members.is_array() || members.empty()) detail::parse_fail("group '" + name + "' must be a non-empty array");
      std::vector<StateVector> basis;
      std::vector<std::string> labels;
      for (const auto& r : members) {
        if (!r.is_string()) detail::parse_fail("group '" + name + "' must list ray names");
        const auto ray = r.get<std::string>();
        const StateVector& v = lookup(ray);
        const double norm = v.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) {
          throw Error(ErrorKind::ValidationError, "ray '" + ray + "' cannot be normalized");
        }
        basis.push_back(v / norm);
        labels.push_back(ray);
      }
      try {
        contexts.push_back(context_from_basis(basis, tol, name, labels));
      } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, "group '" + name + "'", e);
      }
    }
  }
  return ContextCollection::build(std::move(contexts), tol);
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::parse_fail("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    detail::parse_fail("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline ContextCollection ingest(const std::filesystem::path& path, const ToleranceOverrides& overrides = {}) {
  return parse_document(read_json_file(path), overrides);
}

/// Matrix-form document of a collection. Matrices are written verbatim and
/// doubles keep round-trip precision, so parse_document(emit(c)) restores c.
inline Json emit(const ContextCollection& collection) {
  Json doc;
  doc["dim"] = collection.ambient_dim();
  doc["eps_rank"] = collection.tolerance().eps_rank;
  doc["eps_entry"] = collection.tolerance().eps_entry;
  doc["eps_subspace"] = collection.tolerance().eps_subspace;
  Json ctxs = Json::object();
  for (const auto& c : collection.contexts()) {
    Json mats = Json::array();
    for (const auto& p : c.members()) mats.push_back(detail::matrix_to_json(p.matrix()));
    ctxs[c.id()] = std::move(mats);
  }
  doc["contexts"] = std::move(ctxs);
  return doc;
}

/// Parses "re,im;re,im;..." into a state vector. An entry without a comma is
/// read as a real number.
inline StateVector parse_state(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto number = [&](std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      detail::parse_fail("bad number '" + std::string(s) + "' in state");
    }
    return x;
  };
  std::vector<Complex> entries;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(';', start), text.size());
    const auto item = trim(text.substr(start, end - start));
    if (item.empty()) detail::parse_fail("empty entry in state '" + std::string(text) + "'");
    const auto comma = item.find(',');
    if (comma == std::string_view::npos) {
      entries.emplace_back(number(item), 0.0);
    } else {
      entries.emplace_back(number(item.substr(0, comma)), number(item.substr(comma + 1)));
    }
    start = end + 1;
  }
  StateVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return v;
}

}  // namespace kslat
