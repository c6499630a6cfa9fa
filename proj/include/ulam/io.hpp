#pragma once

// JSON and CSV conversions for the lab's value types, plus group descriptors.
//
// Operators are {"dim": d, "re": rows, "im": rows}; "im" may be omitted and a
// bare number is read as a 1x1 operator. Groups are named by short strings
// ("Z6", "D4", "S3", "Z2xZ4", "F2", "Z^2") or by descriptor objects such as
// {"kind": "cyclic", "n": 6} or {"kind": "table", "table": [[...]]}.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ulam/group.hpp"
#include "ulam/hull.hpp"
#include "ulam/operator.hpp"
#include "ulam/rep_maps.hpp"

namespace ulam {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Operators and vectors

inline Json operator_to_json(const Operator& a) {
  const auto& m = a.matrix();
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"dim", a.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Operator operator_from_json(const Json& j) {
  if (j.is_number()) return Operator::scalar(Complex(j.get<double>(), 0.0));
  if (!j.is_object() || !j.contains("re")) throw InvalidInput("operator must be a number or an object with \"re\"");
  for (const auto& [k, v] : j.items())
    if (k != "dim" && k != "re" && k != "im") throw InvalidInput("unknown operator field \"" + k + "\"");
  const Json& re = j.at("re");
  if (!re.is_array() || re.empty()) throw InvalidInput("operator \"re\" must be a nonempty array of rows");
  const auto d = static_cast<Eigen::Index>(re.size());
  if (j.contains("dim") && j.at("dim").get<Eigen::Index>() != d) throw InvalidInput("operator \"dim\" disagrees with its rows");
  CMatrix m = CMatrix::Zero(d, d);
  auto fill = [&](const Json& rows, bool imag) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != d)
      throw InvalidInput("operator rows must form a square matrix");
    for (Eigen::Index r = 0; r < d; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
        throw InvalidInput("operator rows must form a square matrix");
      for (Eigen::Index c = 0; c < d; ++c) {
        const double v = row[static_cast<std::size_t>(c)].get<double>();
        if (imag) m(r, c).imag(v);
        else m(r, c).real(v);
      }
    }
  };
  fill(re, false);
  if (j.contains("im")) fill(j.at("im"), true);
  return Operator(m);
}

inline Json vector_to_json(const CVector& v) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline Json rvector_to_json(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline RVector rvector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("vector must be a nonempty array of numbers");
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

// ---------------------------------------------------------------------------
// Reports

inline Json psd_to_json(const PsdReport& p) {
  return Json{{"min_eigenvalue", p.min_eigenvalue},
              {"tolerance", p.tolerance},
              {"psd", p.verdict},
              {"relative_asymmetry", p.asymmetry}};
}

template <class E>
Json defect_to_json(const DefectReport<E>& d) {
  Json out{{"epsilon", d.epsilon}, {"pairs_scanned", d.pairs_scanned}, {"pairs_excluded", d.pairs_excluded}};
  if (d.argmax_pair)
    out["argmax_pair"] = Json::array({format_element(d.argmax_pair->first), format_element(d.argmax_pair->second)});
  else
    out["argmax_pair"] = nullptr;
  if (!d.domain_note.empty()) out["domain_note"] = d.domain_note;
  return out;
}

inline Json hull_to_json(const HullResult& h, std::size_t n_points) {
  Json out{{"member", h.member},
           {"distance", h.distance},
           {"weights", h.dense_weights(n_points)},
           {"projection", rvector_to_json(h.projection)},
           {"iterations", h.iterations},
           {"method", h.method}};
  out["witness"] = h.witness ? rvector_to_json(*h.witness) : Json(nullptr);
  return out;
}

inline Json point_set_to_json(const PointSet& ps) {
  Json pts = Json::array();
  for (const auto& p : ps.points()) pts.push_back(rvector_to_json(p));
  return Json{{"ambient_dim", ps.ambient_dim()}, {"points", std::move(pts)}};
}

inline PointSet point_set_from_json(const Json& j) {
  const Json& pts = j.is_array() ? j : j.at("points");
  std::vector<RVector> out;
  for (const auto& p : pts) out.push_back(rvector_from_json(p));
  PointSet ps(std::move(out));
  if (j.is_object() && j.contains("ambient_dim") && j.at("ambient_dim").get<int>() != ps.ambient_dim())
    throw InvalidInput("\"ambient_dim\" disagrees with the points");
  return ps;
}

// ---------------------------------------------------------------------------
// Groups

using AnyGroup = std::variant<FiniteGroup, FreeGroup, IntegerLattice>;

/// Reads a multiplication table: JSON ({"table": rows} or a bare array of
/// rows) or plain text, "n" followed by n rows of n integers.
inline FiniteGroup load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open table file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  std::vector<std::vector<int>> table;
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    const Json j = Json::parse(text);
    table = (j.is_object() ? j.at("table") : j).get<std::vector<std::vector<int>>>();
  } else {
    std::istringstream ss(text);
    int n = 0;
    if (!(ss >> n) || n <= 0) throw InvalidInput("table file must start with a positive order");
    table.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (auto& row : table)
      for (auto& v : row)
        if (!(ss >> v)) throw InvalidInput("table file ended early");
    std::string rest;
    if (ss >> rest) throw InvalidInput("table file has trailing entries");
  }
  return FiniteGroup::from_table(table);
}

namespace detail {

inline int parse_positive(const std::string& s, const std::string& whole) {
  if (s.empty() || s.size() > 6) throw InvalidInput("bad group name \"" + whole + "\"");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) throw InvalidInput("bad group name \"" + whole + "\"");
  const int n = std::stoi(s);
  if (n <= 0) throw InvalidInput("bad group name \"" + whole + "\"");
  return n;
}

inline FiniteGroup finite_from_name(const std::string& name) {
  if (const auto x = name.find('x'); x != std::string::npos)
    return FiniteGroup::direct_product(finite_from_name(name.substr(0, x)), finite_from_name(name.substr(x + 1)));
  if (name.size() < 2) throw InvalidInput("bad group name \"" + name + "\"");
  const int n = parse_positive(name.substr(1), name);
  switch (name[0]) {
    case 'Z': return FiniteGroup::cyclic(n);
    case 'D': return FiniteGroup::dihedral(n);
    case 'S': return FiniteGroup::symmetric(n);
    default: throw InvalidInput("bad group name \"" + name + "\"");
  }
}

}  // namespace detail

inline AnyGroup parse_group(const Json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name.rfind("Z^", 0) == 0) return IntegerLattice(detail::parse_positive(name.substr(2), name));
    if (name.size() > 1 && name[0] == 'F') return FreeGroup(detail::parse_positive(name.substr(1), name));
    return detail::finite_from_name(name);
  }
  if (!j.is_object() || !j.contains("kind")) throw InvalidInput("group descriptor must be a name or an object with \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : j.items()) {
      bool ok = k == "kind";
      for (const char* key : keys) ok = ok || k == key;
      if (!ok) throw InvalidInput("unknown field \"" + k + "\" in " + kind + " group descriptor");
    }
  };
  if (kind == "cyclic") {
    only({"n"});
    return FiniteGroup::cyclic(j.at("n").get<int>());
  }
  if (kind == "dihedral") {
    only({"n"});
    return FiniteGroup::dihedral(j.at("n").get<int>());
  }
  if (kind == "symmetric") {
    only({"n"});
    return FiniteGroup::symmetric(j.at("n").get<int>());
  }
  if (kind == "product") {
    only({"factors"});
    const Json& f = j.at("factors");
    if (!f.is_array() || f.size() < 2) throw InvalidInput("product needs at least two factors");
    auto as_finite = [](AnyGroup g) {
      if (auto* p = std::get_if<FiniteGroup>(&g)) return *p;
      throw InvalidInput("product factors must be finite groups");
    };
    FiniteGroup acc = as_finite(parse_group(f[0]));
    for (std::size_t i = 1; i < f.size(); ++i) acc = FiniteGroup::direct_product(acc, as_finite(parse_group(f[i])));
    return acc;
  }
  if (kind == "table") {
    only({"table", "path"});
    if (j.contains("path")) return load_table(j.at("path").get<std::string>());
    return FiniteGroup::from_table(j.at("table").get<std::vector<std::vector<int>>>());
  }
  if (kind == "free") {
    only({"rank"});
    return FreeGroup(j.at("rank").get<int>());
  }
  if (kind == "lattice") {
    only({"dim"});
    return IntegerLattice(j.at("dim").get<int>());
  }
  throw InvalidInput("unknown group kind \"" + kind + "\"");
}

inline Json group_to_json(const FiniteGroup& g) { return Json{{"kind", "finite"}, {"name", g.name()}, {"order", g.order()}}; }
inline Json group_to_json(const FreeGroup& g) { return Json{{"kind", "free"}, {"rank", g.rank()}}; }
inline Json group_to_json(const IntegerLattice& g) { return Json{{"kind", "lattice"}, {"dim", g.dim()}}; }

// ---------------------------------------------------------------------------
// Elements

inline int element_from_json(const FiniteGroup& g, const Json& j) {
  const int x = j.get<int>();
  if (!g.contains(x)) throw InvalidInput("element " + std::to_string(x) + " outside " + g.name());
  return x;
}

inline Word element_from_json(const FreeGroup& g, const Json& j) {
  Word w = parse_word(j.get<std::string>());
  if (!g.contains(w)) throw InvalidInput("word uses a generator beyond the group's rank");
  return w;
}

inline Point element_from_json(const IntegerLattice& g, const Json& j) {
  auto p = j.get<Point>();
  if (!g.contains(p)) throw InvalidInput("lattice point has the wrong dimension");
  return p;
}

inline Json element_to_json(int x) { return x; }
inline Json element_to_json(const Word& w) { return format_element(w); }
inline Json element_to_json(const Point& p) { return p; }

// ---------------------------------------------------------------------------
// Operator maps

template <Group G>
Json map_to_json(const OperatorMap<G>& m) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i)
    entries.push_back(Json{{"element", element_to_json(m.domain()[i])}, {"operator", operator_to_json(m.values()[i])}});
  return Json{{"group", group_to_json(m.group())}, {"dim", m.dim()}, {"entries", std::move(entries)}};
}

template <Group G>
OperatorMap<G> map_from_json(const G& g, const Json& j) {
  for (const auto& [k, v] : j.items())
    if (k != "group" && k != "dim" && k != "entries") throw InvalidInput("unknown operator-map field \"" + k + "\"");
  std::vector<Element<G>> domain;
  std::vector<Operator> values;
  for (const auto& e : j.at("entries")) {
    domain.push_back(element_from_json(g, e.at("element")));
    values.push_back(operator_from_json(e.at("operator")));
  }
  OperatorMap<G> m(g, std::move(domain), std::move(values));
  if (j.contains("dim") && j.at("dim").get<int>() != m.dim()) throw InvalidInput("operator-map \"dim\" disagrees with its entries");
  return m;
}

// ---------------------------------------------------------------------------
// CSV

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cells[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

}  // namespace ulam
