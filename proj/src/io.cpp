#include "tropk/io.hpp"

#include <cmath>
#include <iomanip>

namespace tropk::io {

json to_json(ExtReal v) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  return v.value();
}

json to_json(const std::vector<ExtReal>& v) {
  json out = json::array();
  for (auto x : v) out.push_back(to_json(x));
  return out;
}

json to_json(const ExtMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const Point& p) { return p.size() == 1 ? json(p[0]) : json(p); }

json to_json(const PointSet& ps) {
  json out = json::array();
  for (const auto& p : ps.points()) out.push_back(to_json(p));
  return out;
}

const json& at(const json& doc, const std::string& pointer) {
  const json::json_pointer ptr(pointer);
  if (!doc.contains(ptr)) throw schema_error(pointer, "missing field");
  return doc.at(ptr);
}

bool has(const json& doc, const std::string& pointer) { return doc.contains(json::json_pointer(pointer)); }

namespace {

ExtReal ext_value(const json& v, const std::string& pointer) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (std::isnan(d)) throw schema_error(pointer, "NaN is not allowed");
    return d;
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return ExtReal::pos_inf();
    if (s == "-inf") return ExtReal::neg_inf();
  }
  throw schema_error(pointer, "expected a number, \"inf\" or \"-inf\"");
}

const json& array_at(const json& doc, const std::string& pointer) {
  const json& a = at(doc, pointer);
  if (!a.is_array()) throw schema_error(pointer, "expected an array");
  return a;
}

}  // namespace

ExtReal ext_from_json(const json& doc, const std::string& pointer) { return ext_value(at(doc, pointer), pointer); }

double finite_from_json(const json& doc, const std::string& pointer) {
  const ExtReal v = ext_from_json(doc, pointer);
  if (!v.is_finite()) throw schema_error(pointer, "expected a finite number");
  return v.value();
}

std::vector<double> finite_list_from_json(const json& doc, const std::string& pointer) {
  const json& a = array_at(doc, pointer);
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(finite_from_json(doc, pointer + "/" + std::to_string(i)));
  return out;
}

std::vector<ExtReal> ext_list_from_json(const json& doc, const std::string& pointer) {
  const json& a = array_at(doc, pointer);
  std::vector<ExtReal> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(ext_value(a[i], pointer + "/" + std::to_string(i)));
  return out;
}

ExtMatrix matrix_from_json(const json& doc, const std::string& pointer) {
  const json& a = array_at(doc, pointer);
  if (a.empty()) throw schema_error(pointer, "matrix must have at least one row");
  const std::size_t cols = array_at(doc, pointer + "/0").size();
  ExtMatrix m(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string row = pointer + "/" + std::to_string(i);
    const json& r = array_at(doc, row);
    if (r.size() != cols) throw schema_error(row, "rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = ext_value(r[j], row + "/" + std::to_string(j));
  }
  return m;
}

PointSet points_from_json(const json& doc, const std::string& pointer, bool spacetime) {
  const json& a = array_at(doc, pointer);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string p = pointer + "/" + std::to_string(i);
    if (a[i].is_array())
      pts.push_back(finite_list_from_json(doc, p));
    else
      pts.push_back({finite_from_json(doc, p)});
  }
  try {
    return PointSet(std::move(pts), spacetime);
  } catch (const std::domain_error& e) {
    throw schema_error(pointer, e.what());
  }
}

void write_csv(std::ostream& os, const GridFunction& f, const std::vector<std::string>& coord_names) {
  const PointSet& d = *f.domain();
  for (std::size_t k = 0; k < d.dim(); ++k)
    os << (k < coord_names.size() ? coord_names[k] : "x" + std::to_string(k)) << ',';
  os << "value\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (double c : d[i]) os << c << ',';
    os << f[i].to_string() << '\n';
  }
}

}  // namespace tropk::io
