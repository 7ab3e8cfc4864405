#pragma once

// JSON and CSV encoding. Infinities travel as the strings "inf" and "-inf".

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tropk/grid.hpp"
#include "tropk/matrix.hpp"

namespace tropk::io {

using json = nlohmann::json;

/// Input does not match the expected schema; `pointer` is a JSON pointer.
class schema_error : public std::runtime_error {
 public:
  schema_error(std::string pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

json to_json(ExtReal v);
json to_json(const std::vector<ExtReal>& v);
json to_json(const ExtMatrix& m);
json to_json(const Point& p);
json to_json(const PointSet& ps);

/// Reads `doc` at `pointer`, reporting errors against that pointer.
const json& at(const json& doc, const std::string& pointer);
bool has(const json& doc, const std::string& pointer);

ExtReal ext_from_json(const json& doc, const std::string& pointer);
double finite_from_json(const json& doc, const std::string& pointer);
std::vector<double> finite_list_from_json(const json& doc, const std::string& pointer);
std::vector<ExtReal> ext_list_from_json(const json& doc, const std::string& pointer);
ExtMatrix matrix_from_json(const json& doc, const std::string& pointer);
/// Array of numbers (1-D points) or array of coordinate arrays.
PointSet points_from_json(const json& doc, const std::string& pointer, bool spacetime = false);

/// One row per point: coordinate columns then the value.
void write_csv(std::ostream& os, const GridFunction& f, const std::vector<std::string>& coord_names);

}  // namespace tropk::io
