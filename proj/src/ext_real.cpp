#include "tropk/ext_real.hpp"

#include <sstream>

namespace tropk {

std::string ExtReal::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v_;
  return os.str();
}

}  // namespace tropk
