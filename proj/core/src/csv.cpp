#include "fsa/csv.hpp"

#include <cstdio>

namespace fsa::csv {

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format(const std::optional<double>& v) { return v ? format(*v) : std::string{}; }

void write_row(std::ostream& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out << ',';
    out << f;
    first = false;
  }
  out << '\n';
}

}  // namespace fsa::csv
