#pragma once

#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace fsa::csv {

/// Every value is written
/// with 17 significant digits ("%.17g") so files diff cleanly.
std::string format(double v);

/// Empty field for std::nullopt.
std::string format(const std::optional<double>& v);

/// Writes comma-joined fields followed by '\n'. Fields are written verbatim.
void write_row(std::ostream& out, std::initializer_list<std::string_view> fields);

}  // namespace fsa::csv
