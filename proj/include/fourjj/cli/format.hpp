#pragma once

#include <string>
#include <vector>

namespace fourjj::cli {

// Shortest decimal form that reads back to the same double, capped at 12
// significant digits; negative zero prints as 0.
std::string format_number(double x);

// x rounded to 12 significant digits (the value format_number prints).
double round12(double x);

std::string csv_row(const std::vector<double>& values);

}  // namespace fourjj::cli
