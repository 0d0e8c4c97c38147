#include "fourjj/cli/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fourjj::cli {

std::string format_number(double x) {
    if (x == 0.0) return "0";
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    // Enough digits to keep integers up to 12 digits out of exponent form.
    const int exponent = static_cast<int>(std::floor(std::log10(std::abs(x))));
    const int floor_digits = exponent >= 0 && exponent < 12 ? exponent + 1 : 1;
    char buf[40];
    for (int p = floor_digits; p <= 12; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_number(x).c_str(), nullptr);
}

std::string csv_row(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ',';
        s += format_number(values[i]);
    }
    s += '\n';
    return s;
}

}  // namespace fourjj::cli
