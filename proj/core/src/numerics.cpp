#include "franson/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace franson::math {

double erf(double x) {
    if (std::isnan(x)) {
        return x;
    }
    const double ax = std::fabs(x);
    if (ax > 6.0) {
        return x > 0 ? 1.0 : -1.0;
    }
    const double x2 = ax * ax;
    // term_n = 2^n x^(2n+1) / (2n+1)!!; ratio term_{n+1}/term_n = 2x^2/(2n+3)
    double term = ax;
    double sum = ax;
    for (int n = 0; n < 500; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 3.0);
        sum += term;
        if (term < sum * 1e-17) {
            break;
        }
    }
    const double value = std::min(1.0, 2.0 / std::sqrt(kPi) * std::exp(-x2) * sum);
    return x < 0 ? -value : value;
}

std::vector<double> linspace(double first, double last, std::size_t count) {
    std::vector<double> out;
    if (count == 0) {
        return out;
    }
    out.reserve(count);
    if (count == 1) {
        out.push_back(first);
        return out;
    }
    const double step = (last - first) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(first + step * static_cast<double>(i));
    }
    out.back() = last;
    return out;
}

}  // namespace franson::math
