#include "mdpaccel/solve.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mdpaccel {

double estimate_rate(const std::vector<double>& errors) {
    if (errors.size() < 20) {
        std::ostringstream os;
        os << "estimate_rate: need at least 20 trace points, got " << errors.size();
        throw std::invalid_argument(os.str());
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0)) {
            std::ostringstream os;
            os << "estimate_rate: error at index " << i << " is " << errors[i]
               << "; rate fits need strictly positive errors";
            throw std::invalid_argument(os.str());
        }
    }
    // Drop the leading quarter (transients), then least-squares log(error)
    // against the iteration index.
    const std::size_t start = errors.size() / 4;
    const std::size_t count = errors.size() - start;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = start; i < errors.size(); ++i) {
        mean_x += static_cast<double>(i);
        mean_y += std::log(errors[i]);
    }
    mean_x /= static_cast<double>(count);
    mean_y /= static_cast<double>(count);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < errors.size(); ++i) {
        const double dx = static_cast<double>(i) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log(errors[i]) - mean_y);
    }
    return std::exp(sxy / sxx);
}

}  // namespace mdpaccel
