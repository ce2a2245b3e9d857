#include "tsagent/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsagent::eval {

namespace {
void require_same_shape(const Matrix& a, const Matrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() == 0)
        throw std::invalid_argument(std::string(who) + ": shape mismatch or empty input");
}
}  // namespace

double mse(const Matrix& forecast, const Matrix& truth) {
    require_same_shape(forecast, truth, "mse");
    double acc = 0.0;
    for (std::size_t r = 0; r < truth.rows(); ++r)
        for (std::size_t c = 0; c < truth.cols(); ++c) {
            const double d = forecast(r, c) - truth(r, c);
            acc += d * d;
        }
    return acc / static_cast<double>(truth.rows() * truth.cols());
}

double mae(const Matrix& forecast, const Matrix& truth) {
    require_same_shape(forecast, truth, "mae");
    double acc = 0.0;
    for (std::size_t r = 0; r < truth.rows(); ++r)
        for (std::size_t c = 0; c < truth.cols(); ++c)
            acc += std::fabs(forecast(r, c) - truth(r, c));
    return acc / static_cast<double>(truth.rows() * truth.cols());
}

}  // namespace tsagent::eval
