#pragma once

#include "tsagent/matrix.hpp"

namespace tsagent::eval {

/// Mean squared error over all horizon steps and target channels, raw scale.
double mse(const Matrix& forecast, const Matrix& truth);
/// Mean absolute error over all horizon steps and target channels, raw scale.
double mae(const Matrix& forecast, const Matrix& truth);

}  // namespace tsagent::eval
