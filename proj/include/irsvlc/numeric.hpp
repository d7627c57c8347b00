// SPDX-License-Identifier: Apache-2.0
/**
 * @file numeric.hpp
 * @brief Compensated summation helpers
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace irsvlc {

/// Neumaier (improved Kahan) running sum.
class CompensatedSum {
  public:
    void add(double value)
    {
        double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            comp_ += (sum_ - t) + value;
        } else {
            comp_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<double const> values)
{
    CompensatedSum s;
    for (double v : values) {
        s.add(v);
    }
    return s.value();
}

/// Order-independent sum: sorts a copy before compensated accumulation.
inline double sorted_compensated_sum(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    return compensated_sum(values);
}

} // namespace irsvlc
