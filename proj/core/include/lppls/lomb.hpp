#pragma once

#include <span>
#include <vector>

namespace lppls {

/// Normalised Lomb-Scargle periodogram on an evenly spaced frequency grid.
struct Periodogram {
    std::vector<double> frequency;  ///< cycles per unit of the sample coordinate
    std::vector<double> power;
    int oversampling = 4;
};

/// Grid runs from 1/T to n/(2T) in steps of 1/(oversampling T), where T is the
/// span of `positions`. Requires at least 3 samples with positive variance.
Periodogram lomb_periodogram(std::span<const double> positions, std::span<const double> values,
                             int oversampling = 4);

/// Probability that pure noise produces a peak at least `power` high,
/// using 2 * grid_size / oversampling independent frequencies.
double lomb_false_alarm(double power, std::size_t grid_size, int oversampling);

}  // namespace lppls
