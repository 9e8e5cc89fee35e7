#pragma once

#include <cstddef>
#include <vector>

namespace phdcmp {

/// A measured (position, velocity) pair.
struct Measurement {
    double position = 0.0;
    double velocity = 0.0;

    friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Measurements produced by one sensor at time step `t`. May be empty.
struct ObservationSet {
    std::size_t t = 0;
    std::vector<Measurement> measurements;

    [[nodiscard]] bool empty() const noexcept { return measurements.empty(); }

    friend bool operator==(const ObservationSet&, const ObservationSet&) = default;
};

}  // namespace phdcmp
