#pragma once

#include "phdcmp/phd_core.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phdcmp {

enum class NormOrder { L1, L2, LInf };

[[nodiscard]] std::string to_string(NormOrder p);
/// Accepts "1", "2", "inf". Throws ConfigError otherwise.
[[nodiscard]] NormOrder parse_norm_order(std::string_view text);

/// Sub-interval flagged by localize_failure.
struct DiscrepancyRegion {
    double a = 0.0;
    double b = 0.0;
    double local_distance = 0.0;
    std::size_t depth = 0;
};

/// Riemann-sum L_p norm: (sum |f_i|^p dx)^(1/p); p = inf gives max |f_i|.
[[nodiscard]] double lp_norm(const GridFunction& f, NormOrder p);
[[nodiscard]] double lp_norm(const GridPhd& f, NormOrder p);

/// d_p(a, b) = || a - b ||_p. Throws ConfigError on GridSpec mismatch.
[[nodiscard]] double distance(const GridPhd& a, const GridPhd& b, NormOrder p);

struct LocalDistance {
    double value = 0.0;
    bool empty_restriction = false;  ///< no bin center fell inside the interval
};

/// Norm of the difference restricted to bins whose centers lie in [lo, hi].
[[nodiscard]] LocalDistance local_distance(const GridPhd& a, const GridPhd& b, NormOrder p,
                                           double lo, double hi);

/// Recursive bisection of the domain. Returns the deepest intervals whose
/// local distance exceeds `threshold`, sorted by position. Splitting stops
/// once a half would be narrower than `min_width`.
[[nodiscard]] std::vector<DiscrepancyRegion> localize_failure(const GridPhd& a, const GridPhd& b,
                                                              NormOrder p, double threshold,
                                                              double min_width);

}  // namespace phdcmp
