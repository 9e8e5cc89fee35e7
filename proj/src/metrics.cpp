#include "phdcmp/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace phdcmp {

namespace {

double norm_of_range(std::span<const double> values, double dx, NormOrder p) {
    switch (p) {
    case NormOrder::L1: {
        double s = 0.0;
        for (double v : values) s += std::abs(v);
        return s * dx;
    }
    case NormOrder::L2: {
        double s = 0.0;
        for (double v : values) s += v * v;
        return std::sqrt(s * dx);
    }
    case NormOrder::LInf: {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    }
    return 0.0;
}

// Index range [first, last) of bins whose centers lie in [lo, hi].
std::pair<std::size_t, std::size_t> bins_centered_in(const GridSpec& spec, double lo, double hi) {
    std::size_t first = spec.n_bins();
    std::size_t last = 0;
    for (std::size_t i = 0; i < spec.n_bins(); ++i) {
        const double c = spec.center(i);
        if (c >= lo && c <= hi) {
            first = std::min(first, i);
            last = i + 1;
        }
    }
    if (first >= last) return {0, 0};
    return {first, last};
}

struct Node {
    double lo;
    double hi;
    std::size_t first;  // bin range [first, last)
    std::size_t last;
};

double node_norm(const GridFunction& diff, const Node& n, NormOrder p) {
    const std::span<const double> slice(diff.values.data() + n.first, n.last - n.first);
    return norm_of_range(slice, diff.spec.bin_width(), p);
}

// Bins go to the left half when their center is below the midpoint.
void bisect(const GridFunction& diff, NormOrder p, double threshold, double min_width,
            const Node& node, std::size_t depth, double node_distance,
            std::vector<DiscrepancyRegion>& out) {
    const double mid = 0.5 * (node.lo + node.hi);
    if (0.5 * (node.hi - node.lo) < min_width) {
        out.push_back({node.lo, node.hi, node_distance, depth});
        return;
    }
    std::size_t split = node.first;
    while (split < node.last && diff.spec.center(split) < mid) ++split;

    const std::size_t before = out.size();
    for (const Node& child : {Node{node.lo, mid, node.first, split}, Node{mid, node.hi, split, node.last}}) {
        if (child.first >= child.last) continue;
        const double d = node_norm(diff, child, p);
        if (d > threshold) bisect(diff, p, threshold, min_width, child, depth + 1, d, out);
    }
    if (out.size() == before) out.push_back({node.lo, node.hi, node_distance, depth});
}

}  // namespace

std::string to_string(NormOrder p) {
    switch (p) {
    case NormOrder::L1: return "1";
    case NormOrder::L2: return "2";
    case NormOrder::LInf: return "inf";
    }
    return "?";
}

NormOrder parse_norm_order(std::string_view text) {
    if (text == "1") return NormOrder::L1;
    if (text == "2") return NormOrder::L2;
    if (text == "inf" || text == "Inf" || text == "INF") return NormOrder::LInf;
    throw ConfigError("unknown norm order '" + std::string(text) + "' (expected 1, 2 or inf)");
}

double lp_norm(const GridFunction& f, NormOrder p) {
    return norm_of_range(f.values, f.spec.bin_width(), p);
}

double lp_norm(const GridPhd& f, NormOrder p) {
    return norm_of_range(f.values(), f.spec().bin_width(), p);
}

double distance(const GridPhd& a, const GridPhd& b, NormOrder p) {
    return lp_norm(difference(a, b), p);
}

LocalDistance local_distance(const GridPhd& a, const GridPhd& b, NormOrder p, double lo,
                             double hi) {
    const auto diff = difference(a, b);
    const auto& spec = diff.spec;
    if (!(lo <= hi) || lo < spec.x_min() || hi > spec.x_max())
        throw std::domain_error("local_distance: interval must lie inside the grid domain");
    const auto [first, last] = bins_centered_in(spec, lo, hi);
    if (first >= last) return {0.0, true};
    const std::span<const double> slice(diff.values.data() + first, last - first);
    return {norm_of_range(slice, spec.bin_width(), p), false};
}

std::vector<DiscrepancyRegion> localize_failure(const GridPhd& a, const GridPhd& b, NormOrder p,
                                                double threshold, double min_width) {
    if (!(threshold > 0.0)) throw ConfigError("localize_failure: threshold must be > 0");
    const auto diff = difference(a, b);
    const auto& spec = diff.spec;
    if (!(min_width >= 2.0 * spec.bin_width() * (1.0 - 1e-12)))
        throw ConfigError("localize_failure: min_width must be >= 2 bin widths");

    std::vector<DiscrepancyRegion> out;
    const double global = lp_norm(diff, p);
    if (global <= threshold) return out;
    bisect(diff, p, threshold, min_width, Node{spec.x_min(), spec.x_max(), 0, spec.n_bins()}, 0,
           global, out);
    std::sort(out.begin(), out.end(),
              [](const DiscrepancyRegion& l, const DiscrepancyRegion& r) { return l.a < r.a; });
    return out;
}

}  // namespace phdcmp
