#include "phdcmp/doctrine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace phdcmp {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

GridPhd mask_grid(std::vector<double> values, double bin_width) {
    const std::size_t half_bins = values.size() / 2;
    const double half = (static_cast<double>(half_bins) + 0.5) * bin_width;
    return GridPhd(GridSpec(-half, half, 2 * half_bins + 1), std::move(values));
}

}  // namespace

DoctrineSpec DoctrineSpec::three_subunits(double spacing, double sigma) {
    return {{-spacing, 0.0, spacing}, sigma, {1.0, 1.0, 1.0}};
}

void DoctrineSpec::validate() const {
    if (offsets.empty()) throw ConfigError("DoctrineSpec: at least one offset required");
    if (offsets.size() != weights.size())
        throw ConfigError("DoctrineSpec: offsets and weights must have equal length");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw ConfigError("DoctrineSpec: sigma must be finite and >= 0");
    for (double o : offsets)
        if (!std::isfinite(o)) throw ConfigError("DoctrineSpec: offsets must be finite");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("DoctrineSpec: weights must be > 0");
}

double DoctrineSpec::subunit_count() const noexcept {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

DoctrineMask::DoctrineMask(std::vector<double> values, double bin_width)
    : grid_(mask_grid(std::move(values), bin_width)), bin_width_(bin_width) {}

DoctrineMask doctrine_mask(const DoctrineSpec& spec, double bin_width, double truncation_sigmas) {
    spec.validate();
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
        throw ConfigError("doctrine_mask: bin width must be > 0");
    if (!(truncation_sigmas >= 0.0))
        throw ConfigError("doctrine_mask: truncation radius must be >= 0");

    double max_offset = 0.0;
    for (double o : spec.offsets) max_offset = std::max(max_offset, std::abs(o));
    const double radius = max_offset + truncation_sigmas * spec.sigma;
    const auto half_bins = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(radius / bin_width - 0.5)));
    const std::size_t n = 2 * half_bins + 1;
    const double lo_edge = -(static_cast<double>(half_bins) + 0.5) * bin_width;

    std::vector<double> values(n, 0.0);
    const bool point_mass = spec.sigma < 0.5 * bin_width;
    for (std::size_t k = 0; k < spec.offsets.size(); ++k) {
        const double offset = spec.offsets[k];
        const double weight = spec.weights[k];
        if (point_mass) {
            const auto bin = static_cast<std::size_t>(std::floor((offset - lo_edge) / bin_width));
            values[std::min(bin, n - 1)] += weight / bin_width;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double edge_lo = lo_edge + static_cast<double>(i) * bin_width;
            const double edge_hi = edge_lo + bin_width;
            const double p = normal_cdf((edge_hi - offset) / spec.sigma) -
                             normal_cdf((edge_lo - offset) / spec.sigma);
            values[i] += weight * std::max(p, 0.0) / bin_width;
        }
    }
    return DoctrineMask(std::move(values), bin_width);
}

DoctrineApplied apply_doctrine(const GridPhd& unit_phd, const DoctrineMask& mask) {
    const auto& spec = unit_phd.spec();
    const double dx = spec.bin_width();
    if (mask.bin_width() != dx)
        throw ConfigError("apply_doctrine: mask bin width differs from grid bin width");

    const auto in = unit_phd.values();
    const auto kernel = mask.values();
    const auto n = static_cast<std::ptrdiff_t>(in.size());
    const auto m = static_cast<std::ptrdiff_t>(kernel.size());
    const auto center = static_cast<std::ptrdiff_t>(mask.center_bin());

    std::vector<double> out(in.size(), 0.0);
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const double source = in[static_cast<std::size_t>(j)];
        if (source == 0.0) continue;
        const double scaled = source * dx;
        const std::ptrdiff_t i_lo = std::max<std::ptrdiff_t>(0, j - center);
        const std::ptrdiff_t i_hi = std::min<std::ptrdiff_t>(n, j - center + m);
        for (std::ptrdiff_t i = i_lo; i < i_hi; ++i)
            out[static_cast<std::size_t>(i)] += scaled * kernel[static_cast<std::size_t>(i - j + center)];
    }

    GridPhd result(spec, std::move(out));
    const double expected = mass(unit_phd) * std::accumulate(kernel.begin(), kernel.end(), 0.0) * dx;
    const double leaked = std::max(0.0, expected - mass(result));
    return {std::move(result), leaked};
}

DoctrineMask superpose(std::span<const WeightedDoctrine> doctrines, double bin_width,
                       double truncation_sigmas) {
    if (doctrines.empty()) throw std::invalid_argument("superpose: no doctrines given");
    double prior_sum = 0.0;
    for (const auto& d : doctrines) {
        if (!(d.prior >= 0.0)) throw ConfigError("superpose: priors must be >= 0");
        prior_sum += d.prior;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9) throw ConfigError("superpose: priors must sum to 1");

    std::vector<DoctrineMask> masks;
    masks.reserve(doctrines.size());
    std::size_t half_bins = 0;
    for (const auto& d : doctrines) {
        masks.push_back(doctrine_mask(d.spec, bin_width, truncation_sigmas));
        half_bins = std::max(half_bins, masks.back().center_bin());
    }

    std::vector<double> values(2 * half_bins + 1, 0.0);
    for (std::size_t k = 0; k < masks.size(); ++k) {
        const auto v = masks[k].values();
        const std::size_t shift = half_bins - masks[k].center_bin();
        for (std::size_t i = 0; i < v.size(); ++i) values[i + shift] += doctrines[k].prior * v[i];
    }
    return DoctrineMask(std::move(values), bin_width);
}

DoctrineSelection select_best_doctrine(const GridPhd& unit_phd, const GridPhd& subunit_phd,
                                       std::span<const DoctrineSpec> candidates, NormOrder p,
                                       double truncation_sigmas) {
    if (candidates.empty()) throw std::invalid_argument("select_best_doctrine: no candidates");
    DoctrineSelection selection;
    selection.distances.reserve(candidates.size());
    const double dx = unit_phd.spec().bin_width();
    for (const auto& candidate : candidates) {
        const auto synthesized = apply_doctrine(unit_phd, doctrine_mask(candidate, dx, truncation_sigmas));
        selection.distances.push_back(distance(subunit_phd, synthesized.grid, p));
    }
    const auto best = std::min_element(selection.distances.begin(), selection.distances.end());
    selection.best_index = static_cast<std::size_t>(best - selection.distances.begin());
    return selection;
}

}  // namespace phdcmp
