#include "phdcmp/phd_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace phdcmp {

ParticlePhd::ParticlePhd(std::vector<Particle> particles) : particles_(std::move(particles)) {
    for (const auto& p : particles_) {
        if (!std::isfinite(p.state.position) || !std::isfinite(p.state.velocity))
            throw NumericalError("ParticlePhd: non-finite particle state");
        if (!std::isfinite(p.weight) || p.weight < 0.0)
            throw NumericalError("ParticlePhd: particle weight must be finite and >= 0");
    }
}

GridSpec::GridSpec(double x_min, double x_max, std::size_t n_bins)
    : x_min_(x_min), x_max_(x_max), n_bins_(n_bins) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
        throw ConfigError("GridSpec: require finite x_min < x_max");
    if (n_bins < 2)
        throw ConfigError("GridSpec: n_bins must be >= 2");
}

double GridSpec::edge(std::size_t i) const noexcept {
    if (i >= n_bins_) return x_max_;
    return x_min_ + static_cast<double>(i) * bin_width();
}

double GridSpec::center(std::size_t i) const noexcept {
    return x_min_ + (static_cast<double>(i) + 0.5) * bin_width();
}

std::size_t GridSpec::bin_of(double x) const noexcept {
    if (!(x >= x_min_) || !(x <= x_max_)) return n_bins_;
    if (x == x_max_) return n_bins_ - 1;
    auto i = static_cast<std::size_t>(std::floor((x - x_min_) / bin_width()));
    // Guard floating round-off at interior edges.
    if (i >= n_bins_) i = n_bins_ - 1;
    if (x < edge(i) && i > 0) --i;
    else if (i + 1 < n_bins_ && x >= edge(i + 1)) ++i;
    return i;
}

GridPhd::GridPhd(GridSpec spec) : spec_(spec), values_(spec.n_bins(), 0.0) {}

GridPhd::GridPhd(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.n_bins())
        throw ConfigError("GridPhd: value count does not match n_bins");
    for (double v : values_) {
        if (!std::isfinite(v)) throw NumericalError("GridPhd: non-finite intensity");
        if (v < 0.0) throw ConfigError("GridPhd: intensity must be >= 0");
    }
}

double mass(const ParticlePhd& phd) noexcept {
    double total = 0.0;
    for (const auto& p : phd.particles()) total += p.weight;
    return total;
}

double mass(const GridPhd& phd) noexcept {
    const auto v = phd.values();
    return std::accumulate(v.begin(), v.end(), 0.0) * phd.spec().bin_width();
}

double mass_in(const GridPhd& phd, double a, double b) {
    const auto& spec = phd.spec();
    if (!(a <= b) || a < spec.x_min() || b > spec.x_max())
        throw std::domain_error("mass_in: interval must satisfy x_min <= a <= b <= x_max");
    if (a == spec.x_min() && b == spec.x_max()) return mass(phd);
    if (a == b) return 0.0;

    double total = 0.0;
    for (std::size_t i = 0; i < spec.n_bins(); ++i) {
        const double lo = std::max(a, spec.edge(i));
        const double hi = std::min(b, spec.edge(i + 1));
        if (hi > lo) total += phd[i] * (hi - lo);
        if (spec.edge(i + 1) >= b) break;
    }
    return total;
}

Discretized discretize(const ParticlePhd& phd, const GridSpec& spec) {
    std::vector<double> weights(spec.n_bins(), 0.0);
    double dropped = 0.0;
    for (const auto& p : phd.particles()) {
        const auto bin = spec.bin_of(p.state.position);
        if (bin == spec.n_bins()) dropped += p.weight;
        else weights[bin] += p.weight;
    }
    const double dx = spec.bin_width();
    for (double& w : weights) w /= dx;
    return {GridPhd(spec, std::move(weights)), dropped};
}

GridFunction difference(const GridPhd& a, const GridPhd& b) {
    if (!(a.spec() == b.spec()))
        throw ConfigError("difference: GridSpec mismatch");
    std::vector<double> out(a.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return {a.spec(), std::move(out)};
}

}  // namespace phdcmp
