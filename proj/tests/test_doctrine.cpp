#include "phdcmp/doctrine.hpp"
#include "phdcmp/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace phdcmp;

namespace {

const GridSpec kGrid(0.0, 100.0, 200);  // dx = 0.5

GridPhd spike(const GridSpec& spec, std::size_t bin, double m = 1.0) {
    std::vector<double> v(spec.n_bins(), 0.0);
    v[bin] = m / spec.bin_width();
    return GridPhd(spec, v);
}

// Non-negative values confined to [lo_bin, hi_bin).
GridPhd random_interior(std::mt19937_64& rng, const GridSpec& spec, std::size_t lo_bin,
                        std::size_t hi_bin) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(spec.n_bins(), 0.0);
    for (std::size_t i = lo_bin; i < hi_bin; ++i) v[i] = u(rng) < 0.4 ? 3.0 * u(rng) : 0.0;
    return GridPhd(spec, v);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(DoctrineMask, SingleCenteredGaussian) {
    const auto mask = doctrine_mask({{0.0}, 1.0, {1.0}}, 0.1);
    EXPECT_NEAR(mass(mask.grid()), 1.0, 1e-6);
    const auto v = mask.values();
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], v[v.size() - 1 - i], 1e-13);
    EXPECT_EQ(std::max_element(v.begin(), v.end()) - v.begin(),
              static_cast<std::ptrdiff_t>(mask.center_bin()));
}

TEST(DoctrineMask, ThreeSubunitMassAndHalfWidth) {
    const auto spec = DoctrineSpec::three_subunits(5.0, 1.0);
    const auto mask = doctrine_mask(spec, 0.5);
    EXPECT_NEAR(mass(mask.grid()), 3.0, 1e-6);
    EXPECT_GE(mask.half_width(), 5.0 + 5.0 * 1.0);
}

TEST(DoctrineMask, PointMassesWhenSigmaIsZero) {
    const double dx = 0.5;
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 0.0), dx);
    const auto v = mask.values();
    const std::size_t c = mask.center_bin();
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) ++nonzero;
    EXPECT_EQ(nonzero, 3u);
    EXPECT_DOUBLE_EQ(v[c], 1.0 / dx);
    EXPECT_DOUBLE_EQ(v[c - 10], 1.0 / dx);
    EXPECT_DOUBLE_EQ(v[c + 10], 1.0 / dx);
}

TEST(DoctrineMask, PointMassesBelowHalfBinSigma) {
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 0.2), 0.5);
    std::size_t nonzero = 0;
    for (double x : mask.values())
        if (x != 0.0) ++nonzero;
    EXPECT_EQ(nonzero, 3u);
}

TEST(DoctrineMask, MatchesQuadratureOracle) {
    for (double sigma : {0.25, 0.5, 1.0, 5.0}) {
        const auto spec = DoctrineSpec::three_subunits(5.0, sigma);
        const auto mask = doctrine_mask(spec, 0.5);
        const auto reference = oracle::mask_by_quadrature(spec, 0.5, mask.center_bin());
        EXPECT_LE(max_abs_diff(mask.values(), reference), 1e-9) << "sigma " << sigma;
    }
}

TEST(DoctrineMask, TruncationControlsMassError) {
    const auto spec = DoctrineSpec::three_subunits(5.0, 2.0);
    EXPECT_NEAR(mass(doctrine_mask(spec, 0.5, 5.0).grid()), 3.0, 3e-6);
    EXPECT_GT(std::abs(mass(doctrine_mask(spec, 0.5, 1.0).grid()) - 3.0), 1e-2);
}

TEST(DoctrineSpec, Validation) {
    EXPECT_THROW((DoctrineSpec{{}, 1.0, {}}.validate()), ConfigError);
    EXPECT_THROW((DoctrineSpec{{0.0, 1.0}, 1.0, {1.0}}.validate()), ConfigError);
    EXPECT_THROW((DoctrineSpec{{0.0}, -1.0, {1.0}}.validate()), ConfigError);
    EXPECT_THROW((DoctrineSpec{{0.0}, 1.0, {0.0}}.validate()), ConfigError);
    EXPECT_DOUBLE_EQ(DoctrineSpec::three_subunits(5, 1).subunit_count(), 3.0);
}

TEST(ApplyDoctrine, DiracReproducesMask) {
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 1.0), kGrid.bin_width());
    const std::size_t at = 100;
    const auto out = apply_doctrine(spike(kGrid, at), mask);
    const auto m = mask.values();
    const std::size_t c = mask.center_bin();
    double err = 0.0;
    for (std::size_t i = 0; i < kGrid.n_bins(); ++i) {
        const auto k = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(at) +
                       static_cast<std::ptrdiff_t>(c);
        const double expected = (k >= 0 && k < static_cast<std::ptrdiff_t>(m.size())) ? m[k] : 0.0;
        err = std::max(err, std::abs(out.grid[i] - expected));
    }
    EXPECT_LE(err, 1e-9);
    EXPECT_NEAR(mass(out.grid), 3.0, 1e-6);
    EXPECT_LT(out.leaked_mass, 1e-9);
}

TEST(ApplyDoctrine, ZeroInZeroOut) {
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 1.0), kGrid.bin_width());
    const auto out = apply_doctrine(GridPhd(kGrid), mask);
    for (double v : out.grid.values()) EXPECT_EQ(v, 0.0);
}

TEST(ApplyDoctrine, RejectsBinWidthMismatch) {
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 1.0), 0.25);
    EXPECT_THROW((void)apply_doctrine(GridPhd(kGrid), mask), ConfigError);
}

TEST(ApplyDoctrine, ReportsLeakAtDomainEdge) {
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 0.0), kGrid.bin_width());
    const auto out = apply_doctrine(spike(kGrid, 2), mask);
    EXPECT_NEAR(out.leaked_mass, 1.0, 1e-9);  // the -5 m sub-unit falls off the grid
    EXPECT_NEAR(mass(out.grid), 2.0, 1e-9);
}

TEST(ApplyDoctrine, MatchesBruteForceOracleAndScalesMass) {
    std::mt19937_64 rng(21);
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 1.5), kGrid.bin_width());
    for (int trial = 0; trial < 30; ++trial) {
        const auto in = random_interior(rng, kGrid, 40, 160);
        const auto out = apply_doctrine(in, mask);
        EXPECT_LE(max_abs_diff(out.grid.values(), oracle::brute_force_convolution(in, mask)), 1e-9);
        EXPECT_NEAR(mass(out.grid), 3.0 * mass(in), 1e-6 * 3.0 * mass(in));
    }
}

TEST(ApplyDoctrineProperty, Linearity) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 0.8), kGrid.bin_width());
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_interior(rng, kGrid, 0, 200);
        const auto g = random_interior(rng, kGrid, 0, 200);
        const double alpha = u(rng), beta = u(rng);
        std::vector<double> combo(kGrid.n_bins());
        for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = alpha * f[i] + beta * g[i];
        const auto lhs = apply_doctrine(GridPhd(kGrid, combo), mask).grid;
        const auto af = apply_doctrine(f, mask).grid;
        const auto bg = apply_doctrine(g, mask).grid;
        for (std::size_t i = 0; i < combo.size(); ++i)
            EXPECT_NEAR(lhs[i], alpha * af[i] + beta * bg[i], 1e-9);
    }
}

TEST(ApplyDoctrineProperty, TranslationEquivariance) {
    std::mt19937_64 rng(23);
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 1.0), kGrid.bin_width());
    for (int shift : {1, 7, 30}) {
        const auto f = random_interior(rng, kGrid, 40, 100);
        std::vector<double> shifted(kGrid.n_bins(), 0.0);
        for (std::size_t i = 0; i + shift < kGrid.n_bins(); ++i) shifted[i + shift] = f[i];
        const auto a = apply_doctrine(f, mask).grid;
        const auto b = apply_doctrine(GridPhd(kGrid, shifted), mask).grid;
        for (std::size_t i = 0; i + shift < kGrid.n_bins(); ++i)
            EXPECT_NEAR(b[i + shift], a[i], 1e-12);
    }
}

TEST(ApplyDoctrineProperty, NonNegative) {
    std::mt19937_64 rng(24);
    const auto mask = doctrine_mask(DoctrineSpec::three_subunits(5.0, 2.0), kGrid.bin_width());
    for (int trial = 0; trial < 20; ++trial)
        for (double v : apply_doctrine(random_interior(rng, kGrid, 0, 200), mask).grid.values())
            EXPECT_GE(v, 0.0);
}

TEST(Superpose, SingletonEqualsMask) {
    const auto spec = DoctrineSpec::three_subunits(5.0, 1.0);
    const std::vector<WeightedDoctrine> one{{spec, 1.0}};
    const auto a = superpose(one, 0.5);
    const auto b = doctrine_mask(spec, 0.5);
    ASSERT_EQ(a.values().size(), b.values().size());
    EXPECT_EQ(max_abs_diff(a.values(), b.values()), 0.0);
}

TEST(Superpose, DuplicatesAreIdempotent) {
    const auto spec = DoctrineSpec::three_subunits(5.0, 1.0);
    const std::vector<WeightedDoctrine> two{{spec, 0.5}, {spec, 0.5}};
    EXPECT_LE(max_abs_diff(superpose(two, 0.5).values(), doctrine_mask(spec, 0.5).values()), 1e-12);
}

TEST(Superpose, WeightedSubunitCount) {
    const std::vector<WeightedDoctrine> mix{
        {DoctrineSpec::three_subunits(5.0, 1.0), 0.5},
        {DoctrineSpec{{-6.0, -2.0, 2.0, 6.0}, 1.0, {1.0, 1.0, 1.0, 1.0}}, 0.5}};
    EXPECT_NEAR(mass(superpose(mix, 0.5).grid()), 3.5, 1e-6);
}

TEST(Superpose, Errors) {
    EXPECT_THROW((void)superpose(std::vector<WeightedDoctrine>{}, 0.5), std::invalid_argument);
    const std::vector<WeightedDoctrine> bad{{DoctrineSpec::three_subunits(5.0, 1.0), 0.7}};
    EXPECT_THROW((void)superpose(bad, 0.5), ConfigError);
}

TEST(SelectBestDoctrine, SingletonReturnsZero) {
    const std::vector<DoctrineSpec> c{DoctrineSpec::three_subunits(5.0, 1.0)};
    const auto sel = select_best_doctrine(spike(kGrid, 100), GridPhd(kGrid), c, NormOrder::L1);
    EXPECT_EQ(sel.best_index, 0u);
    EXPECT_EQ(sel.distances.size(), 1u);
}

TEST(SelectBestDoctrine, SelfMatchIsExact) {
    std::mt19937_64 rng(25);
    const std::vector<DoctrineSpec> c{DoctrineSpec::three_subunits(3.0, 1.0),
                                      DoctrineSpec::three_subunits(5.0, 1.0),
                                      DoctrineSpec::three_subunits(8.0, 2.0)};
    const auto unit = random_interior(rng, kGrid, 80, 120);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto sub = apply_doctrine(unit, doctrine_mask(c[k], kGrid.bin_width())).grid;
        const auto sel = select_best_doctrine(unit, sub, c, NormOrder::L1);
        EXPECT_EQ(sel.best_index, k);
        EXPECT_LT(sel.distances[k], 1e-9);
    }
}

TEST(SelectBestDoctrine, TiesBreakToLowestIndex) {
    const auto spec = DoctrineSpec::three_subunits(5.0, 1.0);
    const std::vector<DoctrineSpec> c{spec, spec};
    EXPECT_EQ(select_best_doctrine(spike(kGrid, 100), GridPhd(kGrid), c, NormOrder::L2).best_index, 0u);
}

TEST(SelectBestDoctrine, RecoversSpacingFromNoisySubunits) {
    // Sub-unit truth laid out at +-d with tight spread, observed through a
    // histogram of sampled positions; candidates at +-d and +-2d.
    const double d = 4.0;
    const std::vector<DoctrineSpec> c{DoctrineSpec::three_subunits(d, 0.5),
                                      DoctrineSpec::three_subunits(2 * d, 0.5)};
    int correct = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 0.3);
        const double x = 40.0 + 20.0 * std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<Particle> unit_ps, sub_ps;
        for (int i = 0; i < 200; ++i) {
            unit_ps.push_back({{x + noise(rng), 0.0}, 1.0 / 200});
            for (double off : {-d, 0.0, d}) sub_ps.push_back({{x + off + noise(rng), 0.0}, 1.0 / 200});
        }
        const auto unit = discretize(ParticlePhd(unit_ps), kGrid).grid;
        const auto sub = discretize(ParticlePhd(sub_ps), kGrid).grid;
        if (select_best_doctrine(unit, sub, c, NormOrder::L1).best_index == 0) ++correct;
    }
    EXPECT_GE(correct, 95);
}
