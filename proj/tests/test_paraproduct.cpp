#include "test_support.hpp"

using namespace nsb;
using nsb::test::max_abs;
using nsb::test::max_abs_diff;

namespace {

RealField sin_mode(const Grid& g, int k) {
    return RealField::sample(g, 1, [k](std::size_t, double x, double, double) { return std::sin(k * x); });
}

RealField band_limited(const Grid& g, std::uint64_t seed) {
    return from_spectral(nsb::test::random_band_limited(g, 1, static_cast<int>(g.n() / 3), seed));
}

/// Dealiased product of every block pair (j, k) selected by keep(j, k).
template <class Keep>
RealField block_pair_sum(const std::vector<RealField>& fb, const std::vector<RealField>& gb, Keep keep) {
    RealField acc(fb.front().grid(), 1);
    for (std::size_t j = 0; j < fb.size(); ++j)
        for (std::size_t k = 0; k < gb.size(); ++k)
            if (keep(int(j), int(k))) {
                const auto x = fb[j].component(0), y = gb[k].component(0);
                auto d = acc.component(0);
                for (std::size_t i = 0; i < d.size(); ++i) d[i] += x[i] * y[i];
            }
    return from_spectral(dealias(to_spectral(acc)));
}

}  // namespace

TEST(Paraproduct, TrivialInputs) {
    const Grid g(32);
    const DyadicFilterBank bank(g);
    const RealField h = band_limited(g, 1);
    const RealField zero(g, 1);
    const RealField one = RealField::sample(g, 1, [](auto...) { return 1.0; });
    EXPECT_EQ(max_abs(pi0(bank, zero, h)), 0.0);
    EXPECT_EQ(max_abs(pi1(bank, zero, h)), 0.0);
    EXPECT_LT(max_abs_diff(pi0(bank, one, h), h), 1e-12 * max_abs(h));
    EXPECT_LT(max_abs_diff(pi1(bank, one, h), h), 1e-12 * max_abs(h));
    EXPECT_EQ(max_abs(bony_remainder(bank, zero, zero)), 0.0);
    EXPECT_EQ(max_abs(exact_bony_high(bank, zero, zero)), 0.0);
    EXPECT_THROW(pi0(bank, h, sin_mode(Grid(16), 1)), GridMismatch);
}

TEST(Paraproduct, LowTimesHighSingleModes) {
    const Grid g(32);
    const DyadicFilterBank bank(g);
    const RealField f = sin_mode(g, 1), h = sin_mode(g, 8);
    // Direct summation: S_k f = f for every k, and h = Delta_3 h.
    const RealField fg = RealField::sample(g, 1, [](std::size_t, double x, double, double) {
        return 0.5 * (std::cos(7 * x) - std::cos(9 * x));
    });
    EXPECT_LT(max_abs_diff(pi0(bank, f, h), fg), 1e-12);
    EXPECT_LT(max_abs_diff(pi1(bank, f, h), fg), 1e-12);
    // pi1(h, f): f sits in Delta_0 and Delta_1, where S_1 h = S_2 h = 0.
    EXPECT_LT(max_abs(pi1(bank, h, f)), 1e-12);
}

TEST(Paraproduct, Bilinearity) {
    const Grid g(32);
    const DyadicFilterBank bank(g);
    const RealField a = band_limited(g, 2), b = band_limited(g, 3), h = band_limited(g, 4);
    const RealField lhs0 = pi0(bank, 2.0 * a + (-3.0) * b, h);
    const RealField rhs0 = 2.0 * pi0(bank, a, h) + (-3.0) * pi0(bank, b, h);
    EXPECT_LT(max_abs_diff(lhs0, rhs0), 1e-12 * max_abs(rhs0));
    const RealField lhs1 = pi1(bank, 2.0 * a + (-3.0) * b, h);
    const RealField rhs1 = 2.0 * pi1(bank, a, h) + (-3.0) * pi1(bank, b, h);
    EXPECT_LT(max_abs_diff(lhs1, rhs1), 1e-12 * max_abs(rhs1));
}

TEST(Paraproduct, ExactBonyIdentity) {
    const Grid g(32);
    const DyadicFilterBank bank(g);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const RealField f = band_limited(g, 10 + seed), h = band_limited(g, 50 + seed);
        const RealField fg = pointwise_product(f, h, true);
        const RealField resid = fg - pi0(bank, f, h) - exact_bony_high(bank, h, f);
        EXPECT_LE(max_abs(resid), 1e-10 * max_abs(f) * max_abs(h));
    }
}

TEST(Paraproduct, ExactBonyHighWithConstant) {
    const Grid g(32);
    const DyadicFilterBank bank(g);
    const RealField f = band_limited(g, 5);
    const RealField c = RealField::sample(g, 1, [](auto...) { return -1.5; });
    const RealField expect = -1.5 * (f - dyadic_block(bank, f, 0));
    EXPECT_LT(max_abs_diff(exact_bony_high(bank, c, f), expect), 1e-12 * max_abs(f));
}

TEST(Paraproduct, BlockPairOracleAgreesWithOperators) {
    const Grid g(16);
    const DyadicFilterBank bank(g);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const RealField f = band_limited(g, 200 + seed), h = band_limited(g, 300 + seed);
        const auto fb = physical_blocks(bank, to_spectral(f));
        const auto hb = physical_blocks(bank, to_spectral(h));
        const double scale = max_abs(f) * max_abs(h);
        // pi0(f, h): S_k f Delta_k h = pairs (j <= k).
        EXPECT_LE(max_abs_diff(pi0(bank, f, h), block_pair_sum(fb, hb, [](int j, int k) { return j <= k; })),
                  1e-12 * scale);
        // pi1(h, f): S_{j+1} h Delta_j f = pairs (k <= j + 1).
        EXPECT_LE(max_abs_diff(pi1(bank, h, f), block_pair_sum(fb, hb, [](int j, int k) { return k <= j + 1; })),
                  1e-12 * scale);
        // Remainder: fg minus both index sets.
        const RealField fg = block_pair_sum(fb, hb, [](int, int) { return true; });
        EXPECT_LE(max_abs_diff(fg, pointwise_product(f, h, true)), 1e-12 * scale);
        const RealField oracle = fg - block_pair_sum(fb, hb, [](int j, int k) { return j <= k; }) -
                                 block_pair_sum(fb, hb, [](int j, int k) { return k <= j + 1; });
        const RealField rem = bony_remainder(bank, f, h);
        EXPECT_LE(max_abs_diff(rem, oracle), 1e-10 * scale);
        // Closed form of the overlap: -sum_j Delta_j f (Delta_j h + Delta_{j+1} h).
        const RealField diag = block_pair_sum(fb, hb, [](int j, int k) { return k == j || k == j + 1; });
        EXPECT_LE(max_abs_diff(rem, -1.0 * diag), 1e-10 * scale);
    }
}

TEST(Paraproduct, RemainderWithConstantFactor) {
    const Grid g(16);
    const DyadicFilterBank bank(g);
    const RealField f = band_limited(g, 7);
    const RealField c = RealField::sample(g, 1, [](auto...) { return 2.0; });
    // Only Delta_0 c = c is nonzero, so the diagonal correction is -2 Delta_0 f.
    const RealField expect = -2.0 * dyadic_block(bank, f, 0);
    EXPECT_LT(max_abs_diff(bony_remainder(bank, f, c), expect), 1e-12 * max_abs(f));
    // With the constant first: -c (Delta_0 f + Delta_1 f) evaluated on Delta_0 c only.
    const RealField expect2 = -2.0 * (dyadic_block(bank, f, 0) + dyadic_block(bank, f, 1));
    EXPECT_LT(max_abs_diff(bony_remainder(bank, c, f), expect2), 1e-12 * max_abs(f));
}

TEST(ParaproductConstants, SingleHighModeAgainstConstantHasUnitRatio) {
    const Grid g(32);
    const DyadicFilterBank bank(g);
    const SpectralField one = to_spectral(RealField::sample(g, 1, [](auto...) { return 1.0; }));
    const SpectralField h = to_spectral(sin_mode(g, 8));
    for (double s : {0.5, 1.0, 2.0}) {
        const auto r = lemma1_ratios(bank, s, one, one, h);
        EXPECT_NEAR(r[1], 1.0, 1e-12) << "pi0 linf s=" << s;
        EXPECT_NEAR(r[3], 1.0, 1e-12) << "pi1 linf s=" << s;
    }
}

TEST(ParaproductConstants, ZeroFirstArgumentIsSkipped) {
    const Grid g(16);
    const DyadicFilterBank bank(g);
    const SpectralField zero(g, 1);
    const auto r = lemma1_ratios(bank, 1.0, zero, zero, to_spectral(sin_mode(g, 2)));
    for (double v : r) EXPECT_LT(v, 0.0);
}

TEST(ParaproductConstants, EstimatesAreDeterministicAndValidated) {
    const Grid g(16);
    const auto a = estimate_lemma1_constants(1.0, 6, g, 42);
    const auto b = estimate_lemma1_constants(1.0, 6, g, 42);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(a[i].max_ratio, b[i].max_ratio);
        EXPECT_EQ(a[i].pairs_used, 6u);
        EXPECT_GT(a[i].max_ratio, 0.0);
        EXPECT_TRUE(std::isfinite(a[i].max_ratio));
    }
    EXPECT_EQ(estimate_lemma1_constant(Paraproduct::pi1, Lemma1Variant::linf_in, 1.0, 6, g, 42), a[3].max_ratio);
    EXPECT_THROW(estimate_lemma1_constants(0.0, 4, g, 1), InvalidArgument);
    EXPECT_THROW(estimate_lemma1_constants(1.0, 0, g, 1), InvalidArgument);
}

TEST(ParaproductConstants, StableAcrossResolutions) {
    for (double s : {0.5, 2.0}) {
        const auto lo = estimate_lemma1_constants(s, 8, Grid(16), 7);
        const auto hi = estimate_lemma1_constants(s, 8, Grid(32), 7);
        for (std::size_t i = 0; i < 4; ++i) {
            const double r = hi[i].max_ratio / lo[i].max_ratio;
            EXPECT_GT(r, 0.5) << "slot " << i << " s=" << s;
            EXPECT_LT(r, 2.0) << "slot " << i << " s=" << s;
        }
    }
}
