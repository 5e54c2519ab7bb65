// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "oracles.hpp"
#include "ucrb/overlap_paths.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ucrb;

namespace {

Scenario scen(int P = 1, double sigma2 = 1.0)
{
    Scenario sc;
    sc.P = P;
    sc.sigma_w2 = sigma2;
    return sc;
}

// Real record x(n) = s(n) + s(n - n0), n = 0..n0+M-1, real noise of
// variance sigma2 in each of P looks. Parameters (tau, s_0..s_{M-1}).
Mat overlap_oracle(const SampledSignal& sig, Index n0, const Scenario& sc)
{
    const Index M = sig.size();
    Mat J = Mat::Zero(n0 + M, 1 + M);
    for (Index m = 0; m < M; ++m) {
        J(n0 + m, 0) = -sig.deriv()(m).real();
        J(m, 1 + m) += 1.0;
        J(n0 + m, 1 + m) += 1.0;
    }
    return (sc.P / sc.sigma_w2) * J.transpose() * J;
}

// tau bound by eliminating the samples with a dense solve; nullopt when
// the information is singular.
std::optional<double> oracle_crb(const Mat& F)
{
    Eigen::FullPivLU<Mat> lu(F);
    lu.setThreshold(1e-10);
    if (lu.rank() < F.rows()) return std::nullopt;
    return lu.inverse()(0, 0);
}

SampledSignal random_real(Index M, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CVec s(M);
    for (Index k = 0; k < M; ++k) s(k) = g(rng);
    return SampledSignal::from_samples(s, 1.0);
}

} // namespace

TEST(Overlap, Regimes)
{
    EXPECT_EQ(overlap_regime(0, 16), OverlapRegime::total);
    EXPECT_EQ(overlap_regime(5, 16), OverlapRegime::partial);
    EXPECT_EQ(overlap_regime(15, 16), OverlapRegime::partial);
    EXPECT_EQ(overlap_regime(16, 16), OverlapRegime::none);
    EXPECT_EQ(overlap_regime(40, 16), OverlapRegime::none);
}

TEST(Overlap, FimMatchesRecordJacobian)
{
    const SampledSignal sig = triangle_wave(16);
    for (Index n0 = 0; n0 <= 20; ++n0) {
        const Scenario sc = scen(3, 0.5);
        const OverlapFim f = fim_overlap(sig, n0, sc);
        const Mat ref = overlap_oracle(sig, n0, sc);
        EXPECT_NEAR(f.e, ref(0, 0), 1e-12 * ref(0, 0));
        EXPECT_LE((f.b_vec - ref.block(1, 0, 16, 1)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LE((f.D - ref.bottomRightCorner(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Overlap, NonOverlappingBound)
{
    const SampledSignal sig = triangle_wave(16);
    for (int P : {1, 2, 7})
        for (double s2 : {1.0, 0.3}) {
            const CrbReport r = crb_overlap(fim_overlap(sig, 16, scen(P, s2)));
            EXPECT_NEAR(r.value("tau0"), s2 / P * 2.0 / 16.0, 1e-12 * s2 / P);
        }
}

TEST(Overlap, TriangleClosedFormUpperHalf)
{
    for (int M : {8, 12, 16, 20}) {
        const SampledSignal sig = triangle_wave(M);
        for (Index n0 = M / 2; n0 <= M - 1; ++n0) {
            const OverlapFim f = fim_overlap(sig, n0, scen());
            const double dense = crb_overlap(f).value("tau0");
            const double closed = crb_overlap_closed(f, sig);
            const double formula = 6.0 / (5.0 * M - 2.0 * n0);
            EXPECT_NEAR(closed, formula, 1e-12 * formula) << M << " " << n0;
            EXPECT_NEAR(dense, formula, 1e-10 * formula) << M << " " << n0;
            EXPECT_NEAR(dense, *oracle_crb(overlap_oracle(sig, n0, scen())), 1e-10 * formula);
        }
    }
}

TEST(Overlap, ClosedFormGeneralRealSignals)
{
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 40; ++trial) {
        const Index M = 6 + 2 * (trial % 6);
        const SampledSignal sig = random_real(M, rng);
        for (Index n0 = M / 2; n0 <= M - 1; ++n0) {
            const OverlapFim f = fim_overlap(sig, n0, scen(2, 0.4));
            const auto ref = oracle_crb(overlap_oracle(sig, n0, scen(2, 0.4)));
            ASSERT_TRUE(ref.has_value());
            EXPECT_NEAR(crb_overlap_closed(f, sig), *ref, 1e-9 * *ref);
            EXPECT_NEAR(crb_overlap(f).value("tau0"), *ref, 1e-9 * *ref);
        }
    }
}

TEST(Overlap, ClosedFormOutsideRangeThrows)
{
    const SampledSignal sig = triangle_wave(16);
    EXPECT_THROW(crb_overlap_closed(fim_overlap(sig, 7, scen()), sig), std::invalid_argument);
    EXPECT_THROW(crb_overlap_closed(fim_overlap(sig, 16, scen()), sig), std::invalid_argument);
}

TEST(Overlap, UpperHalfIncreasingAndBelowNonOverlap)
{
    const SampledSignal sig = triangle_wave(16);
    const double non = crb_overlap(fim_overlap(sig, 16, scen())).value("tau0");
    double prev = 0.0;
    for (Index n0 = 8; n0 <= 15; ++n0) {
        const double v = crb_overlap(fim_overlap(sig, n0, scen())).value("tau0");
        EXPECT_GT(v, prev);
        EXPECT_LT(v, non);
        prev = v;
    }
}

// Below M/2 the triangle is not uniformly better than the clean case:
// some delays are unidentifiable and some are worse than no overlap.
TEST(Overlap, LowerHalfTriangleBehaviour)
{
    const SampledSignal sig = triangle_wave(16);
    const double non = 2.0 / 16.0;
    for (Index n0 = 1; n0 < 8; ++n0) {
        const CrbReport r = crb_overlap(fim_overlap(sig, n0, scen()));
        const auto ref = oracle_crb(overlap_oracle(sig, n0, scen()));
        EXPECT_EQ(r.at("tau0").singular, !ref.has_value()) << n0;
        if (ref) EXPECT_NEAR(r.value("tau0"), *ref, 1e-9 * *ref) << n0;
    }
    for (Index n0 : {1, 2, 4}) EXPECT_TRUE(crb_overlap(fim_overlap(sig, n0, scen())).at("tau0").singular) << n0;
    for (Index n0 : {3, 5, 6, 7}) EXPECT_GT(crb_overlap(fim_overlap(sig, n0, scen())).value("tau0"), non) << n0;
}

TEST(Overlap, TotalOverlapAndNoLooksSingular)
{
    const SampledSignal sig = triangle_wave(16);
    EXPECT_TRUE(crb_overlap(fim_overlap(sig, 0, scen())).at("tau0").singular);
    for (Index n0 : {0, 5, 12, 16}) EXPECT_TRUE(crb_overlap(fim_overlap(sig, n0, scen(0))).at("tau0").singular);
}

TEST(Overlap, LooksScaleBound)
{
    const SampledSignal sig = triangle_wave(16);
    for (Index n0 : {9, 13, 20}) {
        const double one = crb_overlap(fim_overlap(sig, n0, scen(1))).value("tau0");
        const double five = crb_overlap(fim_overlap(sig, n0, scen(5))).value("tau0");
        EXPECT_NEAR(one / five, 5.0, 1e-10);
    }
}

TEST(Overlap, ComplexSignalsRejected)
{
    const SampledSignal sig = oracle::chirp(8, 1.0);
    EXPECT_THROW(fim_overlap(sig, 4, scen()), std::invalid_argument);
}

TEST(Overlap, TriangleCurve)
{
    const auto rows = triangle_overlap_curve(16, scen());
    ASSERT_EQ(rows.size(), 17u);
    EXPECT_TRUE(rows[0].crb.singular);
    for (Index n0 = 8; n0 <= 15; ++n0) {
        EXPECT_FALSE(rows[n0].closed.singular);
        EXPECT_NEAR(rows[n0].closed.value, rows[n0].crb.value, 1e-10 * rows[n0].crb.value);
    }
    EXPECT_FALSE(std::isfinite(rows[3].closed.value));
    EXPECT_NEAR(rows[16].crb.value, 0.125, 1e-12);
    EXPECT_EQ(rows[16].regime, OverlapRegime::none);
}
