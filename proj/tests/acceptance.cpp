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


// Acceptance run: one PASS/FAIL line per criterion, extra detail on lines
// starting with '#'. Exit status is the number of failed criteria.

#include "ucrb/covariance_fim.hpp"
#include "ucrb/crb_core.hpp"
#include "ucrb/extensions_scnr.hpp"
#include "ucrb/known_structure.hpp"
#include "ucrb/overlap_paths.hpp"
#include "ucrb/reports.hpp"
#include "ucrb/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace ucrb;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail)
{
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void info(const std::string& s) { std::printf("# %s\n", s.c_str()); }

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Runs a criterion body; an escaping exception is a failure.
void run(int id, const std::function<void()>& body)
{
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

PulseTrain table1_train(double amp = 1.0)
{
    return {gaussian_pulse(500, 0.01, 4.0, 9.0), 5.0, CVec::Constant(2, amp)};
}

Scenario table1_scenario(int L = 1, int P = 1)
{
    Scenario sc;
    sc.tau0 = 0.05;
    sc.f0 = 20.0;
    sc.L = L;
    sc.P = P;
    return sc;
}

CVec random_amps(int Q, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    CVec b(Q);
    for (int q = 0; q < Q; ++q) b(q) = Complex(n(rng), n(rng));
    return b;
}

void criterion1()
{
    const SampledSignal sig = synthesize_pulse_train(table1_train());
    // same pulse on a coarser grid so the (2 + 2M) matrix stays small
    const SampledSignal small = synthesize_pulse_train({gaussian_pulse(25, 0.2, 4.0, 9.0), 5.0, CVec::Ones(2)});
    double worst_cf = 0.0, worst_sn = 0.0;
    for (int L = 1; L <= 8; ++L)
        for (int P = 1; P <= 8; ++P) {
            const double fac = double(L + P) / (double(L) * P);
            const Scenario sc = table1_scenario(L, P);
            const CrbReport k = jcrb_known(sig, sc), u = jcrb_unknown(sig, sc);
            const CrbReport ks = jcrb_known(small, sc), us = jcrb_unknown_schur(small, sc);
            for (const char* p : {"tau0", "f0"}) {
                worst_cf = std::max(worst_cf, rel(u.value(p) / k.value(p), fac));
                worst_sn = std::max(worst_sn, rel(us.value(p) / ks.value(p), fac));
            }
        }
    report(1, worst_cf <= 1e-12 && worst_sn <= 1e-8,
           fmt("factor law (L,P) in 1..8: closed-form max rel err %.2e (tol 1e-12), Schur M=%d max rel err %.2e (tol 1e-8)",
               worst_cf, int(small.size()), worst_sn));
}

void criterion2()
{
    RunConfig cfg = default_config("table1");
    cfg.amp_convention = "both";
    const ReportTable t = cmd_table1(cfg);
    const double expect[] = {2.0, 1.5, 1.01};
    double worst_ratio = 0.0;
    bool some_match = false;
    std::string matched;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const ReportRow& row = t.rows[i];
        auto cell = [&](const std::string& n) {
            for (const auto& [k, c] : row.cells)
                if (k == n) return c;
            throw std::runtime_error("missing cell " + n);
        };
        const std::string conv = std::get<std::string>(row.keys[0].second);
        const double want = expect[i % 3];
        worst_ratio = std::max({worst_ratio, rel(cell("ratio_tau0").value, want), rel(cell("ratio_f0").value, want)});
        info(fmt("table1 %s L=%lld: jcrb_tau0_s=%.6g jcrb_tau0=%.6g jcrb_f0_s=%.6g jcrb_f0=%.6g ratio=%.6g", conv.c_str(),
                 static_cast<long long>(std::get<std::int64_t>(row.keys[1].second)), cell("jcrb_tau0_s").value,
                 cell("jcrb_tau0").value, cell("jcrb_f0_s").value, cell("jcrb_f0").value, cell("ratio_tau0").value));
        if (i % 3 == 0 && rel(cell("jcrb_tau0").value, 0.0119) <= 0.25 && rel(cell("jcrb_tau0_s").value, 0.0239) <= 0.25) {
            some_match = true;
            matched += (matched.empty() ? "" : ",") + conv;
        }
    }
    // oracle check of the unit-amplitude known-signal bound
    const PulseTrain pt = table1_train();
    const Fim o = oracle_fim_mean(pt, table1_scenario(), OracleModel::known_signal);
    const Mat oi = o.entries.inverse();
    info(fmt("oracle (finite-difference) unit amplitude: jcrb_tau0=%.6g jcrb_f0=%.6g", oi(0, 0), oi(1, 1)));
    // f0 with time measured from each pulse start rather than from the first
    const StructureQuantities sq = structure_quantities(pt, 0.05);
    double local = 0.0;
    for (int n = 0; n <= pt.n_p(); ++n) {
        const double tt = n * pt.delta() + 0.05;
        local += tt * tt * pt.pulse.g(n) * pt.pulse.g(n);
    }
    local *= pt.amplitude_energy();
    const double f_local = 1.0 / (8.0 * std::numbers::pi * std::numbers::pi * local);
    info(fmt("reference f0 column 1.753e-06 / 8.76e-07; global time gives %.4g / %.4g, pulse-local time gives %.4g / %.4g",
             2.0 / (8.0 * std::numbers::pi * std::numbers::pi * sq.time2.sum()),
             1.0 / (8.0 * std::numbers::pi * std::numbers::pi * sq.time2.sum()), 2.0 * f_local, f_local));
    report(2, worst_ratio <= 0.01 && some_match,
           fmt("ratios {2,1.5,1.01} max rel err %.2e (tol 1e-2); absolute 0.0119/0.0239 within 25%% for: %s",
               worst_ratio, some_match ? matched.c_str() : "none"));
}

void criterion3()
{
    // complex chirp with a closed form, M = 16
    const Index M = 16;
    const double dt = 0.25, rate = 0.3, c = 1.9, w = 1.2;
    auto at = [=](double t) {
        return std::exp(-(t - c) * (t - c) / (w * w)) * std::polar(1.0, std::numbers::pi * rate * t * t);
    };
    auto slope = [=](double t) {
        const double env = std::exp(-(t - c) * (t - c) / (w * w));
        return (-2.0 * (t - c) / (w * w) * env + Complex(0.0, 2.0 * std::numbers::pi * rate * t) * env) *
               std::polar(1.0, std::numbers::pi * rate * t * t);
    };
    CVec s(M), d(M);
    for (Index k = 0; k < M; ++k) {
        s(k) = at(k * dt);
        d(k) = slope(k * dt);
    }
    const SampledSignal sig(s, d, dt, DerivMethod::analytic);
    const ContinuousSignal truth{[=](Index k, double h) { return at(k * dt + h); }, M, dt};
    Scenario sc;
    sc.tau0 = 0.5;
    sc.f0 = 0.8;
    sc.L = 2;
    sc.P = 1;
    sc.sigma_w2 = 0.3;
    sc.a = 1.0;
    const double e1 = max_scaled_difference(oracle_fim_mean(truth, sc, OracleModel::known_signal).entries,
                                            fim_known_signal(sig, sc).entries);
    const double e2 = max_scaled_difference(oracle_fim_mean(truth, sc, OracleModel::unknown_signal).entries,
                                            fim_unknown_signal(sig, sc).entries);
    CVec b(4);
    b << Complex(1.0, 0.5), Complex(-0.7, 0.2), Complex(0.3, -1.1), Complex(0.9, 0.9);
    const PulseTrain pt(gaussian_pulse(7, 0.25, 0.9, 0.4), 2.0, b);
    Scenario sa = sc;
    sa.a = 0.7;
    const double e3 = max_scaled_difference(oracle_fim_mean(pt, sa, OracleModel::known_structure).entries,
                                            fim_known_structure(pt, sa).entries);
    const double e4 = max_scaled_difference(oracle_fim_mean(truth, sa, OracleModel::unknown_a_signal).entries,
                                            fim_unknown_a(sig, sa).entries);
    const double worst = std::max({e1, e2, e3, e4});
    report(3, worst <= 1e-4,
           fmt("oracle vs analytic FIM: known %.1e, unknown M=16 %.1e, structure Q=4 %.1e, unknown-a M=16 %.1e (tol 1e-4)",
               e1, e2, e3, e4));
}

void criterion4()
{
    std::mt19937_64 rng(4);
    double worst_v12 = 0.0;
    int cases = 0, ordered = 0;
    for (int L = 1; L <= 8; ++L)
        for (int P = 1; P <= 8; ++P)
            for (double a : {0.25, 0.5, 1.0, 2.0, 4.0}) {
                const PulseTrain pt(gaussian_pulse(10, 0.2, 0.8, 0.5), 2.2, random_amps(1 + (L * P) % 4, rng));
                Scenario sc;
                sc.tau0 = 0.25;
                sc.f0 = 3.0;
                sc.L = L;
                sc.P = P;
                sc.a = a;
                const Mat V = v_matrix(pt, sc);
                worst_v12 = std::max(worst_v12, std::abs(V(0, 1)) / std::abs(V(0, 0)));
                const CrbReport b = jcrb_known_structure(pt, sc);
                const CrbReport s = jcrb_scaled_known_a(synthesize_pulse_train(pt), sc);
                ++cases;
                if (b.value("tau0") < s.value("tau0") && b.value("f0") < s.value("f0")) ++ordered;
            }
    const double rho_gauss =
        std::abs(structure_quantities({gaussian_pulse(20, 0.1, 1.0, 0.3), 2.0, CVec::Ones(2)}, 0.0).rho);
    const double rho_hann = std::abs(structure_quantities({hann_pulse(16, 0.125), 2.0, CVec::Ones(2)}, 0.0).rho);
    report(4, worst_v12 <= 1e-10 && rho_gauss <= 1e-12 && rho_hann <= 1e-12 && ordered == cases,
           fmt("max |V12|/|V11| %.1e (tol 1e-10); rho symmetric Gaussian %.1e, Hann %.1e (tol 1e-12); "
               "JCRB_b < JCRB_s in %d/%d cases",
               worst_v12, rho_gauss, rho_hann, ordered, cases));
}

void criterion5()
{
    const SampledSignal sig = triangle_wave(16);
    Scenario sc;
    sc.P = 1;
    sc.sigma_w2 = 1.0;
    const double non = crb_overlap(fim_overlap(sig, 16, sc)).value("tau0");
    const double non_err = rel(non, 2.0 / 16.0);
    double worst_closed = 0.0, worst_formula = 0.0, prev = 0.0;
    bool increasing = true, below = true;
    for (Index n0 = 8; n0 <= 15; ++n0) {
        const OverlapFim f = fim_overlap(sig, n0, sc);
        const double dense = crb_overlap(f).value("tau0");
        const double closed = crb_overlap_closed(f, sig);
        worst_closed = std::max(worst_closed, rel(closed, dense));
        worst_formula = std::max(worst_formula, rel(dense, 6.0 / (80.0 - 2.0 * n0)));
        increasing = increasing && dense > prev;
        below = below && dense < non;
        prev = dense;
    }
    const bool zero_singular = crb_overlap(fim_overlap(sig, 0, sc)).at("tau0").singular;
    std::string lower;
    for (Index n0 = 1; n0 < 8; ++n0) {
        const BoundValue v = crb_overlap(fim_overlap(sig, n0, sc)).at("tau0");
        lower += v.singular ? " singular" : fmt(" %.4g", v.value);
    }
    info("n0 = 1..7 (outside the closed-form range):" + lower + fmt("; CRB_non = %.4g", non));
    report(5, non_err <= 1e-12 && worst_closed <= 1e-10 && worst_formula <= 1e-10 && zero_singular && increasing && below,
           fmt("CRB_non rel err %.1e; closed vs dense %.1e, vs 6/(5M-2n0) %.1e on n0=8..15; n0=0 singular=%s; "
               "increasing=%s; below CRB_non=%s",
               non_err, worst_closed, worst_formula, zero_singular ? "yes" : "no", increasing ? "yes" : "no",
               below ? "yes" : "no"));
}

void criterion6()
{
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_int_distribution<int> looks(1, 2), len(3, 6), delay(0, 2);
    double worst = 0.0;
    const int n = 60;
    Index largest = 0;
    for (int i = 0; i < n; ++i) {
        const Index M = len(rng);
        CVec s(M), d(M);
        for (Index k = 0; k < M; ++k) {
            s(k) = Complex(g(rng), g(rng));
            d(k) = Complex(g(rng), g(rng));
        }
        const SampledSignal sig(s, d, 0.5, DerivMethod::analytic);
        Scenario sc;
        sc.L = looks(rng);
        sc.P = looks(rng);
        sc.tau0 = 0.5 * delay(rng);
        sc.f0 = 0.37;
        const Index total = sc.record_length(0.5, M) * (sc.L + sc.P);
        largest = std::max(largest, total);
        CMat A(total, total);
        for (Index r = 0; r < total; ++r)
            for (Index c = 0; c < total; ++c) A(r, c) = Complex(g(rng), g(rng));
        const CMat Sigma = A * A.adjoint() / double(total) + 0.1 * CMat::Identity(total, total);
        const StackedModel m = build_stacked(sig, sc, Sigma);
        const auto dC = dC_all(m, sig, sc);
        const Mat t = fim_trace_form(m, dC).entries, k = fim_kron_form(m, dC).entries;
        worst = std::max(worst, (t - k).cwiseAbs().maxCoeff() / t.cwiseAbs().maxCoeff());
    }
    report(6, worst <= 1e-8 && largest <= 32,
           fmt("trace vs Kronecker form on %d random PSD instances (N(L+P) <= %lld): max rel err %.1e (tol 1e-8)", n,
               static_cast<long long>(largest), worst));
}

void criterion7()
{
    int paths = 0, flagged = 0;
    std::string bad;
    auto check = [&](const std::string& name, const CrbReport& r, std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            ++paths;
            if (r.at(k).singular && std::isinf(r.at(k).value)) ++flagged;
            else bad += " " + name + ":" + k;
        }
    };
    const SampledSignal sig = synthesize_pulse_train({gaussian_pulse(12, 0.25, 1.5, 0.8), 3.25, CVec::Ones(2)});
    const PulseTrain pt(gaussian_pulse(10, 0.2, 0.8, 0.5), 2.2, CVec::Ones(3));
    const SampledSignal tri = triangle_wave(16);
    for (int other = 1; other <= 4; ++other)
        for (bool zero_L : {true, false}) {
            Scenario sc;
            sc.tau0 = 0.5;
            sc.f0 = 0.3;
            sc.L = zero_L ? 0 : other;
            sc.P = zero_L ? other : 0;
            sc.a = 1.3;
            check("closed", jcrb_unknown(sig, sc), {"tau0", "f0"});
            check("closed_sep", crb_separate_unknown(sig, sc), {"tau0", "f0"});
            check("schur", jcrb_unknown_schur(sig, sc), {"tau0", "f0"});
            check("scaled", jcrb_scaled_known_a(sig, sc), {"tau0", "f0", "tau0_sep", "f0_sep"});
            check("unknown_a", jcrb_unknown_a_signal(sig, sc), {"tau0", "f0"});
            check("unknown_a_sep", crb_separate_unknown_a(sig, sc), {"tau0_s", "f0_s"});
            check("unknown_a_structure", jcrb_unknown_a_structure(pt, sc), {"tau0", "f0"});
            const Index total = sc.record_length(sig.delta(), sig.size()) * (sc.L + sc.P);
            const StackedModel m = build_stacked(sig, sc, CMat::Identity(total, total));
            check("covariance", crb_correlated(m, dC_all(m, sig, sc)), {"tau0", "f0"});
            if (!zero_L)
                for (Index n0 : {0, 5, 10, 16}) check("overlap", crb_overlap(fim_overlap(tri, n0, sc)), {"tau0"});
        }
    Scenario l0;
    l0.L = 0;
    l0.P = 2;
    l0.tau0 = 0.4;
    const CrbReport ks = jcrb_known_structure(pt, l0);
    info(fmt("known-structure with L=0 stays finite (shape alone fixes the delay): jcrb_tau0_b=%.4g", ks.value("tau0")));
    report(7, flagged == paths, fmt("%d/%d bound evaluations with L=0 or P=0 flagged singular, no exceptions%s", flagged,
                                    paths, bad.empty() ? "" : ("; unflagged:" + bad).c_str()));
}

void criterion8()
{
    const SampledSignal sig = synthesize_pulse_train(table1_train());
    const double known_t = jcrb_known(sig, table1_scenario()).value("tau0");
    const double big = jcrb_unknown(sig, table1_scenario(1000, 1)).value("tau0");
    const double gap = rel(big, known_t);
    double worst_pl = 0.0;
    for (int L = 1; L <= 200; ++L) {
        const CrbReport u = jcrb_unknown(sig, table1_scenario(L, L));
        worst_pl = std::max(worst_pl, rel(u.value("tau0") * L / 2.0, known_t));
    }
    RunConfig cfg = default_config("sweep");
    cfg.sweep = parse_sweep("n_p=20:500:20");
    const ReportTable t = cmd_sweep(cfg);
    bool monotone = true, ordered = true;
    std::map<std::string, double> prev;
    for (const ReportRow& row : t.rows) {
        std::map<std::string, double> v;
        for (const auto& [k, c] : row.cells) v[k] = c.value;
        for (const auto& [k, x] : v) {
            if (prev.count(k) && x > prev[k]) monotone = false;
            prev[k] = x;
        }
        if (v["jcrb_tau0_b"] > v["jcrb_tau0_s"] || v["jcrb_f0_b"] > v["jcrb_f0_s"]) ordered = false;
    }
    report(8, gap <= 2e-3 && worst_pl <= 1e-10 && monotone && ordered,
           fmt("L=1000,P=1 gap to known %.2e (tol 2e-3); P=L bound*L/2 vs known max rel err %.1e (tol 1e-10); "
               "n_p sweep (%zu points) nonincreasing=%s, JCRB_b <= JCRB_s=%s",
               gap, worst_pl, t.rows.size(), monotone ? "yes" : "no", ordered ? "yes" : "no"));
}

void criterion9()
{
    const auto t0 = std::chrono::steady_clock::now();
    const SampledSignal sig = synthesize_pulse_train(mc_reference_train());
    Scenario sc;
    sc.tau0 = 1.0;
    sc.f0 = 0.25;
    sc.L = 1;
    sc.P = 1;
    sc.sigma_w2 = 1e-4;
    const McReport r = monte_carlo_report(sig, sc, default_mc_config(sig, sc, 500, 42));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool band = true;
    std::string detail;
    for (const McRow& row : r.rows) {
        info(fmt("mc %s %s: mse=%.4g +- %.2g  jcrb=%.4g  ratio=%.4f (+- %.3f)", row.parameter.c_str(),
                 row.estimator.c_str(), row.mse, row.stderr_mse, row.bound.value, row.ratio,
                 row.stderr_mse / row.bound.value));
        if (row.estimator == "unknown_signal") {
            band = band && row.ratio >= 1.0 && row.ratio <= 3.0;
            detail += fmt("%s mse/jcrb %.4f; ", row.parameter.c_str(), row.ratio);
        }
    }
    const bool ratio_ok = r.tau_mse_ratio >= 1.5 && r.tau_mse_ratio <= 2.5 && r.f_mse_ratio >= 1.5 && r.f_mse_ratio <= 2.5;
    report(9, band && ratio_ok,
           fmt("M=%lld, 500 trials, seed 42: %sin [1,3]=%s; unknown/known mse ratio tau0 %.3f, f0 %.3f, in [1.5,2.5]=%s (%.1fs)",
               static_cast<long long>(sig.size()), detail.c_str(), band ? "yes" : "no", r.tau_mse_ratio, r.f_mse_ratio,
               ratio_ok ? "yes" : "no", secs));
}

} // namespace

int main()
{
    run(1, criterion1);
    run(2, criterion2);
    run(3, criterion3);
    run(4, criterion4);
    run(5, criterion5);
    run(6, criterion6);
    run(7, criterion7);
    run(8, criterion8);
    run(9, criterion9);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
