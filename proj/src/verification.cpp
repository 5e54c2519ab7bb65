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

#include "ucrb/verification.hpp"

#include "ucrb/crb_core.hpp"
#include "ucrb/extensions_scnr.hpp"
#include "ucrb/known_structure.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ucrb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using MeanFn = std::function<CVec(const Vec&)>;

Fim fd_fim(const MeanFn& mean, const Vec& theta0, const Vec& steps, double sigma2,
           std::vector<std::string> labels)
{
    const Index p = theta0.size();
    const CVec mu0 = mean(theta0);
    CMat J(mu0.size(), p);
    for (Index i = 0; i < p; ++i) {
        if (!(steps(i) > 0.0) || theta0(i) + steps(i) == theta0(i))
            throw std::domain_error("oracle_fim_mean: step underflow");
        Vec up = theta0, dn = theta0;
        up(i) += steps(i);
        dn(i) -= steps(i);
        J.col(i) = (mean(up) - mean(dn)) / (2.0 * steps(i));
    }
    Fim f;
    f.entries = (2.0 / sigma2) * (J.adjoint() * J).real();
    f.labels = std::move(labels);
    return f;
}

bool has_a(OracleModel m)
{
    return m == OracleModel::unknown_a_signal || m == OracleModel::unknown_a_structure;
}

Complex doppler(double f, Index k, double delta, double tau0)
{
    return std::polar(1.0, kTwoPi * f * (k * delta + tau0));
}

double golden_max(const std::function<double(double)>& fn, double lo, double hi, int iters)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double f1 = fn(x1), f2 = fn(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = fn(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = fn(x1);
        }
    }
    return f1 < f2 ? x2 : x1;
}

// Band-limited advance of each look: z_p(k) = y_p(k delta + tau), k < M.
class LookShifter {
public:
    LookShifter(const std::vector<CVec>& looks, double delta, Index M) : delta_(delta), M_(M)
    {
        Index n = 1;
        const Index len = looks.empty() ? 1 : looks.front().size();
        while (n < 2 * len) n *= 2;
        nfft_ = n;
        for (const auto& y : looks) {
            CVec pad = CVec::Zero(nfft_);
            pad.head(y.size()) = y;
            CVec spec(nfft_);
            fft_.fwd(spec.data(), pad.data(), nfft_);
            spectra_.push_back(std::move(spec));
        }
    }

    // sum of the advanced looks over the window and their total energy
    void advance(double tau, CVec& sum, double& energy)
    {
        sum = CVec::Zero(M_);
        energy = 0.0;
        CVec ramp(nfft_);
        for (Index m = 0; m < nfft_; ++m) {
            const double nu = (m <= nfft_ / 2 ? m : m - nfft_) / (nfft_ * delta_);
            ramp(m) = m == nfft_ / 2 ? Complex(std::cos(kTwoPi * nu * tau), 0.0) : std::polar(1.0, kTwoPi * nu * tau);
        }
        CVec tmp(nfft_), out(nfft_);
        for (const auto& spec : spectra_) {
            tmp = spec.cwiseProduct(ramp);
            fft_.inv(out.data(), tmp.data(), nfft_);
            sum += out.head(M_);
            energy += out.head(M_).squaredNorm();
        }
    }

private:
    Eigen::FFT<double> fft_;
    std::vector<CVec> spectra_;
    double delta_;
    Index M_;
    Index nfft_ = 1;
};

// Concentrated objective over (tau, f) given a per-tau window.
struct Search {
    std::function<void(double)> set_tau;             // recompute window for tau
    std::function<double(double, double)> objective;  // (tau, f) with current window
};

Estimate run_search(Search& s, double delta, const McConfig& cfg)
{
    double best = -std::numeric_limits<double>::infinity();
    Estimate e;
    for (Index n0 : cfg.tau_grid) {
        const double tau = n0 * delta;
        s.set_tau(tau);
        for (double f : cfg.f_grid) {
            const double v = s.objective(tau, f);
            if (v > best) {
                best = v;
                e = {tau, f};
            }
        }
    }
    if (!cfg.refine) return e;
    double df = 0.0;
    for (std::size_t i = 1; i < cfg.f_grid.size(); ++i)
        df = std::max(df, std::abs(cfg.f_grid[i] - cfg.f_grid[i - 1]));
    if (df == 0.0) df = 0.05;
    for (int round = 0; round < 3; ++round) {
        s.set_tau(e.tau);
        e.f = golden_max([&](double f) { return s.objective(e.tau, f); }, e.f - df, e.f + df, 48);
        e.tau = golden_max(
            [&](double t) {
                s.set_tau(t);
                return s.objective(t, e.f);
            },
            e.tau - delta, e.tau + delta, 48);
        df *= 0.5;
    }
    return e;
}

} // namespace

Fim oracle_fim_mean(const ContinuousSignal& truth, const Scenario& sc, OracleModel model, const OracleSteps& steps)
{
    sc.validate();
    if (model == OracleModel::known_structure || model == OracleModel::unknown_a_structure)
        throw std::invalid_argument("oracle_fim_mean: structure models need a PulseTrain");
    const Index M = truth.M;
    const bool with_s = model != OracleModel::known_signal;
    const Index head = has_a(model) ? 3 : 2;
    const Index p = head + (with_s ? 2 * M : 0);
    const int L = with_s ? sc.L : 0;
    const int P = with_s ? sc.P : 1;

    CVec s0(M);
    for (Index k = 0; k < M; ++k) s0(k) = truth.value(k, 0.0);

    Vec theta0 = Vec::Zero(p);
    theta0(0) = sc.tau0;
    theta0(1) = sc.f0;
    if (head == 3) theta0(2) = sc.a;
    for (Index k = 0; with_s && k < M; ++k) {
        theta0(head + 2 * k) = s0(k).real();
        theta0(head + 2 * k + 1) = s0(k).imag();
    }
    const MeanFn mean = [&](const Vec& th) {
        CVec mu(M * (L + P));
        const double a = head == 3 ? th(2) : sc.a;
        CVec s(M);
        for (Index k = 0; k < M; ++k) {
            const Complex own = with_s ? Complex(th(head + 2 * k), th(head + 2 * k + 1)) : s0(k);
            s(k) = own;
        }
        for (int l = 0; l < L; ++l) mu.segment(l * M, M) = s;
        for (int q = 0; q < P; ++q)
            for (Index k = 0; k < M; ++k) {
                const Complex shifted = s(k) - s0(k) + truth.value(k, -(th(0) - sc.tau0));
                mu((L + q) * M + k) = a * shifted * doppler(th(1), k, truth.delta, sc.tau0);
            }
        return mu;
    };
    Vec h = Vec::Constant(p, steps.s);
    h(0) = truth.delta * steps.tau_rel;
    h(1) = steps.f;
    std::vector<std::string> labels{"tau0", "f0"};
    if (head == 3) labels.push_back("a");
    if (with_s) labels = sample_labels(M, labels);
    return fd_fim(mean, theta0, h, sc.sigma_w2, labels);
}

Fim oracle_fim_mean(const PulseTrain& pt, const Scenario& sc, OracleModel model, const OracleSteps& steps)
{
    if (model != OracleModel::known_structure && model != OracleModel::unknown_a_structure) {
        ContinuousSignal truth{continuous_extension(pt), pt.M(), pt.delta()};
        return oracle_fim_mean(truth, sc, model, steps);
    }
    sc.validate();
    if (!pt.pulse.shape) throw std::invalid_argument("oracle_fim_mean: pulse has no closed form");
    const Index M = pt.M();
    const int Q = pt.Q();
    const Index head = has_a(model) ? 3 : 2;
    const Index p = head + 2 * Q;
    Vec theta0 = Vec::Zero(p);
    theta0(0) = sc.tau0;
    theta0(1) = sc.f0;
    if (head == 3) theta0(2) = sc.a;
    for (int q = 0; q < Q; ++q) {
        theta0(head + 2 * q) = pt.b(q).real();
        theta0(head + 2 * q + 1) = pt.b(q).imag();
    }
    const MeanFn mean = [&](const Vec& th) {
        CVec b(Q);
        for (int q = 0; q < Q; ++q) b(q) = Complex(th(head + 2 * q), th(head + 2 * q + 1));
        const double a = head == 3 ? th(2) : sc.a;
        CVec mu(M * (sc.L + sc.P));
        for (Index k = 0; k < M; ++k) {
            const Complex d = pulse_train_value(pt, b, k, 0.0);
            const Complex r = a * pulse_train_value(pt, b, k, -(th(0) - sc.tau0)) * doppler(th(1), k, pt.delta(), sc.tau0);
            for (int l = 0; l < sc.L; ++l) mu(l * M + k) = d;
            for (int q = 0; q < sc.P; ++q) mu((sc.L + q) * M + k) = r;
        }
        return mu;
    };
    Vec h = Vec::Constant(p, steps.s);
    h(0) = pt.delta() * steps.tau_rel;
    h(1) = steps.f;
    return fd_fim(mean, theta0, h, sc.sigma_w2,
                  amplitude_labels(Q, head == 3 ? std::vector<std::string>{"tau0", "f0", "a"}
                                                : std::vector<std::string>{"tau0", "f0"}));
}

double max_scaled_difference(const Mat& f, const Mat& g)
{
    if (f.rows() != g.rows() || f.cols() != g.cols())
        throw std::invalid_argument("max_scaled_difference: shape mismatch");
    double worst = 0.0;
    for (Index i = 0; i < f.rows(); ++i)
        for (Index j = 0; j < f.cols(); ++j) {
            const double scale = std::sqrt(std::abs(f(i, i) * g(j, j)));
            const double diff = std::abs(f(i, j) - g(i, j));
            if (scale > 0.0) worst = std::max(worst, diff / scale);
            else if (diff > 0.0) worst = std::numeric_limits<double>::infinity();
        }
    return worst;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Observations simulate_observations(const SampledSignal& sig, const Scenario& sc, std::uint64_t seed)
{
    sc.validate();
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, std::sqrt(sc.sigma_w2 / 2.0));
    auto noisy = [&](const CVec& mu) {
        CVec x = mu;
        for (Index n = 0; n < x.size(); ++n) x(n) += Complex(nd(gen), nd(gen));
        return x;
    };
    const CVec d = mean_vector(sig, sc, Path::direct);
    const CVec r = mean_vector(sig, sc, Path::reflected);
    Observations obs;
    for (int l = 0; l < sc.L; ++l) obs.direct.push_back(noisy(d));
    for (int p = 0; p < sc.P; ++p) obs.reflected.push_back(noisy(r));
    return obs;
}

void McConfig::validate() const
{
    if (trials < 1) throw std::invalid_argument("McConfig: trials must be positive");
    if (tau_grid.empty() || f_grid.empty()) throw std::invalid_argument("McConfig: empty search grid");
}

McConfig default_mc_config(const SampledSignal& sig, const Scenario& sc, int trials, std::uint64_t seed)
{
    McConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    const Index n0 = sc.delay_samples(sig.delta());
    for (Index n = std::max<Index>(0, n0 - 3); n <= n0 + 3; ++n) cfg.tau_grid.push_back(n);
    const double df = 1.0 / (4.0 * sig.size() * sig.delta());
    for (int j = -8; j <= 8; ++j) cfg.f_grid.push_back(sc.f0 + j * df);
    return cfg;
}

Estimate profile_ml_estimate(const Observations& obs, const Scenario& sc, double delta, Index M,
                             const McConfig& cfg)
{
    cfg.validate();
    if (obs.direct.empty() || obs.reflected.empty())
        throw unidentifiable_error("profile_ml_estimate: L=0 or P=0, delay and Doppler are not identifiable");
    const double a = sc.a;
    const double L = static_cast<double>(obs.direct.size());
    const double P = static_cast<double>(obs.reflected.size());
    CVec D = CVec::Zero(M);
    for (const auto& x : obs.direct) D += x.head(M);

    LookShifter shifter(obs.reflected, delta, M);
    CVec R;
    double energy = 0.0;
    Search s;
    s.set_tau = [&](double tau) { shifter.advance(tau, R, energy); };
    s.objective = [&](double tau, double f) {
        double acc = 0.0;
        for (Index k = 0; k < M; ++k) acc += std::norm(D(k) + a * R(k) * std::conj(doppler(f, k, delta, tau)));
        return acc / (L + a * a * P) - energy;
    };
    return run_search(s, delta, cfg);
}

Estimate known_signal_ml_estimate(const Observations& obs, const SampledSignal& sig, const Scenario& sc,
                                  const McConfig& cfg)
{
    cfg.validate();
    if (obs.reflected.empty()) throw unidentifiable_error("known_signal_ml_estimate: no reflected look");
    const Index M = sig.size();
    const double delta = sig.delta();
    const CVec& ref = sig.samples();
    LookShifter shifter({obs.reflected.front()}, delta, M);
    CVec z;
    double energy = 0.0;
    Search s;
    s.set_tau = [&](double tau) { shifter.advance(tau, z, energy); };
    s.objective = [&](double tau, double f) {
        Complex acc{0.0, 0.0};
        for (Index k = 0; k < M; ++k) acc += std::conj(ref(k)) * z(k) * std::conj(doppler(f, k, delta, tau));
        return 2.0 * sc.a * acc.real() - energy;
    };
    return run_search(s, delta, cfg);
}

McReport monte_carlo_report(const SampledSignal& sig, const Scenario& sc, const McConfig& cfg)
{
    cfg.validate();
    sc.validate();
    McReport rep;
    rep.config = cfg;
    const bool unknown_ok = sc.L > 0 && sc.P > 0;
    const bool known_ok = sc.P > 0;

    std::vector<double> eu_t, eu_f, ek_t, ek_f;
    for (int i = 0; i < cfg.trials; ++i) {
        const std::uint64_t seed = trial_seed(cfg.seed, static_cast<std::uint64_t>(i));
        rep.trial_seeds.push_back(seed);
        if (!known_ok) continue;
        const Observations obs = simulate_observations(sig, sc, seed);
        if (unknown_ok) {
            const Estimate e = profile_ml_estimate(obs, sc, sig.delta(), sig.size(), cfg);
            eu_t.push_back(e.tau - sc.tau0);
            eu_f.push_back(e.f - sc.f0);
        }
        const Estimate k = known_signal_ml_estimate(obs, sig, sc, cfg);
        ek_t.push_back(k.tau - sc.tau0);
        ek_f.push_back(k.f - sc.f0);
    }

    const CrbReport bu = jcrb_scaled_known_a(sig, sc);
    const CrbReport bk = jcrb_known(sig.scaled(sc.a), sc);
    auto make_row = [](const std::string& param, const std::string& est, const std::vector<double>& err,
                       const BoundValue& bound) {
        McRow row;
        row.parameter = param;
        row.estimator = est;
        row.bound = bound;
        if (err.empty()) {
            row.mse = row.bias = row.stderr_mse = row.ratio = std::numeric_limits<double>::quiet_NaN();
            return row;
        }
        const double n = static_cast<double>(err.size());
        double s1 = 0.0, s2 = 0.0, s4 = 0.0;
        for (double e : err) {
            s1 += e;
            s2 += e * e;
            s4 += e * e * e * e;
        }
        row.bias = s1 / n;
        row.mse = s2 / n;
        const double var_sq = std::max(0.0, s4 / n - row.mse * row.mse);
        row.stderr_mse = std::sqrt(var_sq / n);
        row.ratio = bound.singular ? std::numeric_limits<double>::quiet_NaN() : row.mse / bound.value;
        return row;
    };
    rep.rows.push_back(make_row("tau0", "unknown_signal", eu_t, bu.at("tau0")));
    rep.rows.push_back(make_row("f0", "unknown_signal", eu_f, bu.at("f0")));
    rep.rows.push_back(make_row("tau0", "known_signal", ek_t, bk.at("tau0")));
    rep.rows.push_back(make_row("f0", "known_signal", ek_f, bk.at("f0")));
    rep.tau_mse_ratio = rep.rows[0].mse / rep.rows[2].mse;
    rep.f_mse_ratio = rep.rows[1].mse / rep.rows[3].mse;
    if (!unknown_ok) rep.note = "L=0 or P=0: unknown-signal estimator not identifiable";
    return rep;
}

PulseTrain mc_reference_train()
{
    const double delta = 0.125;
    CVec b(1);
    b << Complex(1.0, 1.0);
    return PulseTrain(gaussian_pulse(63, delta, 4.0, 1.0), 64 * delta, b);
}

} // namespace ucrb
