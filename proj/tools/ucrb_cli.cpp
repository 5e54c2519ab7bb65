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

#include "ucrb/reports.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
    std::string config;
    std::string signal;
    double delta = 0.0;
    int n_p = 0;
    int Q = 0;
    double Tp = 0.0;
    double tau0 = 0.0;
    double f0 = 0.0;
    int L = 0;
    int P = 0;
    double a = 0.0;
    double sigma2 = 0.0;
    double center = 0.0;
    double width2 = 0.0;
    std::string amp;
    std::string sweep;
    std::string format;
    std::string out;
    std::uint64_t seed = 0;
    int trials = 0;
};

void add_flags(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "JSON config file (flags override it)");
    sub->add_option("--signal", f.signal, "gaussian | triangle | file:<path>");
    sub->add_option("--delta", f.delta, "sampling interval");
    sub->add_option("--np", f.n_p, "samples per pulse (M for the triangle)");
    sub->add_option("--Q", f.Q, "pulse count");
    sub->add_option("--Tp", f.Tp, "pulse period");
    sub->add_option("--tau0", f.tau0, "delay");
    sub->add_option("--f0", f.f0, "Doppler shift");
    sub->add_option("--L", f.L, "direct-path looks");
    sub->add_option("--P", f.P, "reflected-path looks");
    sub->add_option("--a", f.a, "reflected-path scale");
    sub->add_option("--sigma2", f.sigma2, "noise variance");
    sub->add_option("--center", f.center, "Gaussian pulse center");
    sub->add_option("--width2", f.width2, "Gaussian pulse width parameter");
    sub->add_option("--amp-convention", f.amp, "unit | sqrt2 | both")
        ->check(CLI::IsMember({"unit", "sqrt2", "both"}));
    sub->add_option("--sweep", f.sweep, "axis=start:stop[:step]");
    sub->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--trials", f.trials, "Monte-Carlo trials");
}

ucrb::RunConfig resolve(const std::string& command, const CLI::App* sub, const Flags& f)
{
    ucrb::RunConfig cfg = ucrb::default_config(command);
    if (!f.config.empty()) ucrb::apply_config_file(cfg, f.config);
    auto given = [&](const char* name) { return sub->count(name) > 0; };
    if (given("--signal")) cfg.signal = f.signal;
    if (given("--delta")) cfg.delta = f.delta;
    if (given("--np")) cfg.n_p = f.n_p;
    if (given("--Q")) cfg.Q = f.Q;
    if (given("--Tp")) cfg.Tp = f.Tp;
    if (given("--tau0")) cfg.tau0 = f.tau0;
    if (given("--f0")) cfg.f0 = f.f0;
    if (given("--L")) cfg.L = f.L;
    if (given("--P")) cfg.P = f.P;
    if (given("--a")) cfg.a = f.a;
    if (given("--sigma2")) cfg.sigma2 = f.sigma2;
    if (given("--center")) cfg.center = f.center;
    if (given("--width2")) cfg.width2 = f.width2;
    if (given("--amp-convention")) cfg.amp_convention = f.amp;
    if (given("--sweep")) cfg.sweep = ucrb::parse_sweep(f.sweep);
    if (given("--format")) cfg.format = f.format;
    if (given("--out")) cfg.out = f.out;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--trials")) cfg.trials = f.trials;
    cfg.command = command;
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cramer-Rao bounds for delay-Doppler estimation with unknown signals"};
    app.set_version_flag("--version", "ucrb " + ucrb::version());
    app.require_subcommand(1);

    Flags flags;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"table1", "unknown vs known signal bounds for L in {1, 2, 100}"},
        {"sweep", "bound curves over one axis"},
        {"overlap", "overlapped-path delay bound for the triangle wave"},
        {"montecarlo", "ML estimator MSE against the bounds"},
        {"crb", "one-shot bound evaluation"},
    };
    for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        const ucrb::RunConfig cfg = resolve(sub->get_name(), sub, flags);
        const ucrb::ReportTable table = ucrb::run_command(cfg);
        ucrb::write_report(table, cfg);
    } catch (const ucrb::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
