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

#ifndef UCRB_REPORTS_HPP
#define UCRB_REPORTS_HPP

#include "ucrb/signal_models.hpp"
#include "ucrb/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ucrb {

/// File or stream failure (CLI exit code 2).
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Sweep {
    std::string axis;  // L, P, n_p, n0, a, sigma_w2
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

/// Parses "axis=start:stop[:step]". Throws std::invalid_argument.
Sweep parse_sweep(const std::string& text);

struct RunConfig {
    std::string command = "crb";
    std::string signal = "gaussian";  // gaussian | triangle | file:<path>
    double delta = 0.01;
    int n_p = 500;
    int Q = 2;
    std::optional<double> Tp;  // default n_p * delta
    double tau0 = 0.05;
    double f0 = 20.0;
    int L = 1;
    int P = 1;
    double a = 1.0;
    double sigma2 = 1.0;
    double center = 4.0;
    double width2 = 9.0;
    std::string amp_convention = "unit";  // unit | sqrt2 | both
    std::optional<Sweep> sweep;
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = 42;
    int trials = 500;

    void validate() const;
};

/// Per-command defaults (montecarlo uses its own reference scenario).
RunConfig default_config(const std::string& command);

/// Overlays keys from a JSON config file (same names as the flags).
/// Throws io_error when unreadable, std::invalid_argument on bad content.
void apply_config_file(RunConfig& cfg, const std::string& path);

struct Cell {
    double value = 0.0;
    Method method = Method::closed_form;
    bool singular = false;

    static Cell of(const BoundValue& b, Method m) { return {b.value, m, b.singular}; }
    static Cell number(double v, Method m) { return {v, m, false}; }
};

using KeyValue = std::variant<std::int64_t, double, std::string>;

struct ReportRow {
    std::vector<std::pair<std::string, KeyValue>> keys;
    std::vector<std::pair<std::string, Cell>> cells;
};

struct ReportTable {
    std::string command;
    std::vector<ReportRow> rows;
    std::vector<std::uint64_t> trial_seeds;  // montecarlo only
    std::string note;
};

ReportTable cmd_table1(const RunConfig& cfg);
ReportTable cmd_sweep(const RunConfig& cfg);
ReportTable cmd_overlap(const RunConfig& cfg);
ReportTable cmd_montecarlo(const RunConfig& cfg);
ReportTable cmd_crb(const RunConfig& cfg);
ReportTable run_command(const RunConfig& cfg);

std::string to_csv(const ReportTable& t);
std::string to_json(const ReportTable& t, const RunConfig& cfg);

/// Writes to cfg.out, or stdout when empty. Throws io_error.
void write_report(const ReportTable& t, const RunConfig& cfg);

/// Library version string.
std::string version();

} // namespace ucrb

#endif // UCRB_REPORTS_HPP
