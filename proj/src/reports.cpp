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

#include "ucrb/covariance_fim.hpp"
#include "ucrb/crb_core.hpp"
#include "ucrb/extensions_scnr.hpp"
#include "ucrb/known_structure.hpp"
#include "ucrb/overlap_paths.hpp"
#include "ucrb/verification.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef UCRB_VERSION
#define UCRB_VERSION "0.0.0"
#endif

namespace ucrb {

namespace {

using json = nlohmann::ordered_json;

struct Built {
    SampledSignal sig;
    std::optional<PulseTrain> pt;
};

std::vector<std::string> conventions(const RunConfig& cfg)
{
    if (cfg.amp_convention == "both") return {"unit", "sqrt2"};
    return {cfg.amp_convention};
}

Complex amplitude(const std::string& conv)
{
    return conv == "unit" ? Complex(1.0, 1.0) / std::sqrt(2.0) : Complex(1.0, 1.0);
}

bool is_integer(double v) { return std::abs(v - std::round(v)) < 1e-9; }

SampledSignal read_signal_file(const std::string& path, double delta)
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot read signal file " + path);
    std::vector<Complex> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ls(line);
        double re = 0.0, im = 0.0;
        if (!(ls >> re)) throw std::invalid_argument("signal file: bad line '" + line + "'");
        ls >> im;
        vals.emplace_back(re, im);
    }
    if (vals.empty()) throw std::invalid_argument("signal file: no samples");
    CVec s = Eigen::Map<CVec>(vals.data(), static_cast<Index>(vals.size()));
    return SampledSignal::from_samples(std::move(s), delta);
}

// K overrides the pulse spacing in samples (0: from Tp).
Built build_signal(const RunConfig& cfg, const std::string& conv, double delta, int n_p, Index K = 0)
{
    if (cfg.signal == "triangle") return {triangle_wave(n_p), std::nullopt};
    if (cfg.signal.rfind("file:", 0) == 0) return {read_signal_file(cfg.signal.substr(5), delta), std::nullopt};
    const double Tp = K > 0 ? K * delta : cfg.Tp.value_or(n_p * delta);
    PulseTrain pt(gaussian_pulse(n_p, delta, cfg.center, cfg.width2), Tp, CVec::Constant(cfg.Q, amplitude(conv)));
    return {synthesize_pulse_train(pt), pt};
}

Scenario scenario_of(const RunConfig& cfg)
{
    Scenario sc;
    sc.tau0 = cfg.tau0;
    sc.f0 = cfg.f0;
    sc.L = cfg.L;
    sc.P = cfg.P;
    sc.a = cfg.a;
    sc.sigma_w2 = cfg.sigma2;
    return sc;
}

void add(ReportRow& row, const std::string& name, const CrbReport& r, const std::string& bound)
{
    row.cells.emplace_back(name, Cell::of(r.at(bound), r.method));
}

void standard_cells(ReportRow& row, const Built& b, const Scenario& sc, const std::string& suffix = "")
{
    const CrbReport known = jcrb_known(b.sig.scaled(sc.a), sc);
    const CrbReport unknown = jcrb_scaled_known_a(b.sig, sc);
    add(row, "jcrb_tau0" + suffix, known, "tau0");
    add(row, "jcrb_tau0_s" + suffix, unknown, "tau0");
    if (b.pt) add(row, "jcrb_tau0_b" + suffix, jcrb_known_structure(*b.pt, sc), "tau0");
    add(row, "jcrb_f0" + suffix, known, "f0");
    add(row, "jcrb_f0_s" + suffix, unknown, "f0");
    if (b.pt) add(row, "jcrb_f0_b" + suffix, jcrb_known_structure(*b.pt, sc), "f0");
}

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(std::string s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json key_json(const KeyValue& v)
{
    return std::visit([](const auto& x) { return json(x); }, v);
}

std::string key_text(const KeyValue& v)
{
    if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
    return std::get<std::string>(v);
}

} // namespace

std::string version() { return UCRB_VERSION; }

std::vector<double> Sweep::values() const
{
    if (!(step > 0.0)) throw std::invalid_argument("sweep: step must be positive");
    if (stop < start) throw std::invalid_argument("sweep: stop < start");
    std::vector<double> v;
    const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
    for (long long i = 0; i <= n; ++i) v.push_back(start + i * step);
    return v;
}

Sweep parse_sweep(const std::string& text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("sweep: expected axis=start:stop[:step]");
    Sweep s;
    s.axis = text.substr(0, eq);
    if (s.axis == "sigma2") s.axis = "sigma_w2";
    if (s.axis == "np") s.axis = "n_p";
    static const std::vector<std::string> axes{"L", "P", "n_p", "n0", "a", "sigma_w2"};
    if (std::find(axes.begin(), axes.end(), s.axis) == axes.end())
        throw std::invalid_argument("sweep: unknown axis '" + s.axis + "'");
    std::vector<double> parts;
    std::stringstream ss(text.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("sweep: bad number '" + item + "'");
        }
    }
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("sweep: expected start:stop[:step]");
    s.start = parts[0];
    s.stop = parts[1];
    if (parts.size() == 3) s.step = parts[2];
    s.values();
    return s;
}

void RunConfig::validate() const
{
    static const std::vector<std::string> cmds{"table1", "sweep", "overlap", "montecarlo", "crb"};
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
        throw std::invalid_argument("unknown command '" + command + "'");
    if (signal != "gaussian" && signal != "triangle" && signal.rfind("file:", 0) != 0)
        throw std::invalid_argument("signal must be gaussian, triangle or file:<path>");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (n_p < 1) throw std::invalid_argument("np must be at least 1");
    if (Q < 1) throw std::invalid_argument("Q must be at least 1");
    if (Tp && !(*Tp > 0.0)) throw std::invalid_argument("Tp must be positive");
    if (!(tau0 >= 0.0)) throw std::invalid_argument("tau0 must be nonnegative");
    if (L < 0 || P < 0) throw std::invalid_argument("L and P must be nonnegative");
    if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    if (!(width2 > 0.0)) throw std::invalid_argument("width2 must be positive");
    if (amp_convention != "unit" && amp_convention != "sqrt2" && amp_convention != "both")
        throw std::invalid_argument("amp-convention must be unit, sqrt2 or both");
    if (format != "csv" && format != "json") throw std::invalid_argument("format must be csv or json");
    if (trials < 1) throw std::invalid_argument("trials must be positive");
    if (command == "sweep" && !sweep) throw std::invalid_argument("sweep needs --sweep axis=start:stop[:step]");
    if (command != "sweep" && sweep) throw std::invalid_argument("--sweep is only valid with the sweep command");
    if (signal == "triangle" && n_p % 2 != 0) throw std::invalid_argument("triangle signal needs an even np (M)");
}

RunConfig default_config(const std::string& command)
{
    RunConfig cfg;
    cfg.command = command;
    if (command == "overlap") {
        cfg.signal = "triangle";
        cfg.n_p = 16;
        cfg.delta = 1.0;
    } else if (command == "montecarlo") {
        cfg.delta = 0.125;
        cfg.n_p = 63;
        cfg.Tp = 8.0;
        cfg.Q = 1;
        cfg.width2 = 1.0;
        cfg.tau0 = 1.0;
        cfg.f0 = 0.25;
        cfg.sigma2 = 1e-4;
        cfg.amp_convention = "sqrt2";
    }
    return cfg;
}

void apply_config_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw io_error("cannot read config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config file: top level must be an object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const json& v = it.value();
            if (k == "signal") cfg.signal = v.get<std::string>();
            else if (k == "delta") cfg.delta = v.get<double>();
            else if (k == "np") cfg.n_p = v.get<int>();
            else if (k == "Q") cfg.Q = v.get<int>();
            else if (k == "Tp") cfg.Tp = v.get<double>();
            else if (k == "tau0") cfg.tau0 = v.get<double>();
            else if (k == "f0") cfg.f0 = v.get<double>();
            else if (k == "L") cfg.L = v.get<int>();
            else if (k == "P") cfg.P = v.get<int>();
            else if (k == "a") cfg.a = v.get<double>();
            else if (k == "sigma2") cfg.sigma2 = v.get<double>();
            else if (k == "center") cfg.center = v.get<double>();
            else if (k == "width2") cfg.width2 = v.get<double>();
            else if (k == "amp-convention") cfg.amp_convention = v.get<std::string>();
            else if (k == "sweep") cfg.sweep = parse_sweep(v.get<std::string>());
            else if (k == "format") cfg.format = v.get<std::string>();
            else if (k == "out") cfg.out = v.get<std::string>();
            else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
            else if (k == "trials") cfg.trials = v.get<int>();
            else throw std::invalid_argument("config file: unknown key '" + k + "'");
        }
    } catch (const json::type_error& e) {
        throw std::invalid_argument(std::string("config file: ") + e.what());
    }
}

ReportTable cmd_table1(const RunConfig& cfg)
{
    ReportTable t;
    t.command = "table1";
    t.note = "a fixed at 1";
    Scenario sc = scenario_of(cfg);
    sc.a = 1.0;
    for (const auto& conv : conventions(cfg)) {
        const Built b = build_signal(cfg, conv, cfg.delta, cfg.n_p);
        const CrbReport known = jcrb_known(b.sig, sc);
        for (int L : {1, 2, 100}) {
            sc.L = L;
            const CrbReport cf = jcrb_unknown(b.sig, sc);
            const CrbReport sn = jcrb_unknown_schur(b.sig, sc);
            ReportRow row;
            row.keys = {{"amp_convention", conv}, {"L", std::int64_t{L}}, {"P", std::int64_t{sc.P}}};
            add(row, "jcrb_tau0_s", cf, "tau0");
            add(row, "jcrb_tau0_s_schur", sn, "tau0");
            add(row, "jcrb_tau0", known, "tau0");
            add(row, "jcrb_f0_s", cf, "f0");
            add(row, "jcrb_f0_s_schur", sn, "f0");
            add(row, "jcrb_f0", known, "f0");
            for (const std::string p : {"tau0", "f0"}) {
                const BoundValue& u = cf.at(p);
                const BoundValue& k = known.at(p);
                row.cells.emplace_back("ratio_" + p, u.singular || k.singular
                                                         ? Cell{0.0, Method::closed_form, true}
                                                         : Cell::number(u.value / k.value, Method::closed_form));
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

ReportTable cmd_sweep(const RunConfig& cfg)
{
    ReportTable t;
    t.command = "sweep";
    const Sweep& sw = *cfg.sweep;
    const bool integral = sw.axis == "L" || sw.axis == "P" || sw.axis == "n_p" || sw.axis == "n0";
    for (const auto& conv : conventions(cfg)) {
        for (double v : sw.values()) {
            if (integral && !is_integer(v)) throw std::invalid_argument("sweep: axis " + sw.axis + " needs integers");
            if (integral && v < 0) throw std::invalid_argument("sweep: negative value on axis " + sw.axis);
            RunConfig c = cfg;
            Scenario sc = scenario_of(cfg);
            double delta = cfg.delta;
            int n_p = cfg.n_p;
            Index K = 0;
            const auto iv = static_cast<int>(std::lround(v));
            if (sw.axis == "L") sc.L = iv;
            else if (sw.axis == "P") sc.P = iv;
            else if (sw.axis == "a") sc.a = v;
            else if (sw.axis == "sigma_w2") sc.sigma_w2 = v;
            else if (sw.axis == "n0") sc.tau0 = iv * cfg.delta;
            else if (sw.axis == "n_p") {
                // fixed pulse duration, one extra sample of spacing so nothing is truncated
                if (iv < 1) throw std::invalid_argument("sweep: n_p must be at least 1");
                delta = cfg.delta * cfg.n_p / iv;
                n_p = iv;
                K = iv + 1;
            }
            if (!(sc.a > 0.0) || !(sc.sigma_w2 > 0.0)) throw std::invalid_argument("sweep: value out of range");
            const Built b = build_signal(c, conv, delta, n_p, K);
            ReportRow row;
            row.keys = {{"amp_convention", conv}};
            if (integral) row.keys.emplace_back(sw.axis, std::int64_t{iv});
            else row.keys.emplace_back(sw.axis, v);
            standard_cells(row, b, sc);
            if (sw.axis == "L") {
                Scenario pl = sc;
                pl.P = sc.L;
                standard_cells(row, b, pl, "_pl");
            }
            if (sw.axis == "a" && b.pt) {
                const CrbReport ua = jcrb_unknown_a_structure(*b.pt, sc);
                add(row, "jcrb_tau0_b_ua", ua, "tau0");
                add(row, "jcrb_f0_b_ua", ua, "f0");
                add(row, "crb_tau0_s_ua", crb_separate_unknown_a(b.sig, sc), "tau0_s");
            }
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

ReportTable cmd_overlap(const RunConfig& cfg)
{
    if (cfg.signal != "triangle") throw std::invalid_argument("overlap: only the triangle signal is supported");
    ReportTable t;
    t.command = "overlap";
    Scenario sc = scenario_of(cfg);
    const SampledSignal tri = triangle_wave(cfg.n_p);
    const double non = sc.P > 0 ? 2.0 * sc.sigma_w2 / (sc.P * tri.deriv().squaredNorm())
                                : std::numeric_limits<double>::infinity();
    for (const OverlapRow& r : triangle_overlap_curve(cfg.n_p, sc)) {
        ReportRow row;
        row.keys = {{"n0", std::int64_t{r.n0}}, {"regime", to_string(r.regime)}};
        row.cells.emplace_back("crb_tau0", Cell::of(r.crb, Method::schur_numeric));
        row.cells.emplace_back("crb_tau0_closed", r.closed.singular || std::isinf(r.closed.value)
                                                      ? Cell{0.0, Method::closed_form, true}
                                                      : Cell::of(r.closed, Method::closed_form));
        row.cells.emplace_back("crb_no_overlap", sc.P > 0 ? Cell::number(non, Method::closed_form)
                                                         : Cell{0.0, Method::closed_form, true});
        t.rows.push_back(std::move(row));
    }
    return t;
}

ReportTable cmd_montecarlo(const RunConfig& cfg)
{
    ReportTable t;
    t.command = "montecarlo";
    const std::string conv = conventions(cfg).front();
    const Built b = build_signal(cfg, conv, cfg.delta, cfg.n_p);
    const Scenario sc = scenario_of(cfg);
    const McConfig mc = default_mc_config(b.sig, sc, cfg.trials, cfg.seed);
    const McReport rep = monte_carlo_report(b.sig, sc, mc);
    for (const McRow& r : rep.rows) {
        ReportRow row;
        row.keys = {{"parameter", r.parameter}, {"estimator", r.estimator}};
        const bool none = std::isnan(r.mse);
        auto mc_cell = [&](double v) { return none ? Cell{0.0, Method::monte_carlo, true} : Cell::number(v, Method::monte_carlo); };
        row.cells.emplace_back("mse", mc_cell(r.mse));
        row.cells.emplace_back("bias", mc_cell(r.bias));
        row.cells.emplace_back("stderr_mse", mc_cell(r.stderr_mse));
        row.cells.emplace_back("jcrb", Cell::of(r.bound, Method::closed_form));
        row.cells.emplace_back("ratio", none || r.bound.singular ? Cell{0.0, Method::monte_carlo, true}
                                                                  : Cell::number(r.ratio, Method::monte_carlo));
        t.rows.push_back(std::move(row));
    }
    t.trial_seeds = rep.trial_seeds;
    t.note = rep.note.empty() ? "unknown/known mse ratio: tau0 " + format_double(rep.tau_mse_ratio) + ", f0 " +
                                    format_double(rep.f_mse_ratio)
                              : rep.note;
    return t;
}

ReportTable cmd_crb(const RunConfig& cfg)
{
    ReportTable t;
    t.command = "crb";
    const Scenario sc = scenario_of(cfg);
    for (const auto& conv : conventions(cfg)) {
        const Built b = build_signal(cfg, conv, cfg.delta, cfg.n_p);
        ReportRow row;
        row.keys = {{"amp_convention", conv}, {"L", std::int64_t{sc.L}}, {"P", std::int64_t{sc.P}}};
        standard_cells(row, b, sc);
        const CrbReport scaled = jcrb_scaled_known_a(b.sig, sc);
        add(row, "crb_tau0_s", scaled, "tau0_sep");
        add(row, "crb_f0_s", scaled, "f0_sep");
        if (sc.a == 1.0 && b.sig.size() <= 4096) {
            const CrbReport sn = jcrb_unknown_schur(b.sig, sc);
            add(row, "jcrb_tau0_s_schur", sn, "tau0");
            add(row, "jcrb_f0_s_schur", sn, "f0");
        }
        add(row, "jcrb_tau0_s_ua", jcrb_unknown_a_signal(b.sig, sc), "tau0");
        add(row, "crb_tau0_s_ua", crb_separate_unknown_a(b.sig, sc), "tau0_s");
        if (b.pt) {
            const CrbReport ua = jcrb_unknown_a_structure(*b.pt, sc);
            add(row, "jcrb_tau0_b_ua", ua, "tau0");
            add(row, "jcrb_f0_b_ua", ua, "f0");
        }
        const Index n0 = std::llround(sc.tau0 / b.sig.delta());
        const bool on_grid = std::abs(sc.tau0 - n0 * b.sig.delta()) <= 1e-9 * std::max(1.0, sc.tau0);
        const Index dim = (n0 + b.sig.size()) * (sc.L + sc.P);
        if (on_grid && dim > 0 && dim <= 96) {
            const CMat sigma = sc.sigma_w2 * CMat::Identity(dim, dim);
            const StackedModel m = build_stacked(b.sig, sc, sigma);
            const CrbReport cov = crb_correlated(m, dC_all(m, b.sig, sc));
            add(row, "cov_crb_tau0", cov, "tau0");
            add(row, "cov_crb_f0", cov, "f0");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

ReportTable run_command(const RunConfig& cfg)
{
    cfg.validate();
    if (cfg.command == "table1") return cmd_table1(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    if (cfg.command == "overlap") return cmd_overlap(cfg);
    if (cfg.command == "montecarlo") return cmd_montecarlo(cfg);
    return cmd_crb(cfg);
}

std::string to_csv(const ReportTable& t)
{
    std::ostringstream out;
    if (t.rows.empty()) return "";
    const ReportRow& first = t.rows.front();
    std::vector<std::string> header;
    for (const auto& [k, v] : first.keys) header.push_back(k);
    for (const auto& [k, c] : first.cells) header.push_back(k);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
    out << "\n";
    for (const auto& row : t.rows) {
        if (row.keys.size() + row.cells.size() != header.size())
            throw std::logic_error("to_csv: rows have different columns");
        bool firstcol = true;
        for (const auto& [k, v] : row.keys) {
            out << (firstcol ? "" : ",") << csv_field(key_text(v));
            firstcol = false;
        }
        for (const auto& [k, c] : row.cells) {
            out << (firstcol ? "" : ",") << (c.singular ? "singular" : format_double(c.value));
            firstcol = false;
        }
        out << "\n";
    }
    return out.str();
}

std::string to_json(const ReportTable& t, const RunConfig& cfg)
{
    json j;
    json c;
    c["command"] = cfg.command;
    c["signal"] = cfg.signal;
    c["delta"] = cfg.delta;
    c["np"] = cfg.n_p;
    c["Q"] = cfg.Q;
    c["Tp"] = cfg.Tp ? json(*cfg.Tp) : json(nullptr);
    c["tau0"] = cfg.tau0;
    c["f0"] = cfg.f0;
    c["L"] = cfg.L;
    c["P"] = cfg.P;
    c["a"] = cfg.a;
    c["sigma2"] = cfg.sigma2;
    c["center"] = cfg.center;
    c["width2"] = cfg.width2;
    c["amp-convention"] = cfg.amp_convention;
    if (cfg.sweep)
        c["sweep"] = cfg.sweep->axis + "=" + format_double(cfg.sweep->start) + ":" + format_double(cfg.sweep->stop) +
                     ":" + format_double(cfg.sweep->step);
    else
        c["sweep"] = nullptr;
    c["format"] = cfg.format;
    c["trials"] = cfg.trials;
    c["seed"] = cfg.seed;
    j["config"] = c;

    json rows = json::array();
    for (const auto& row : t.rows) {
        json r;
        json keys;
        for (const auto& [k, v] : row.keys) keys[k] = key_json(v);
        json cells;
        for (const auto& [k, cell] : row.cells) {
            json x;
            x["value"] = cell.singular ? json(nullptr) : json(cell.value);
            x["method"] = to_string(cell.method);
            x["singular"] = cell.singular;
            cells[k] = x;
        }
        r["key"] = keys;
        r["cells"] = cells;
        rows.push_back(r);
    }
    j["rows"] = rows;
    json prov;
    prov["version"] = "ucrb " + version();
    prov["seed"] = cfg.seed;
    if (!t.trial_seeds.empty()) prov["trial_seeds"] = t.trial_seeds;
    if (!t.note.empty()) prov["note"] = t.note;
    j["provenance"] = prov;
    return j.dump(2) + "\n";
}

void write_report(const ReportTable& t, const RunConfig& cfg)
{
    const std::string text = cfg.format == "json" ? to_json(t, cfg) : to_csv(t);
    if (cfg.out.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw io_error("cannot write to stdout");
        return;
    }
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw io_error("cannot open output file " + cfg.out);
    out << text;
    out.close();
    if (!out) throw io_error("failed writing output file " + cfg.out);
}

} // namespace ucrb
