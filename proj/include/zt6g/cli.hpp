#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zt6g/engine.hpp"
#include "zt6g/error.hpp"
#include "zt6g/scenario.hpp"

namespace zt6g::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kValidationError = 2 };

/// Bad flag values. Maps to exit code 2 like scenario validation errors.
class UsageError : public Error {
    using Error::Error;
};

/// Six significant digits, no trailing zeros.
inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string fmt_num(std::uint64_t v) { return std::to_string(v); }

inline void write_csv_header(std::ostream& os, const std::vector<std::string>& communities) {
    os << "t,attack_total,attack_blocked,attack_delivered,filtering_rate,accum_filtering_rate,missed_cum";
    for (const auto& c : communities) {
        os << ",S_" << c << ",I_" << c << ",R_" << c;
    }
    os << '\n';
}

inline std::string run_csv(const RunMetrics& m) {
    std::ostringstream os;
    write_csv_header(os, m.communities);
    for (const auto& r : m.rows) {
        os << r.t << ',' << r.attack_total << ',' << r.attack_blocked << ',' << r.attack_delivered << ','
           << fmt_num(r.filtering_rate) << ',' << fmt_num(r.accum_filtering_rate) << ',' << r.missed_cum;
        for (const auto& s : r.sir) {
            os << ',' << s.s << ',' << s.i << ',' << s.r;
        }
        os << '\n';
    }
    return os.str();
}

inline std::string averaged_csv(const AveragedMetrics& m) {
    std::ostringstream os;
    write_csv_header(os, m.communities);
    for (const auto& r : m.rows) {
        os << r.t << ',' << fmt_num(r.attack_total) << ',' << fmt_num(r.attack_blocked) << ','
           << fmt_num(r.attack_delivered) << ',' << fmt_num(r.filtering_rate) << ','
           << fmt_num(r.accum_filtering_rate) << ',' << fmt_num(r.missed_cum);
        for (const auto& s : r.sir) {
            os << ',' << fmt_num(s[0]) << ',' << fmt_num(s[1]) << ',' << fmt_num(s[2]);
        }
        os << '\n';
    }
    return os.str();
}

/// Side-by-side filtering series, one column group per labelled batch.
/// Shorter batches repeat their final row.
inline std::string joined_csv(const std::vector<std::pair<std::string, const AveragedMetrics*>>& series) {
    std::ostringstream os;
    os << 't';
    std::size_t len = 0;
    for (const auto& [label, m] : series) {
        os << ',' << label << "_filtering_rate," << label << "_accum_filtering_rate," << label << "_missed_cum";
        len = std::max(len, m->rows.size());
    }
    os << '\n';
    for (std::size_t i = 0; i < len; ++i) {
        os << i;
        for (const auto& [label, m] : series) {
            if (m->rows.empty()) {
                os << ",1,1,0";
                continue;
            }
            const bool pad = i >= m->rows.size();
            const auto& r = pad ? m->rows.back() : m->rows[i];
            os << ',' << fmt_num(pad ? 1.0 : r.filtering_rate) << ',' << fmt_num(r.accum_filtering_rate) << ','
               << fmt_num(r.missed_cum);
        }
        os << '\n';
    }
    return os.str();
}

inline nlohmann::json stat_json(const Stat& s) {
    return {{"mean", s.mean}, {"sd", s.sd}, {"min", s.min}, {"max", s.max}, {"n", s.n}};
}

inline nlohmann::json run_summary_json(const RunSummary& s) {
    nlohmann::json j = {
        {"seed", s.seed},
        {"accum_filtering_rate", s.accum_filtering_rate},
        {"attack_total", s.attack_total},
        {"attack_blocked", s.attack_blocked},
        {"missed_packets", s.missed_packets},
        {"attack_start_s", s.attack_start},
        {"end_time_s", s.end_time},
        {"final_recovered", s.final_recovered},
        {"evaluator_calls", s.evaluator_calls},
        {"first_attack_requests", s.first_attack_requests},
        {"first_attack_denied", s.first_attack_denied},
    };
    j["extinction_time_s"] = s.extinction_time ? nlohmann::json(*s.extinction_time) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json averaged_summary_json(const AveragedMetrics& m) {
    return {{"runs", m.runs.size()},
            {"accum_filtering_rate", stat_json(m.accum_filtering_rate)},
            {"missed_packets", stat_json(m.missed_packets)},
            {"extinction_time_s", stat_json(m.extinction_time)},
            {"evaluator_calls", stat_json(m.evaluator_calls)}};
}

/// Comma-separated architecture names; duplicates are dropped with a warning.
inline std::vector<Architecture> parse_arch_list(const std::string& text, std::ostream& warn) {
    std::vector<Architecture> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto a = parse_architecture(item);
        if (!a) {
            throw UsageError("unknown architecture '" + item + "' (valid: " + kArchitectureNames + ")");
        }
        if (std::find(out.begin(), out.end(), *a) != out.end()) {
            warn << "warning: architecture '" << item << "' listed more than once; ignoring duplicate\n";
            continue;
        }
        out.push_back(*a);
    }
    if (out.empty()) {
        throw UsageError("no architectures given");
    }
    return out;
}

/// Comma-separated positive integers, in the given order.
inline std::vector<Second> parse_period_list(const std::string& text) {
    std::vector<Second> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Second v = 0;
        const auto* end = item.data() + item.size();
        auto [ptr, ec] = std::from_chars(item.data(), end, v);
        if (item.empty() || ec != std::errc{} || ptr != end || v < 1) {
            throw UsageError("validity period '" + item + "' is not a positive integer number of seconds");
        }
        if (std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(v);
        }
    }
    if (out.empty()) {
        throw UsageError("no validity periods given");
    }
    return out;
}

/// --jobs if given, else ZT6G_JOBS, else the hardware thread count.
inline unsigned resolve_jobs(std::optional<unsigned> flag) {
    if (flag) {
        if (*flag < 1) {
            throw UsageError("--jobs must be >= 1");
        }
        return *flag;
    }
    if (const char* env = std::getenv("ZT6G_JOBS"); env && *env) {
        unsigned v = 0;
        const std::string s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1) {
            throw UsageError("ZT6G_JOBS must be a positive integer, got '" + s + "'");
        }
        return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Files of one bundle, written only once every one of them has been computed.
class Bundle {
public:
    void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }
    void add_json(std::string name, const nlohmann::json& j) { add(std::move(name), j.dump(2) + "\n"); }

    void write(const std::filesystem::path& dir) const {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            throw std::ios_base::failure("cannot create output directory '" + dir.string() + "': " + ec.message());
        }
        for (const auto& [name, content] : files_) {
            std::ofstream out(dir / name, std::ios::binary);
            out << content;
            if (!out.flush()) {
                throw std::ios_base::failure("cannot write '" + (dir / name).string() + "'");
            }
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

/// The resolved scenario plus how it was invoked. Loadable as a scenario.
inline nlohmann::json resolved_json(const Scenario& s, const nlohmann::json& invocation) {
    auto j = scenario_to_json(s);
    j["invocation"] = invocation;
    return j;
}

struct RunOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> arch;
    std::string out_dir;
    bool export_ledger = false;
};

struct BatchOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> runs;
    std::optional<std::string> archs;
    std::optional<std::string> periods;
    std::optional<unsigned> jobs;
    std::string out_dir;
    bool per_run = false;
};

namespace detail {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        body();
        return kOk;
    } catch (const InvalidScenario& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
}

inline void add_per_run(Bundle& b, const std::string& prefix, const AveragedMetrics& m) {
    for (const auto& r : m.runs) {
        b.add(prefix + "_seed" + std::to_string(r.summary.seed) + ".csv", run_csv(r));
    }
}

}  // namespace detail

inline int cmd_run(const RunOptions& o, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        Scenario sc = load_scenario(o.scenario_path);
        if (o.arch) {
            auto a = parse_arch_list(*o.arch, err);
            if (a.size() != 1) {
                throw UsageError("run takes exactly one architecture");
            }
            sc.engine.architecture = a.front();
        }
        const auto seed = o.seed.value_or(sc.monte_carlo.base_seed);
        Ledger ledger;
        const auto m = run(sc, seed, ledger);

        Scenario echo = sc;
        echo.monte_carlo = {1, seed};
        Bundle b;
        b.add("run.csv", run_csv(m));
        auto summary = run_summary_json(m.summary);
        summary["architecture"] = to_string(sc.engine.architecture);
        b.add_json("summary.json", summary);
        b.add_json("resolved.json", resolved_json(echo, {{"command", "run"}, {"seed", seed}}));
        if (o.export_ledger) {
            std::ostringstream os;
            ledger.write_jsonl(os);
            b.add("ledger.jsonl", os.str());
        }
        b.write(o.out_dir);
    });
}

inline int cmd_compare(const BatchOptions& o, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        Scenario sc = load_scenario(o.scenario_path);
        const auto archs = parse_arch_list(o.archs.value_or("zta6g,tbpf,tris"), err);
        const auto runs = o.runs.value_or(sc.monte_carlo.runs);
        const auto seed = o.seed.value_or(sc.monte_carlo.base_seed);
        if (runs < 1) {
            throw UsageError("--runs must be >= 1");
        }
        const auto jobs = resolve_jobs(o.jobs);

        std::vector<std::pair<std::string, AveragedMetrics>> results;
        for (auto a : archs) {
            Scenario s = sc;
            s.engine.architecture = a;
            results.emplace_back(to_string(a), run_monte_carlo(s, runs, seed, jobs));
        }

        Bundle b;
        nlohmann::json summary = nlohmann::json::object();
        std::vector<std::pair<std::string, const AveragedMetrics*>> joined;
        nlohmann::json arch_names = nlohmann::json::array();
        for (const auto& [name, m] : results) {
            b.add(name + ".csv", averaged_csv(m));
            if (o.per_run) {
                detail::add_per_run(b, name, m);
            }
            summary[name] = averaged_summary_json(m);
            joined.emplace_back(name, &m);
            arch_names.push_back(name);
        }
        b.add("comparison.csv", joined_csv(joined));
        b.add_json("summary.json", summary);
        Scenario echo = sc;
        echo.monte_carlo = {runs, seed};
        b.add_json("resolved.json", resolved_json(echo, {{"command", "compare"}, {"architectures", arch_names}}));
        b.write(o.out_dir);
    });
}

inline int cmd_sweep(const BatchOptions& o, std::ostream& err = std::cerr) {
    return detail::guarded(err, [&] {
        Scenario sc = load_scenario(o.scenario_path);
        const auto periods = parse_period_list(o.periods.value_or("1,3,5,7"));
        if (o.archs) {
            auto a = parse_arch_list(*o.archs, err);
            if (a.size() != 1) {
                throw UsageError("sweep takes exactly one architecture");
            }
            sc.engine.architecture = a.front();
        }
        const auto runs = o.runs.value_or(sc.monte_carlo.runs);
        const auto seed = o.seed.value_or(sc.monte_carlo.base_seed);
        if (runs < 1) {
            throw UsageError("--runs must be >= 1");
        }
        const auto jobs = resolve_jobs(o.jobs);
        const auto results = sweep_validity(sc, periods, runs, seed, jobs);

        Bundle b;
        nlohmann::json summary = nlohmann::json::object();
        std::vector<std::pair<std::string, const AveragedMetrics*>> joined;
        for (auto p : periods) {
            const auto& m = results.at(p);
            const auto label = "p" + std::to_string(p);
            b.add(label + ".csv", averaged_csv(m));
            if (o.per_run) {
                detail::add_per_run(b, label, m);
            }
            summary[label] = averaged_summary_json(m);
            joined.emplace_back(label, &m);
        }
        b.add("sweep.csv", joined_csv(joined));
        b.add_json("summary.json", summary);
        Scenario echo = sc;
        echo.monte_carlo = {runs, seed};
        b.add_json("resolved.json", resolved_json(echo, {{"command", "sweep"}, {"periods", periods}}));
        b.write(o.out_dir);
    });
}

/// Full command line: `zt6g run|compare|sweep [flags]`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Community-based zero-trust filtering simulator"};
    app.require_subcommand(1);

    RunOptions ro;
    auto* run_cmd = app.add_subcommand("run", "one seeded run: run.csv, summary.json, resolved.json");
    run_cmd->add_option("--scenario", ro.scenario_path, "scenario JSON")->required();
    run_cmd->add_option("--seed", ro.seed, "RNG seed (default: scenario base_seed)");
    run_cmd->add_option("--arch", ro.arch, "override the scenario's architecture");
    run_cmd->add_option("--out", ro.out_dir, "output directory")->required();
    run_cmd->add_flag("--ledger", ro.export_ledger, "also write the event ledger as ledger.jsonl");

    BatchOptions co;
    auto* cmp_cmd = app.add_subcommand("compare", "Monte Carlo batch per architecture");
    BatchOptions so;
    auto* swp_cmd = app.add_subcommand("sweep", "Monte Carlo batch per validity period");
    for (auto [cmd, opts] : {std::pair{cmp_cmd, &co}, std::pair{swp_cmd, &so}}) {
        cmd->add_option("--scenario", opts->scenario_path, "scenario JSON")->required();
        cmd->add_option("--seed", opts->seed, "base seed; run i uses seed+i");
        cmd->add_option("--runs", opts->runs, "Monte Carlo runs per batch");
        cmd->add_option("--arch", opts->archs, "comma-separated architectures");
        cmd->add_option("--jobs", opts->jobs, "worker threads (default: ZT6G_JOBS or core count)");
        cmd->add_option("--out", opts->out_dir, "output directory")->required();
        cmd->add_flag("--per-run", opts->per_run, "also write every run's CSV");
    }
    swp_cmd->add_option("--periods", so.periods, "comma-separated validity periods in seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidationError;
    }
    if (*run_cmd) {
        return cmd_run(ro, err);
    }
    if (*cmp_cmd) {
        return cmd_compare(co, err);
    }
    return cmd_sweep(so, err);
}

}  // namespace zt6g::cli
