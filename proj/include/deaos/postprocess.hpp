#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "deaos/aos.hpp"

namespace deaos {

/// 51 precision targets, log-uniform from 1e2 down to 1e-8, strictly
/// decreasing.
inline std::vector<double> default_target_grid() {
    std::vector<double> targets(51);
    for (std::size_t i = 0; i < targets.size(); ++i)
        targets[i] = std::pow(10.0, 2.0 - 0.2 * static_cast<double>(i));
    return targets;
}

/// Evaluation count at which each target precision was first reached, -1 for
/// targets the run never hit. Derived from the exact improvement history.
inline std::vector<long long> target_hits(std::span<const std::pair<long long, double>> improvements,
                                          double f_opt, std::span<const double> targets) {
    std::vector<long long> hits(targets.size(), -1);
    for (std::size_t t = 0; t < targets.size(); ++t) {
        for (const auto& [evals, best] : improvements) {
            if (best - f_opt <= targets[t]) {
                hits[t] = evals;
                break;
            }
        }
    }
    return hits;
}

/// Everything post-processing needs to know about one run.
struct RunSummary {
    int function_id = 0;
    int instance_id = 0;
    int dim = 0;
    std::uint64_t seed = 0;
    long long budget = 0;
    double f_opt = 0.0;
    double best_fitness = 0.0;
    long long evaluations = 0;
    bool target_reached = false;
    std::vector<double> targets;
    std::vector<long long> hits; // aligned with targets, -1 = never hit
};

template <class ProblemT>
RunSummary summarize(const RunResult& result, const ProblemT& problem, long long budget,
                     std::uint64_t seed) {
    RunSummary s;
    s.function_id = problem.function_id();
    s.instance_id = problem.instance_id();
    s.dim = static_cast<int>(problem.dim());
    s.seed = seed;
    s.budget = budget;
    s.f_opt = problem.f_opt();
    s.best_fitness = result.best_fitness;
    s.evaluations = result.evaluations_used;
    s.target_reached = result.target_reached;
    s.targets = default_target_grid();
    s.hits = target_hits(result.improvements, problem.f_opt(), s.targets);
    return s;
}

inline nlohmann::ordered_json summary_to_json(const RunSummary& s) {
    nlohmann::ordered_json j;
    j["function"] = s.function_id;
    j["instance"] = s.instance_id;
    j["dim"] = s.dim;
    j["seed"] = s.seed;
    j["budget"] = s.budget;
    j["f_opt"] = s.f_opt;
    j["best_fitness"] = s.best_fitness;
    j["evaluations"] = s.evaluations;
    j["precision"] = s.best_fitness - s.f_opt;
    j["target_reached"] = s.target_reached;
    auto hits = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.targets.size(); ++i) {
        nlohmann::ordered_json h;
        h["target"] = s.targets[i];
        if (s.hits[i] >= 0)
            h["evals"] = s.hits[i];
        else
            h["evals"] = nullptr;
        hits.push_back(h);
    }
    j["targets_hit"] = hits;
    return j;
}

inline RunSummary summary_from_json(const nlohmann::ordered_json& j) {
    RunSummary s;
    s.function_id = j.at("function").get<int>();
    s.instance_id = j.at("instance").get<int>();
    s.dim = j.at("dim").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.budget = j.at("budget").get<long long>();
    s.f_opt = j.at("f_opt").get<double>();
    s.best_fitness = j.at("best_fitness").get<double>();
    s.evaluations = j.at("evaluations").get<long long>();
    s.target_reached = j.at("target_reached").get<bool>();
    for (const auto& h : j.at("targets_hit")) {
        s.targets.push_back(h.at("target").get<double>());
        s.hits.push_back(h.at("evals").is_null() ? -1 : h.at("evals").get<long long>());
    }
    return s;
}

inline RunSummary load_summary(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open summary file: " + path);
    nlohmann::ordered_json j;
    in >> j;
    return summary_from_json(j);
}

// ---------------------------------------------------------------------------
// Trace files. One row per generation; the header is fixed:
//   generation,evals,best_f,app_op0..opK-1,p_op0..opK-1

namespace detail {

/// Shortest-round-trip formatting so repeated runs emit identical bytes.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline void write_trace_csv(std::ostream& out, const RunResult& result, std::size_t k) {
    out << "generation,evals,best_f";
    for (std::size_t op = 0; op < k; ++op)
        out << ",app_op" << op;
    for (std::size_t op = 0; op < k; ++op)
        out << ",p_op" << op;
    out << "\n";
    for (const RunTraceRow& row : result.trace) {
        out << row.generation << "," << row.evals << ","
            << detail::format_double(row.best_fitness);
        for (long long c : row.app_counts)
            out << "," << c;
        for (double p : row.probabilities)
            out << "," << detail::format_double(p);
        out << "\n";
    }
}

inline void write_trace_csv(const std::string& path, const RunResult& result, std::size_t k) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open trace file for writing: " + path);
    write_trace_csv(out, result, k);
}

/// Parsed trace rows (header-checked); used by the trace inspection command.
struct TraceData {
    std::size_t num_operators = 0;
    std::vector<RunTraceRow> rows;
};

inline TraceData read_trace_csv(std::istream& in) {
    TraceData data;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("trace: empty file");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            header.push_back(field);
    }
    if (header.size() < 3 || header[0] != "generation" || header[1] != "evals" ||
        header[2] != "best_f" || (header.size() - 3) % 2 != 0)
        throw std::runtime_error("trace: unexpected header");
    data.num_operators = (header.size() - 3) / 2;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != header.size())
            throw std::runtime_error("trace: malformed row");
        RunTraceRow row;
        row.generation = std::stoull(fields[0]);
        row.evals = std::stoll(fields[1]);
        row.best_fitness = std::stod(fields[2]);
        for (std::size_t op = 0; op < data.num_operators; ++op)
            row.app_counts.push_back(std::stoll(fields[3 + op]));
        for (std::size_t op = 0; op < data.num_operators; ++op)
            row.probabilities.push_back(std::stod(fields[3 + data.num_operators + op]));
        data.rows.push_back(std::move(row));
    }
    return data;
}

// ---------------------------------------------------------------------------
// Aggregate performance measures

struct EcdfPoint {
    double budget = 0.0;
    double fraction = 0.0;
};

/// Fraction of (run, target) pairs solved within each budget abscissa.
/// Abscissae are log-spaced from 1 to the largest run budget. The curve is
/// monotone non-decreasing with values in [0, 1]; empty input gives an empty
/// table.
inline std::vector<EcdfPoint> compute_ecdf(std::span<const RunSummary> summaries,
                                           std::size_t points_per_decade = 20) {
    std::vector<EcdfPoint> curve;
    if (summaries.empty())
        return curve;
    long long max_budget = 1;
    std::size_t pairs = 0;
    for (const auto& s : summaries) {
        max_budget = std::max(max_budget, s.budget);
        pairs += s.hits.size();
    }
    if (pairs == 0)
        return curve;
    const double decades = std::log10(static_cast<double>(max_budget));
    const auto steps = static_cast<std::size_t>(
        std::ceil(decades * static_cast<double>(points_per_decade)));
    std::vector<double> abscissae;
    abscissae.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        abscissae.push_back(std::pow(10.0, decades * static_cast<double>(i) /
                                               static_cast<double>(steps)));
    for (double budget : abscissae) {
        std::size_t solved = 0;
        for (const auto& s : summaries)
            for (long long hit : s.hits)
                if (hit >= 0 && static_cast<double>(hit) <= budget)
                    ++solved;
        curve.push_back({budget, static_cast<double>(solved) / static_cast<double>(pairs)});
    }
    return curve;
}

inline void write_ecdf_csv(std::ostream& out, std::span<const EcdfPoint> curve) {
    out << "budget,fraction\n";
    for (const auto& p : curve)
        out << detail::format_double(p.budget) << "," << detail::format_double(p.fraction)
            << "\n";
}

/// Average runtime to a target precision: evaluations of successful trials
/// plus full budgets of unsuccessful ones, divided by the success count.
/// Infinity when no trial succeeded.
inline double compute_art(std::span<const RunSummary> summaries, double target) {
    if (summaries.empty())
        throw std::invalid_argument("compute_art: need at least one trial");
    double total = 0.0;
    std::size_t successes = 0;
    for (const auto& s : summaries) {
        // Match the requested target against the summary's grid.
        std::size_t index = s.targets.size();
        for (std::size_t i = 0; i < s.targets.size(); ++i) {
            if (std::abs(std::log10(s.targets[i]) - std::log10(target)) < 1e-9) {
                index = i;
                break;
            }
        }
        if (index == s.targets.size())
            throw std::invalid_argument("compute_art: target not in the summary grid");
        if (s.hits[index] >= 0) {
            total += static_cast<double>(s.hits[index]);
            ++successes;
        } else {
            total += static_cast<double>(s.budget);
        }
    }
    if (successes == 0)
        return std::numeric_limits<double>::infinity();
    return total / static_cast<double>(successes);
}

/// Bootstrap resample of simulated restart runtimes: draws trials with
/// replacement until a successful one appears, accumulating failed budgets.
inline std::vector<double> bootstrap_runtimes(std::span<const RunSummary> summaries,
                                              double target, int samples, RandomStream& rng) {
    std::vector<double> runtimes;
    bool any_success = false;
    for (const auto& s : summaries) {
        for (std::size_t i = 0; i < s.targets.size(); ++i)
            if (std::abs(std::log10(s.targets[i]) - std::log10(target)) < 1e-9 &&
                s.hits[i] >= 0)
                any_success = true;
    }
    if (!any_success)
        return runtimes;
    for (int n = 0; n < samples; ++n) {
        double accumulated = 0.0;
        for (;;) {
            const auto& s = summaries[rng.uniform_index(summaries.size())];
            std::size_t index = 0;
            for (std::size_t i = 0; i < s.targets.size(); ++i)
                if (std::abs(std::log10(s.targets[i]) - std::log10(target)) < 1e-9)
                    index = i;
            if (s.hits[index] >= 0) {
                accumulated += static_cast<double>(s.hits[index]);
                break;
            }
            accumulated += static_cast<double>(s.budget);
        }
        runtimes.push_back(accumulated);
    }
    return runtimes;
}

} // namespace deaos
