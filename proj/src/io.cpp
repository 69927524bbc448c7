#include "mdpaccel/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mdpaccel {

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            std::ostringstream os;
            os << where << ": unknown key \"" << it.key() << "\"";
            throw std::invalid_argument(os.str());
        }
    }
}

}  // namespace

nlohmann::json mdp_to_json(const Mdp& mdp) {
    nlohmann::json j;
    j["n"] = mdp.num_states;
    j["a"] = mdp.num_actions;
    j["discount"] = mdp.discount;
    auto& rewards = j["rewards"] = nlohmann::json::array();
    for (int i = 0; i < mdp.num_states; ++i)
        for (int a = 0; a < mdp.num_actions; ++a) rewards.push_back(mdp.rewards(i, a));
    auto& rows = j["transitions"] = nlohmann::json::array();
    for (int i = 0; i < mdp.num_states; ++i) {
        for (int a = 0; a < mdp.num_actions; ++a) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& e : mdp.row(i, a))
                row.push_back(nlohmann::json::array({e.state, e.prob}));
            rows.push_back(std::move(row));
        }
    }
    if (mdp.initial_dist) {
        auto& p0 = j["initial_dist"] = nlohmann::json::array();
        for (int i = 0; i < mdp.num_states; ++i) p0.push_back((*mdp.initial_dist)[i]);
    }
    if (mdp.provenance) {
        j["provenance"] = {{"family", mdp.provenance->family},
                           {"params", mdp.provenance->params},
                           {"seed", mdp.provenance->seed}};
    }
    return j;
}

Mdp mdp_from_json(const nlohmann::json& j) {
    check_keys(j, {"n", "a", "discount", "rewards", "transitions", "initial_dist",
                   "provenance"},
               "mdp");
    Mdp mdp;
    mdp.num_states = j.at("n").get<int>();
    mdp.num_actions = j.at("a").get<int>();
    mdp.discount = j.at("discount").get<double>();
    if (mdp.num_states < 1 || mdp.num_actions < 1)
        throw std::invalid_argument("mdp: n and a must be positive");

    const auto& rewards = j.at("rewards");
    const std::size_t cells =
        static_cast<std::size_t>(mdp.num_states) * static_cast<std::size_t>(mdp.num_actions);
    if (!rewards.is_array() || rewards.size() != cells)
        throw std::invalid_argument("mdp: rewards must be a row-major array of n*a values");
    mdp.rewards.resize(mdp.num_states, mdp.num_actions);
    std::size_t idx = 0;
    for (int i = 0; i < mdp.num_states; ++i)
        for (int a = 0; a < mdp.num_actions; ++a) mdp.rewards(i, a) = rewards[idx++].get<double>();

    const auto& rows = j.at("transitions");
    if (!rows.is_array() || rows.size() != cells)
        throw std::invalid_argument("mdp: transitions must hold one row per (state, action)");
    mdp.transitions.resize(cells);
    for (std::size_t r = 0; r < cells; ++r) {
        const auto& row = rows[r];
        if (!row.is_array() || row.empty())
            throw std::invalid_argument("mdp: each transition row must be a nonempty array");
        auto& entries = mdp.transitions[r];
        entries.reserve(row.size());
        for (const auto& pair : row) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument(
                    "mdp: transition entries must be [state, prob] pairs");
            entries.push_back({pair[0].get<int>(), pair[1].get<double>()});
        }
    }

    if (j.contains("initial_dist")) {
        const auto& p0 = j.at("initial_dist");
        if (!p0.is_array() || p0.size() != static_cast<std::size_t>(mdp.num_states))
            throw std::invalid_argument("mdp: initial_dist must hold one value per state");
        Vector dist(mdp.num_states);
        for (int i = 0; i < mdp.num_states; ++i) dist[i] = p0[static_cast<std::size_t>(i)].get<double>();
        mdp.initial_dist = std::move(dist);
    }
    if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        check_keys(p, {"family", "params", "seed"}, "mdp.provenance");
        mdp.provenance = Provenance{p.value("family", ""), p.value("params", ""),
                                    p.value("seed", std::uint64_t{0})};
    }
    mdp.validate();
    return mdp;
}

void save_mdp(const Mdp& mdp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_mdp: cannot open " + path + " for writing");
    out << mdp_to_json(mdp).dump(2) << '\n';
    if (!out) throw std::runtime_error("save_mdp: write to " + path + " failed");
}

Mdp load_mdp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_mdp: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("load_mdp: " + path + " is not valid JSON: " + e.what());
    }
    return mdp_from_json(j);
}

nlohmann::json report_to_json(const SolveReport& report, const std::string& solver,
                              const std::string& schedule, double lambda, double epsilon) {
    return {{"status", to_string(report.status)},
            {"iterations", report.iterations},
            {"wall_time_ns", report.wall_time_ns},
            {"solver", solver},
            {"schedule", schedule},
            {"lambda", lambda},
            {"epsilon", epsilon},
            {"guaranteed", report.guaranteed}};
}

std::string trace_to_csv(const SolveReport& report) {
    std::ostringstream os;
    os << "iteration,diff_norm,error_to_oracle\n";
    const bool with_oracle = !report.error_trace.empty();
    for (std::size_t s = 0; s < report.diff_trace.size(); ++s) {
        os << (s + 1) << ',' << format_double(report.diff_trace[s]) << ',';
        if (with_oracle && s + 1 < report.error_trace.size())
            os << format_double(report.error_trace[s + 1]);
        os << '\n';
    }
    return os.str();
}

nlohmann::json spectrum_to_json(const IterationMatrix& im, bool reversible) {
    std::vector<double> moduli;
    moduli.reserve(im.eigenvalues.size());
    for (const auto& w : im.eigenvalues) moduli.push_back(std::abs(w));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    return {{"variant", to_string(im.variant)},
            {"lambda", im.lambda},
            {"kappa", im.kappa},
            {"predicted_radius", im.radius},
            {"eigen_moduli", moduli},
            {"reversible", reversible}};
}

}  // namespace mdpaccel
