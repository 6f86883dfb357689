// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#include "mcrand/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mcrand/csv.hpp"
#include "mcrand/error.hpp"

namespace mcrand {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out)
{
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

FlatConfig FlatConfig::parse(std::string_view text, const std::set<std::string>& allowed)
{
    FlatConfig cfg;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) fail(ErrorKind::Config, "line " + std::to_string(line_no) + ": empty key");
        if (!allowed.count(key)) {
            fail(ErrorKind::Config, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!cfg.values_.emplace(key, value).second) {
            fail(ErrorKind::Config, "line " + std::to_string(line_no) + ": repeated key '" + key + "'");
        }
    }
    return cfg;
}

FlatConfig FlatConfig::read(const std::string& path, const std::set<std::string>& allowed)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), allowed);
}

const std::string& FlatConfig::require(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) fail(ErrorKind::Config, "missing required key '" + key + "'");
    return it->second;
}

std::optional<std::string> FlatConfig::get(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> FlatConfig::get_double(const std::string& key) const
{
    const auto v = get(key);
    if (!v) return std::nullopt;
    double out = 0;
    if (!parse_number(*v, out) || !std::isfinite(out)) {
        fail(ErrorKind::Config, "key '" + key + "' needs a number, got '" + *v + "'");
    }
    return out;
}

std::optional<long> FlatConfig::get_int(const std::string& key) const
{
    const auto v = get(key);
    if (!v) return std::nullopt;
    long out = 0;
    if (!parse_number(*v, out)) {
        fail(ErrorKind::Config, "key '" + key + "' needs an integer, got '" + *v + "'");
    }
    return out;
}

std::optional<bool> FlatConfig::get_bool(const std::string& key) const
{
    const auto v = get(key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "on" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "off" || *v == "0" || *v == "no") return false;
    fail(ErrorKind::Config, "key '" + key + "' needs true or false, got '" + *v + "'");
}

std::optional<std::vector<std::string>> FlatConfig::get_list(const std::string& key) const
{
    const auto v = get(key);
    if (!v) return std::nullopt;
    std::vector<std::string> out;
    for (auto item : split_commas(*v)) {
        if (item.empty()) fail(ErrorKind::Config, "key '" + key + "' has an empty list entry");
        out.emplace_back(item);
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view text)
{
    std::vector<int> out;
    for (auto item : split_commas(text)) {
        int v = 0;
        if (!parse_number(item, v)) {
            fail(ErrorKind::Config, "expected a comma-separated integer list, got '" + std::string(text) + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_double_list(std::string_view text)
{
    std::vector<double> out;
    for (auto item : split_commas(text)) {
        double v = 0;
        if (!parse_number(item, v)) {
            fail(ErrorKind::Config, "expected a comma-separated number list, got '" + std::string(text) + "'");
        }
        out.push_back(v);
    }
    return out;
}

const std::set<std::string>& simulation_keys()
{
    static const std::set<std::string> keys = {
        "study", "table", "scale",
        // scenario
        "name", "outcome", "n_total", "num_institutions", "block_size", "block_effects", "effect",
        "base_rate", "institution_sd", "institution_df", "scale_institution_effect",
        "censoring_target", "censoring_tau", "replications", "tests", "alphas", "gst_looks",
        "gst_alpha", "gst_c_final",
        // ci-coverage
        "n_per_arm", "hazard_1", "hazard_2", "censoring_max", "trials", "reps", "level",
    };
    return keys;
}

std::vector<std::string> default_tests(OutcomeKind kind)
{
    switch (kind) {
        case OutcomeKind::Continuous: return {"conditional", "randomization", "stratified-t", "t-test"};
        case OutcomeKind::Binary: return {"conditional", "randomization", "mantel-haenszel", "pooled-2x2"};
        case OutcomeKind::Survival:
            return {"conditional-gehan", "stratified-gehan", "conditional-logrank",
                    "randomization-logrank", "stratified-logrank", "logrank"};
    }
    return {};
}

namespace {

int to_int(long v, const char* key)
{
    if (v < -2147483647L || v > 2147483647L) {
        fail(ErrorKind::Config, std::string("key '") + key + "' is out of range");
    }
    return static_cast<int>(v);
}

// Stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

int require_int(const FlatConfig& cfg, const char* key)
{
    cfg.require(key);
    return to_int(*cfg.get_int(key), key);
}

void only_keys(const FlatConfig& cfg, const std::set<std::string>& allowed, const std::string& study)
{
    for (const auto& [k, v] : cfg.values()) {
        if (!allowed.count(k)) {
            fail(ErrorKind::Config, "key '" + k + "' does not apply to study '" + study + "'");
        }
    }
}

}  // namespace

SimulationRequest simulation_request(const FlatConfig& cfg, std::uint64_t seed)
{
    SimulationRequest req;
    const auto& study = cfg.require("study");
    if (study == "table") {
        only_keys(cfg, {"study", "table", "scale"}, study);
        req.study = SimulationRequest::Study::Table;
        req.table = require_int(cfg, "table");
        req.scale = cfg.get_double("scale").value_or(1.0);
        table_replications(req.scale);
        if (req.table < 1 || req.table > 5) fail(ErrorKind::Config, "table must be 1..5");
        req.echo = {{"study", "table"},
                    {"table", std::to_string(req.table)},
                    {"scale", cfg.get("scale").value_or("1")}};
    } else if (study == "scenario") {
        req.study = SimulationRequest::Study::Scenario;
        only_keys(cfg, {"study", "name", "outcome", "n_total", "num_institutions", "block_size",
                        "block_effects", "effect", "base_rate", "institution_sd", "institution_df",
                        "scale_institution_effect", "censoring_target", "censoring_tau",
                        "replications", "tests", "alphas", "gst_looks", "gst_alpha", "gst_c_final"},
                  study);
        auto& s = req.scenario;
        try {
            s.outcome = parse_outcome_kind(cfg.require("outcome"));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Config) throw;
            fail(ErrorKind::Config, e.what());
        }
        s.n_total = require_int(cfg, "n_total");
        s.num_institutions = require_int(cfg, "num_institutions");
        s.block_size = require_int(cfg, "block_size");
        s.name = cfg.get("name").value_or("scenario");
        s.block_effects = cfg.get_bool("block_effects").value_or(false);
        switch (s.outcome) {
            case OutcomeKind::Continuous:
                s.effect = 1.07;
                s.institution_sd = 2.0;
                break;
            case OutcomeKind::Binary:
                s.effect = 0.7;
                s.institution_sd = 1.73;
                break;
            case OutcomeKind::Survival: s.effect = 1.5; break;
        }
        s.effect = cfg.get_double("effect").value_or(s.effect);
        s.base_rate = cfg.get_double("base_rate").value_or(s.base_rate);
        s.institution_sd = cfg.get_double("institution_sd").value_or(s.institution_sd);
        s.institution_df = to_int(cfg.get_int("institution_df").value_or(s.institution_df), "institution_df");
        s.scale_institution_effect = cfg.get_bool("scale_institution_effect").value_or(false);
        s.censoring_target = cfg.get_double("censoring_target").value_or(s.censoring_target);
        if (auto tau = cfg.get_double("censoring_tau")) s.censoring_tau = *tau;
        s.replications = to_int(cfg.get_int("replications").value_or(5000), "replications");
        s.seed = seed;
        s.id = stream_id(0x7363656eULL, fnv1a(s.name));
        s.check();
        req.tests = cfg.get_list("tests").value_or(default_tests(s.outcome));
        for (const auto& t : req.tests) parse_test_spec(t);
        if (auto a = cfg.get("alphas")) req.power.alphas = parse_double_list(*a);
        for (double a : req.power.alphas) {
            if (!(a > 0 && a < 1)) fail(ErrorKind::Config, "alphas must lie in (0, 1)");
        }
        req.power.gst_looks = to_int(cfg.get_int("gst_looks").value_or(4), "gst_looks");
        req.power.gst_alpha = cfg.get_double("gst_alpha").value_or(0.025);
        req.power.gst_c_final = cfg.get_double("gst_c_final");
        req.echo = cfg.values();
    } else if (study == "ci-coverage") {
        req.study = SimulationRequest::Study::CiCoverage;
        only_keys(cfg, {"study", "n_per_arm", "hazard_1", "hazard_2", "censoring_max", "trials",
                        "reps", "level"},
                  study);
        auto& c = req.coverage;
        c.n_per_arm = to_int(cfg.get_int("n_per_arm").value_or(c.n_per_arm), "n_per_arm");
        c.hazard_1 = cfg.get_double("hazard_1").value_or(c.hazard_1);
        c.hazard_2 = cfg.get_double("hazard_2").value_or(c.hazard_2);
        c.censoring_max = cfg.get_double("censoring_max").value_or(c.censoring_max);
        c.trials = to_int(cfg.get_int("trials").value_or(c.trials), "trials");
        c.reps = to_int(cfg.get_int("reps").value_or(c.reps), "reps");
        c.level = cfg.get_double("level").value_or(c.level);
        c.seed = seed;
        if (c.n_per_arm < 1 || c.trials < 1 || c.reps < 100 || !(c.hazard_1 > 0)
            || !(c.hazard_2 > 0) || !(c.censoring_max > 0) || !(c.level > 0 && c.level < 1)) {
            fail(ErrorKind::Config, "ci-coverage settings out of range");
        }
        req.echo = cfg.values();
    } else {
        fail(ErrorKind::Config, "study must be table, scenario or ci-coverage, got '" + study + "'");
    }
    return req;
}

const std::set<std::string>& plan_keys()
{
    static const std::set<std::string> keys = {"looks",     "max_blocks", "alpha",      "sided",
                                                "direction", "c_final",    "look_blocks"};
    return keys;
}

GstPlan plan_from_config(const FlatConfig& cfg)
{
    const int looks = to_int(cfg.get_int("looks").value_or(4), "looks");
    const int max_blocks = require_int(cfg, "max_blocks");
    const int sided = to_int(cfg.get_int("sided").value_or(1), "sided");
    const double alpha = cfg.get_double("alpha").value_or(sided == 2 ? 0.05 : 0.025);
    std::vector<int> look_blocks;
    if (auto lb = cfg.get("look_blocks")) look_blocks = parse_int_list(*lb);
    auto plan = obrien_fleming_plan(looks, max_blocks, alpha, sided, cfg.get_double("c_final"),
                                    std::move(look_blocks));
    plan.direction = to_int(cfg.get_int("direction").value_or(1), "direction");
    plan.check();
    return plan;
}

}  // namespace mcrand
