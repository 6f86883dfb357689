// Copyright (c) 2026 mcrand contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcrand/power.hpp"
#include "mcrand/rerandomization.hpp"
#include "mcrand/sequential.hpp"

namespace mcrand {

/*!
 * Flat `key = value` configuration. Blank lines and lines starting with '#'
 * are ignored. Keys outside `allowed` and repeated keys throw Error(Config)
 * naming the line.
 */
class FlatConfig {
  public:
    static FlatConfig parse(std::string_view text, const std::set<std::string>& allowed);
    static FlatConfig read(const std::string& path, const std::set<std::string>& allowed);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    //! Throws Error(Config) "missing required key '<key>'".
    const std::string& require(const std::string& key) const;

    std::optional<std::string> get(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<long> get_int(const std::string& key) const;
    std::optional<bool> get_bool(const std::string& key) const;
    std::optional<std::vector<std::string>> get_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

//! What a simulate config asks for.
struct SimulationRequest {
    enum class Study { Table, Scenario, CiCoverage };
    Study study = Study::Table;
    int table = 1;
    double scale = 1.0;
    Scenario scenario;
    std::vector<std::string> tests;
    PowerOptions power;
    CoverageScenario coverage;
    std::map<std::string, std::string> echo;  //!< effective config
};

const std::set<std::string>& simulation_keys();

//! Builds a request from a simulate config. The seed always comes from the
//! caller; configs may not carry one.
SimulationRequest simulation_request(const FlatConfig& cfg, std::uint64_t seed);

//! Default tests for a scenario study of the given outcome.
std::vector<std::string> default_tests(OutcomeKind kind);

const std::set<std::string>& plan_keys();

//! Group-sequential plan from a flat config: max_blocks is required;
//! looks, alpha, sided, direction, c_final and look_blocks are optional.
GstPlan plan_from_config(const FlatConfig& cfg);

std::vector<int> parse_int_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

}  // namespace mcrand
