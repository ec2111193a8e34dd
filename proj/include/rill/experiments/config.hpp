#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rill/learner/trainer.hpp"

namespace rill::experiments {

/// section -> key -> raw value.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

/// Line-oriented `[section]` / `key = value` text with `#` comments.
/// Throws ConfigError (with the line number) on malformed lines and on
/// sections or keys that are not in the schema.
RawConfig parse_config(const std::string& text);
RawConfig load_config(const std::string& path);

/// Every schema key, with `overrides` applied on top of the defaults.
RawConfig with_defaults(const RawConfig& overrides);
/// Canonical text: sections and keys sorted, one `key = value` per line.
std::string to_text(const RawConfig& cfg);

/// Sets one key after checking it exists in the schema.
void set_value(RawConfig& cfg, const std::string& section, const std::string& key, const std::string& value);
const std::string& get_value(const RawConfig& cfg, const std::string& section, const std::string& key);

double get_double(const RawConfig& cfg, const std::string& section, const std::string& key);
std::int64_t get_int(const RawConfig& cfg, const std::string& section, const std::string& key);
std::vector<double> get_doubles(const RawConfig& cfg, const std::string& section, const std::string& key);
std::vector<std::int64_t> get_ints(const RawConfig& cfg, const std::string& section, const std::string& key);
std::vector<std::string> get_strings(const RawConfig& cfg, const std::string& section, const std::string& key);

inline const std::vector<std::string> kMethods = {"vanilla", "fuzzy", "semantic", "rill_l2", "rill_hinge", "rill_l2hinge"};

/// Training settings for `method` (one of kMethods): vanilla sets lambda to
/// 0, semantic swaps in the enumeration loss with train.semantic_lambda,
/// rill_* pick the transform with train.epsilon. Throws ConfigError for an
/// unknown method.
learner::TrainConfig train_config(const RawConfig& cfg, const std::string& method, std::uint64_t seed);
std::vector<std::size_t> hidden_widths(const RawConfig& cfg);

}  // namespace rill::experiments
