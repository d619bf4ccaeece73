#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "flowauction/model.hpp"
#include "json.hpp"

namespace flowauction {

/// Parses the instance file format:
///   {"objects":[{"id":"alpha","supply":1},...],
///    "buyers":[{"id":"b1","demand":2,"valuations":{"alpha":5}},...]}
/// Unknown keys, non-integers and negative numbers are rejected with an
/// InstanceError naming the entity.
Instance parse_instance(std::string_view text);
Instance instance_from_json(const nlohmann::json& doc);
Instance load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const Instance& instance);

/// {"alpha":0,"beta":4}. Keys sort canonically under nlohmann::json.
nlohmann::json prices_to_json(const Instance& instance, const PriceVector& prices);

/// Reads a price object; objects absent from the document default to 0.
PriceVector prices_from_json(const Instance& instance, const nlohmann::json& doc);
PriceVector load_prices(const Instance& instance, const std::filesystem::path& path);

/// {"b1":{"alpha":1}}; zero entries and empty buyers are omitted.
nlohmann::json allocation_to_json(const Instance& instance, const Allocation& allocation);

std::string read_file(const std::filesystem::path& path);

}  // namespace flowauction
