#include "flowauction/instance_io.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace flowauction {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& entity, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw InstanceError(entity, "unknown key '" + key + "' in " + where);
    }
  }
}

std::int64_t read_integer(const json& value, const std::string& entity,
                          const std::string& field) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned() &&
        value.get<std::uint64_t>() >
            static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw InstanceError(entity, field + " of '" + entity + "' is out of range");
    }
    return value.get<std::int64_t>();
  }
  throw InstanceError(entity, field + " of '" + entity + "' must be an integer");
}

std::string read_id(const json& obj, const std::string& where) {
  auto it = obj.find("id");
  if (it == obj.end() || !it->is_string()) {
    throw InstanceError("", where + " entry needs a string \"id\"");
  }
  return it->get<std::string>();
}

}  // namespace

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw InstanceError("", "instance must be a JSON object");
  reject_unknown_keys(doc, {"objects", "buyers"}, "", "instance");

  RawInstance raw;
  if (auto it = doc.find("objects"); it != doc.end()) {
    if (!it->is_array()) throw InstanceError("", "\"objects\" must be an array");
    for (const auto& entry : *it) {
      if (!entry.is_object()) throw InstanceError("", "object entries must be JSON objects");
      const std::string id = read_id(entry, "object");
      reject_unknown_keys(entry, {"id", "supply"}, id, "object '" + id + "'");
      auto supply = entry.find("supply");
      if (supply == entry.end()) throw InstanceError(id, "object '" + id + "' has no supply");
      raw.objects.push_back({id, read_integer(*supply, id, "supply")});
    }
  }
  if (auto it = doc.find("buyers"); it != doc.end()) {
    if (!it->is_array()) throw InstanceError("", "\"buyers\" must be an array");
    for (const auto& entry : *it) {
      if (!entry.is_object()) throw InstanceError("", "buyer entries must be JSON objects");
      const std::string id = read_id(entry, "buyer");
      reject_unknown_keys(entry, {"id", "demand", "valuations"}, id, "buyer '" + id + "'");
      auto demand = entry.find("demand");
      if (demand == entry.end()) throw InstanceError(id, "buyer '" + id + "' has no demand");
      RawBuyer buyer{id, read_integer(*demand, id, "demand"), {}};
      if (auto vals = entry.find("valuations"); vals != entry.end()) {
        if (!vals->is_object()) {
          throw InstanceError(id, "valuations of '" + id + "' must be an object");
        }
        for (const auto& [object_id, value] : vals->items()) {
          buyer.valuations.emplace_back(object_id, read_integer(value, id, "valuation"));
        }
      }
      raw.buyers.push_back(std::move(buyer));
    }
  }
  return validate_instance(raw);
}

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError("", std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(doc);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("", "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_file(path));
}

json instance_to_json(const Instance& instance) {
  json objects = json::array();
  for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
    objects.push_back({{"id", instance.object_ids()[i]}, {"supply", instance.supply(i)}});
  }
  json buyers = json::array();
  for (BuyerIndex j = 0; j < instance.num_buyers(); ++j) {
    json vals = json::object();
    for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
      if (instance.valuation(i, j) != 0) vals[instance.object_ids()[i]] = instance.valuation(i, j);
    }
    buyers.push_back({{"id", instance.buyer_ids()[j]},
                      {"demand", instance.demand(j)},
                      {"valuations", vals}});
  }
  return {{"objects", objects}, {"buyers", buyers}};
}

json prices_to_json(const Instance& instance, const PriceVector& prices) {
  json out = json::object();
  for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
    out[instance.object_ids()[i]] = prices[i];
  }
  return out;
}

PriceVector prices_from_json(const Instance& instance, const json& doc) {
  if (!doc.is_object()) throw InstanceError("", "prices must be a JSON object");
  PriceVector prices = PriceVector::zeros(instance);
  for (const auto& [id, value] : doc.items()) {
    auto i = instance.find_object(id);
    if (!i) throw InstanceError(id, "price given for unknown object '" + id + "'");
    const std::int64_t p = read_integer(value, id, "price");
    if (p < 0) throw InstanceError(id, "price of '" + id + "' is negative");
    prices[*i] = p;
  }
  return prices;
}

PriceVector load_prices(const Instance& instance, const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InstanceError("", std::string("malformed JSON: ") + e.what());
  }
  return prices_from_json(instance, doc);
}

json allocation_to_json(const Instance& instance, const Allocation& allocation) {
  json out = json::object();
  for (BuyerIndex j = 0; j < instance.num_buyers(); ++j) {
    json bundle = json::object();
    for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
      if (allocation.at(i, j) > 0) bundle[instance.object_ids()[i]] = allocation.at(i, j);
    }
    if (!bundle.empty()) out[instance.buyer_ids()[j]] = bundle;
  }
  return out;
}

}  // namespace flowauction
