#pragma once
// JSON (de)serialization for boxes, channels, functionals, protocols, and
// solver results. Parse errors carry the offending file/field path.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "iclab/bounds.hpp"
#include "iclab/boxes.hpp"
#include "iclab/channels.hpp"
#include "iclab/protocol.hpp"
#include "iclab/search.hpp"

namespace iclab {

class SchemaError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json box_to_json(const BipartiteBox& box);
BipartiteBox box_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json functional_to_json(const BellFunctional& functional);
BellFunctional functional_from_json(const nlohmann::json& j,
                                    const std::string& where);

nlohmann::json channel_to_json(const DiscreteChannel& channel);
DiscreteChannel channel_from_json(const nlohmann::json& j,
                                  const std::string& where);

nlohmann::json protocol_to_json(const Protocol& protocol);
Protocol protocol_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json bound_result_to_json(const BoundResult& result);

// Protocol plus a provenance block (seed, schedule, score, trace length).
nlohmann::json search_result_to_json(const SearchResult& result,
                                     const SearchConfig& config);

// File helpers; the filename becomes the error context.
BipartiteBox load_box(const std::string& path);
BellFunctional load_functional(const std::string& path);
DiscreteChannel load_channel(const std::string& path);
Protocol load_protocol(const std::string& path);
nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

}  // namespace iclab
