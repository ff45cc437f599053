// edgeplace/instance_io.hpp
//
// Instance files are JSON:
//   { "T": 300, "N": 600,
//     "nodes":    [{"id":0,"R":200,"C":250}, ...],
//     "services": [{"id":0,"r":3.1,"c":7.5,"class":"VS"}, ...],
//     "links":    [[m,n,d], ...],
//     "l": [[...K...], ...M rows], "b": same shape,
//     "trace":    [[t,n,k,lambda], ...],       t is 1-based
//     "overflow_penalty": 50 }                 optional
// When "N" is absent it is inferred from the largest user index.

#pragma once

#include "edgeplace/model.hpp"

#include <json.hpp>

#include <string>

namespace edgeplace {

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

/// Throws std::runtime_error on I/O failure and InvalidInstance on bad content.
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace edgeplace
