#pragma once

#include <json.hpp>

#include "fuzzcount/lattice.hpp"

namespace fuzzcount {

inline nlohmann::ordered_json group_spec_to_json(const GroupSpec& spec) {
    nlohmann::ordered_json j;
    j["p"] = spec.p;
    j["p_partition"] = spec.p_partition;
    if (spec.q) {
        j["q"] = *spec.q;
        j["q_partition"] = spec.q_partition;
    }
    return j;
}

/// Lattice export: group, subgroup list with orders and member indices, and
/// the cover edges of the containment DAG. Key order and subgroup order are
/// canonical, so the export is byte-stable across runs.
inline nlohmann::ordered_json lattice_to_json(const SubgroupLattice& lat) {
    nlohmann::ordered_json j;
    j["group"] = group_spec_to_json(lat.spec);
    j["name"] = lat.spec.name();
    j["order"] = lat.num_elements;
    nlohmann::ordered_json subs = nlohmann::ordered_json::array();
    for (const Subgroup& s : lat.subgroups) {
        nlohmann::ordered_json entry;
        entry["id"] = s.id;
        entry["order"] = s.order;
        entry["members"] = s.members;
        subs.push_back(std::move(entry));
    }
    j["subgroups"] = std::move(subs);
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& [h, k] : lat.covers) {
        edges.push_back(nlohmann::ordered_json::array({h, k}));
    }
    j["covers"] = std::move(edges);
    return j;
}

}  // namespace fuzzcount
