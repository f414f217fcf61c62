#pragma once

#include <json.hpp>

#include "qnet/interaction_graph.hpp"

namespace qnet {

// Wire format: {"n_qubits": N, "links": [[control, target, probability], ...]}
inline nlohmann::json graph_to_json(const InteractionGraph& g) {
    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : g.links())
        links.push_back({l.control, l.target, l.probability});
    return {{"n_qubits", g.n_qubits()}, {"links", links}};
}

inline InteractionGraph graph_from_json(const nlohmann::json& j) {
    std::vector<Link> links;
    for (const auto& e : j.at("links"))
        links.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    return InteractionGraph(j.at("n_qubits").get<int>(), std::move(links));
}

} // namespace qnet
