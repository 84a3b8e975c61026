#include "dig/result_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace dig {

namespace {

using nlohmann::json;

json flatten(const std::vector<std::vector<double>>& matrix) {
    json flat = json::array();
    for (const auto& row : matrix)
        for (double v : row) flat.push_back(v);
    return flat;
}

std::vector<std::vector<double>> unflatten(const json& flat, std::size_t m, const char* name) {
    if (!flat.is_array() || flat.size() != m * m)
        throw std::invalid_argument(std::string("result json: matrix '") + name + "' must have " +
                                    std::to_string(m * m) + " entries");
    std::vector<std::vector<double>> matrix(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) matrix[i][j] = flat[i * m + j].get<double>();
    return matrix;
}

std::string estimator_name(Estimator e) {
    return e == Estimator::empirical ? "empirical" : "ctw";
}

Estimator estimator_from_name(const std::string& name) {
    if (name == "empirical") return Estimator::empirical;
    if (name == "ctw") return Estimator::context_tree;
    throw std::invalid_argument("result json: unknown estimator '" + name + "'");
}

bool plain_identifier(const std::string& id) {
    if (id.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(id.front()))) return false;
    return std::all_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

std::string dot_quote(const std::string& id) {
    if (plain_identifier(id)) return id;
    std::string quoted = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\') quoted += '\\';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::string result_to_json(const CausalGraphResult& result) {
    json doc;
    doc["node_ids"] = result.node_ids;
    doc["depth"] = result.depth;
    doc["estimator"] = estimator_name(result.estimator);
    doc["alpha"] = result.alpha;
    doc["I"] = flatten(result.info);
    doc["H"] = flatten(result.entropy);
    doc["G"] = flatten(result.gain);
    doc["G_nor"] = flatten(result.gain_nor);

    json edges = json::array();
    for (std::size_t i = 0; i < result.node_ids.size(); ++i) {
        for (std::size_t j = 0; j < result.node_ids.size(); ++j) {
            if (i < result.adjacency.size() && j < result.adjacency[i].size() &&
                result.adjacency[i][j]) {
                json edge;
                edge["from"] = result.node_ids[i];
                edge["to"] = result.node_ids[j];
                edge["weight"] = result.gain_nor[i][j];
                edges.push_back(edge);
            }
        }
    }
    doc["adjacency"] = edges;
    return doc.dump(2) + "\n";
}

CausalGraphResult result_from_json(const std::string& text) {
    json doc = json::parse(text);
    CausalGraphResult result;
    result.node_ids = doc.at("node_ids").get<std::vector<std::string>>();
    std::size_t m = result.node_ids.size();
    result.depth = doc.at("depth").get<int>();
    result.estimator = estimator_from_name(doc.at("estimator").get<std::string>());
    result.alpha = doc.at("alpha").get<double>();
    result.info = unflatten(doc.at("I"), m, "I");
    result.entropy = unflatten(doc.at("H"), m, "H");
    result.gain = unflatten(doc.at("G"), m, "G");
    result.gain_nor = unflatten(doc.at("G_nor"), m, "G_nor");

    result.adjacency.assign(m, std::vector<bool>(m, false));
    for (const auto& edge : doc.at("adjacency")) {
        std::string from = edge.at("from").get<std::string>();
        std::string to = edge.at("to").get<std::string>();
        auto locate = [&](const std::string& id) {
            auto it = std::find(result.node_ids.begin(), result.node_ids.end(), id);
            if (it == result.node_ids.end())
                throw std::invalid_argument("result json: edge references unknown node '" + id +
                                            "'");
            return static_cast<std::size_t>(it - result.node_ids.begin());
        };
        result.adjacency[locate(from)][locate(to)] = true;
    }
    return result;
}

std::string export_dot(const CausalGraphResult& result) {
    std::vector<std::size_t> order(result.node_ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return result.node_ids[a] < result.node_ids[b];
    });

    std::string text = "digraph dig {\n";
    for (std::size_t i : order) text += "  " + dot_quote(result.node_ids[i]) + ";\n";
    for (std::size_t i : order) {
        for (std::size_t j : order) {
            if (i < result.adjacency.size() && j < result.adjacency[i].size() &&
                result.adjacency[i][j]) {
                char label[32];
                std::snprintf(label, sizeof label, "%.2f", result.gain_nor[i][j]);
                text += "  " + dot_quote(result.node_ids[i]) + " -> " +
                        dot_quote(result.node_ids[j]) + " [label=\"" + label + "\"];\n";
            }
        }
    }
    text += "}\n";
    return text;
}

}  // namespace dig
