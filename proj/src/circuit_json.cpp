#include <algorithm>
#include <string>

#include <json.hpp>

#include "xeb/circuit.hpp"
#include "xeb/error.hpp"

namespace xeb {

using ojson = nlohmann::ordered_json;

std::string serialize(const Circuit& circuit) {
    ojson doc;
    doc["rows"] = circuit.lattice.rows;
    doc["cols"] = circuit.lattice.cols;
    doc["periodic"] = circuit.lattice.periodic;
    doc["seed"] = circuit.seed;
    doc["variant"] = std::string(variant_name(circuit.variant));
    ojson cycles = ojson::array();
    for (const Cycle& cycle : circuit.cycles) {
        ojson gates = ojson::array();
        for (const Gate& g : cycle) {
            ojson q = ojson::array({g.q0});
            if (g.arity() == 2) q.push_back(g.q1);
            gates.push_back(ojson{{"g", std::string(gate_name(g.kind))}, {"q", std::move(q)}});
        }
        cycles.push_back(std::move(gates));
    }
    doc["cycles"] = std::move(cycles);
    return doc.dump();
}

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

template <typename T>
T require(const nlohmann::json& obj, const char* key, const std::string& path) {
    const std::string field = path.empty() ? key : path + "." + key;
    if (!obj.contains(key)) throw ParseError("missing field", 0, field);
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("wrong type: ") + e.what(), 0, field);
    }
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), line_of(text, e.byte > 0 ? e.byte - 1 : 0), "");
    }
    if (!doc.is_object()) throw ParseError("top level must be an object", 1, "");

    Circuit c;
    c.lattice.rows = require<std::uint32_t>(doc, "rows", "");
    c.lattice.cols = require<std::uint32_t>(doc, "cols", "");
    c.lattice.periodic = require<bool>(doc, "periodic", "");
    c.seed = require<std::uint64_t>(doc, "seed", "");
    const auto vname = require<std::string>(doc, "variant", "");
    const auto variant = variant_from_name(vname);
    if (!variant) throw ParseError("unknown variant '" + vname + "'", 0, "variant");
    c.variant = *variant;

    if (!doc.contains("cycles") || !doc["cycles"].is_array())
        throw ParseError("missing or non-array field", 0, "cycles");
    const auto& cycles = doc["cycles"];
    for (std::size_t t = 0; t < cycles.size(); ++t) {
        const std::string cpath = "cycles[" + std::to_string(t) + "]";
        if (!cycles[t].is_array()) throw ParseError("cycle must be an array", 0, cpath);
        Cycle cycle;
        for (std::size_t i = 0; i < cycles[t].size(); ++i) {
            const std::string gpath = cpath + "[" + std::to_string(i) + "]";
            const auto& jg = cycles[t][i];
            if (!jg.is_object()) throw ParseError("gate must be an object", 0, gpath);
            const auto name = require<std::string>(jg, "g", gpath);
            const auto kind = gate_from_name(name);
            if (!kind) throw ParseError("unknown gate name '" + name + "'", 0, gpath + ".g");
            const auto qubits = require<std::vector<std::uint32_t>>(jg, "q", gpath);
            const std::size_t want = is_two_qubit(*kind) ? 2 : 1;
            if (qubits.size() != want)
                throw ParseError("gate '" + name + "' takes " + std::to_string(want) +
                                     " qubit(s), got " + std::to_string(qubits.size()),
                                 0, gpath + ".q");
            cycle.push_back(want == 2 ? Gate::cz(qubits[0], qubits[1])
                                      : Gate::single(*kind, qubits[0]));
        }
        c.cycles.push_back(std::move(cycle));
    }

    try {
        validate_circuit(c);
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid circuit: ") + e.what(), 0, "cycles");
    }
    return c;
}

}  // namespace xeb
