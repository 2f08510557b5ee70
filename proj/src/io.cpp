#include "chainparity/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chainparity/errors.hpp"

namespace chainparity {

namespace {

void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const char* what) {
    for (const char* key : keys) {
        if (!j.contains(key))
            throw validation_error(std::string(what) + ": missing key \"" + key + "\"");
    }
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : keys)
            if (item.key() == key) known = true;
        if (!known)
            throw validation_error(std::string(what) + ": unknown key \"" + item.key() + "\"");
    }
}

std::uint64_t get_uint(const json& j, const char* key, std::uint64_t lo, std::uint64_t hi,
                       const char* what) {
    const json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw validation_error(std::string(what) + ": \"" + key + "\" must be an integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw validation_error(std::string(what) + ": \"" + key + "\" must be non-negative");
    const std::uint64_t x = v.get<std::uint64_t>();
    if (x < lo || x > hi)
        throw validation_error(std::string(what) + ": \"" + key + "\" out of range");
    return x;
}

unsigned element_in(const json& v, std::uint64_t lo, std::uint64_t hi, const char* what) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw validation_error(std::string(what) + ": expected an integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw validation_error(std::string(what) + ": negative value");
    const std::uint64_t x = v.get<std::uint64_t>();
    if (x < lo || x > hi) throw validation_error(std::string(what) + ": value out of range");
    return static_cast<unsigned>(x);
}

json set_to_json(const sum_set& s) {
    json arr = json::array();
    for (unsigned x : s.elements()) arr.push_back(x);
    return arr;
}

} // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw file_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw validation_error(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw file_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw file_error("failed writing " + path);
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

discrete_instance instance_from_json(const json& j) {
    if (!j.is_object()) throw validation_error("instance: expected a JSON object");
    require_keys(j, {"K", "k"}, "instance");
    discrete_instance inst;
    const auto k = get_uint(j, "K", 1, 1u << 30, "instance");
    inst.ring = ring_size::from_half(static_cast<unsigned>(k));
    const json& vals = j.at("k");
    if (!vals.is_array() || vals.empty())
        throw validation_error("instance: \"k\" must be a non-empty array");
    for (const json& v : vals)
        inst.values.push_back(element_in(v, 0, inst.ring.two_k - 1, "instance k"));
    inst.validate();
    return inst;
}

json instance_to_json(const discrete_instance& inst) {
    json j;
    j["K"] = inst.ring.k;
    j["k"] = inst.values;
    return j;
}

discrete_instance load_instance(const std::string& path) {
    return instance_from_json(read_json_file(path));
}

void save_instance(const std::string& path, const discrete_instance& inst) {
    write_text_file(path, dump_report(instance_to_json(inst)));
}

protocol_table protocol_from_json(const json& j) {
    if (!j.is_object()) throw validation_error("protocol: expected a JSON object");
    require_keys(j, {"N", "K", "L", "transitions", "decision"}, "protocol");
    protocol_table p;
    p.n_parties = static_cast<unsigned>(get_uint(j, "N", 1, 64, "protocol"));
    p.ring = ring_size::from_half(static_cast<unsigned>(get_uint(j, "K", 1, 32, "protocol")));
    p.alphabet = static_cast<unsigned>(get_uint(j, "L", 1, 4096, "protocol"));

    const json& trans = j.at("transitions");
    if (!trans.is_array() || trans.size() != p.n_parties - 1u)
        throw validation_error("protocol: \"transitions\" must list N-1 party tables");
    for (std::size_t party = 0; party < trans.size(); ++party) {
        const json& table = trans[party];
        const bool short_first = party == 0 && table.is_array() && table.size() == 1;
        if (!table.is_array() || (table.size() != p.alphabet && !short_first))
            throw validation_error("protocol: transition table " + std::to_string(party + 1) +
                                   " must have L rows");
        std::vector<unsigned> flat(static_cast<std::size_t>(p.alphabet) * p.ring.two_k, 0);
        for (std::size_t l = 0; l < table.size(); ++l) {
            const json& row = table[l];
            if (!row.is_array() || row.size() != p.ring.two_k)
                throw validation_error("protocol: transition rows must have 2K entries");
            for (std::size_t k = 0; k < row.size(); ++k)
                flat[l * p.ring.two_k + k] =
                    element_in(row[k], 1, p.alphabet, "protocol transition") - 1;
        }
        p.transitions.push_back(std::move(flat));
    }

    const json& dec = j.at("decision");
    if (!dec.is_array() || dec.size() != p.alphabet)
        throw validation_error("protocol: \"decision\" must have L rows");
    p.decision.assign(static_cast<std::size_t>(p.alphabet) * p.ring.two_k, parity::even);
    for (std::size_t l = 0; l < dec.size(); ++l) {
        const json& row = dec[l];
        if (!row.is_array() || row.size() != p.ring.two_k)
            throw validation_error("protocol: decision rows must have 2K entries");
        for (std::size_t k = 0; k < row.size(); ++k) {
            const json& cell = row[k];
            if (!cell.is_string())
                throw validation_error("protocol: decision cells must be \"even\" or \"odd\"");
            const std::string s = cell.get<std::string>();
            if (s == "even")
                p.decision[l * p.ring.two_k + k] = parity::even;
            else if (s == "odd")
                p.decision[l * p.ring.two_k + k] = parity::odd;
            else
                throw validation_error("protocol: decision cells must be \"even\" or \"odd\"");
        }
    }
    p.validate();
    return p;
}

json protocol_to_json(const protocol_table& p) {
    json j;
    j["N"] = p.n_parties;
    j["K"] = p.ring.k;
    j["L"] = p.alphabet;
    json trans = json::array();
    for (const auto& flat : p.transitions) {
        json table = json::array();
        for (unsigned l = 0; l < p.alphabet; ++l) {
            json row = json::array();
            for (unsigned k = 0; k < p.ring.two_k; ++k)
                row.push_back(flat[p.cell(l, k)] + 1);
            table.push_back(std::move(row));
        }
        trans.push_back(std::move(table));
    }
    j["transitions"] = std::move(trans);
    json dec = json::array();
    for (unsigned l = 0; l < p.alphabet; ++l) {
        json row = json::array();
        for (unsigned k = 0; k < p.ring.two_k; ++k)
            row.push_back(to_string(p.decision[p.cell(l, k)]));
        dec.push_back(std::move(row));
    }
    j["decision"] = std::move(dec);
    return j;
}

protocol_table load_protocol(const std::string& path) {
    return protocol_from_json(read_json_file(path));
}

void save_protocol(const std::string& path, const protocol_table& p) {
    write_text_file(path, dump_report(protocol_to_json(p)));
}

json to_json(const growth_sweep_result& r) {
    json j;
    j["two_k"] = r.ring.two_k;
    j["K"] = r.ring.k;
    j["power_of_two"] = r.ring.k_is_power_of_two;
    j["sets_checked"] = r.sets_checked;
    j["pairs_checked"] = r.pairs_checked;
    j["zero_growth_count"] = r.zero_growth.size();
    json cases = json::array();
    for (const auto& c : r.zero_growth) {
        json e;
        e["set"] = set_to_json(sum_set::from_mask(r.ring, c.set_mask));
        e["a"] = c.a;
        e["b"] = c.b;
        cases.push_back(std::move(e));
    }
    j["zero_growth_cases"] = std::move(cases);
    // Power-of-two rings carry the lemma's guarantee; other rings are
    // exploratory by construction.
    j["asserted"] = r.ring.k_is_power_of_two;
    return j;
}

json to_json(const chain_result& r) {
    json j;
    j["verdict"] = to_string(r.verdict);
    j["error_probability"] = r.error_probability;
    return j;
}

json to_json(const continuous_result& r) {
    json j;
    j["verdict"] = to_string(r.verdict);
    j["theta"] = r.theta;
    j["error_bound"] = r.error_bound;
    j["m"] = r.m;
    j["steps"] = r.steps;
    return j;
}

json to_json(const rod_result& r) {
    json j;
    j["verdict"] = to_string(r.verdict);
    j["theta"] = r.theta;
    return j;
}

json to_json(const counterexample& c) {
    json j;
    j["k"] = c.values;
    j["expected"] = to_string(c.expected);
    j["produced"] = to_string(c.produced);
    return j;
}

json to_json(const verify_result& r) {
    json j;
    j["perfect"] = r.perfect;
    j["counterexample"] = r.cex ? to_json(*r.cex) : json(nullptr);
    return j;
}

json to_json(const search_report& r, bool include_witness) {
    json j;
    j["n"] = r.n_parties;
    j["k"] = r.ring.k;
    j["l"] = r.alphabet;
    j["method"] = to_string(r.method);
    j["verdict"] = to_string(r.verdict);
    j["nodes"] = r.nodes;
    j["memory_bits"] = r.memory_bits;
    j["asserted"] = theorem_entailed(r);
    if (include_witness)
        j["witness"] = r.witness ? protocol_to_json(*r.witness) : json(nullptr);
    return j;
}

json to_json(const teleport_run& r) {
    json j;
    j["verdict"] = to_string(r.verdict);
    j["bits_per_hop"] = 2;
    j["total_bits"] = r.transcript.total_bits();
    json hops = json::array();
    for (std::size_t i = 0; i < r.transcript.hops.size(); ++i) {
        const hop_record& h = r.transcript.hops[i];
        json e;
        e["hop"] = i + 1;
        e["x"] = h.x_bit;
        e["z"] = h.z_bit;
        hops.push_back(std::move(e));
    }
    j["hops"] = std::move(hops);
    return j;
}

std::string csv_header() { return "n,k,l,verdict,nodes,seconds,memory_bits"; }

std::string csv_row(const search_report& r, double seconds) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%u,%u,%u,%s,%" PRIu64 ",%.6f,%.6f", r.n_parties, r.ring.k,
                  r.alphabet, to_string(r.verdict), r.nodes, seconds, r.memory_bits);
    return buf;
}

} // namespace chainparity
