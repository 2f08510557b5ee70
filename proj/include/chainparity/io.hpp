#pragma once

#include <string>

#include <json.hpp>

#include "chainparity/protocol.hpp"
#include "chainparity/qsim.hpp"
#include "chainparity/ring.hpp"
#include "chainparity/search.hpp"
#include "chainparity/task.hpp"
#include "chainparity/teleport.hpp"

namespace chainparity {

// ordered_json keeps insertion order, so identical inputs dump to identical
// bytes. Every report goes through dump_report for the same reason.
using json = nlohmann::ordered_json;

json read_json_file(const std::string& path); // file_error / validation_error
void write_text_file(const std::string& path, const std::string& text);
std::string dump_report(const json& j); // dump(2) plus trailing newline

// Instance files: {"K": int, "k": [int, ...]}. The loader enforces ranges
// and the promise; N is implied by the list length.
discrete_instance instance_from_json(const json& j);
json instance_to_json(const discrete_instance& inst);
discrete_instance load_instance(const std::string& path);
void save_instance(const std::string& path, const discrete_instance& inst);

// Protocol files: {"N", "K", "L", "transitions", "decision"} with messages
// 1-based on disk and 0-based in memory. transitions[party] is an L x 2K
// table; the first party's table may be a single row (it only ever sees
// l_0 = 1), which loads with the other rows zero-filled.
protocol_table protocol_from_json(const json& j);
json protocol_to_json(const protocol_table& p);
protocol_table load_protocol(const std::string& path);
void save_protocol(const std::string& path, const protocol_table& p);

// Report bodies. Wall-clock time never enters JSON (CSV carries it); replays
// with identical flags and seeds must be byte-identical.
json to_json(const growth_sweep_result& r);
json to_json(const chain_result& r);
json to_json(const continuous_result& r);
json to_json(const rod_result& r);
json to_json(const counterexample& c);
json to_json(const verify_result& r);
json to_json(const search_report& r, bool include_witness = true);
json to_json(const teleport_run& r);

// Summary CSV for search runs (the one place seconds is reported).
std::string csv_header();
std::string csv_row(const search_report& r, double seconds);

} // namespace chainparity
