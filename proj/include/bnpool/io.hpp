#pragma once

#include <string>

#include "bnpool/network.hpp"
#include "bnpool/types.hpp"

namespace bnpool::io {

// Network files are single JSON documents with a format_version field,
// `variables` (name + ordered states), `edges` (parent, child name pairs) and
// `cpts` (per node: parents list + row-major table; rows enumerate parent
// states lexicographically with the last parent varying fastest). Doubles
// round-trip bit-exactly.
inline constexpr int kNetworkFormatVersion = 1;

BayesNet load_network(const std::string& path);
void save_network(const BayesNet& net, const std::string& path);

BayesNet network_from_json_text(const std::string& text, const std::string& origin);
std::string network_to_json_text(const BayesNet& net);

// Dataset files are CSV: a header row of variable names, then one state
// label per cell. Loading against a known variable list keeps state order;
// otherwise states are the sorted distinct labels per column.
DataSet load_dataset(const std::string& path);
DataSet load_dataset(const std::string& path, const std::vector<Variable>& schema);
void save_dataset(const DataSet& ds, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace bnpool::io
