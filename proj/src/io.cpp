#include "bnpool/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bnpool::io {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << content;
    if (!out) {
        throw Error("write to '" + path + "' failed");
    }
}

BayesNet network_from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    try {
        if (!doc.is_object()) throw ParseError(origin + ": document is not an object");
        if (doc.value("format_version", -1) != kNetworkFormatVersion) {
            throw ParseError(origin + ": unsupported or missing format_version");
        }

        BayesNet net;
        for (const auto& v : doc.at("variables")) {
            Variable var;
            var.name = v.at("name").get<std::string>();
            for (const auto& s : v.at("states")) var.states.push_back(s.get<std::string>());
            net.variables.push_back(std::move(var));
        }
        require_valid_variables(net.variables);

        net.dag = Dag(net.node_count());
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2) {
                throw ParseError(origin + ": each edge must be a [parent, child] pair");
            }
            net.dag.add_edge(net.require_var(e[0].get<std::string>()),
                             net.require_var(e[1].get<std::string>()));
        }

        const auto& cpts = doc.at("cpts");
        if (cpts.size() != net.variables.size()) {
            throw ParseError(origin + ": need exactly one cpt per variable");
        }
        net.cpts.resize(net.variables.size());
        std::set<int> seen;
        for (const auto& c : cpts) {
            const std::string child_name = c.at("child").get<std::string>();
            const int child = net.require_var(child_name);
            if (!seen.insert(child).second) {
                throw ParseError(origin + ": duplicate cpt for node '" + child_name + "'");
            }
            Cpt cpt;
            cpt.child = child;
            for (const auto& p : c.at("parents")) {
                cpt.parents.push_back(net.require_var(p.get<std::string>()));
            }
            cpt.child_card = net.variables[static_cast<std::size_t>(child)].cardinality();
            std::size_t rows = 1;
            for (int p : cpt.parents) {
                rows *= static_cast<std::size_t>(net.variables[static_cast<std::size_t>(p)].cardinality());
            }
            const auto& table = c.at("table");
            if (table.size() != rows) {
                throw ParseError(origin + ": cpt of node '" + child_name + "' has " +
                                 std::to_string(table.size()) + " rows, expected " + std::to_string(rows));
            }
            for (const auto& row : table) {
                if (row.size() != static_cast<std::size_t>(cpt.child_card)) {
                    throw ParseError(origin + ": cpt row of node '" + child_name + "' has " +
                                     std::to_string(row.size()) + " entries, expected " +
                                     std::to_string(cpt.child_card));
                }
                for (const auto& v : row) cpt.table.push_back(v.get<double>());
            }
            net.cpts[static_cast<std::size_t>(child)] = std::move(cpt);
        }
        validate_network(net);
        return net;
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

BayesNet load_network(const std::string& path) {
    return network_from_json_text(read_file(path), path);
}

std::string network_to_json_text(const BayesNet& net) {
    json doc;
    doc["format_version"] = kNetworkFormatVersion;
    doc["variables"] = json::array();
    for (const auto& v : net.variables) {
        doc["variables"].push_back({{"name", v.name}, {"states", v.states}});
    }
    doc["edges"] = json::array();
    for (const auto& [from, to] : net.dag.edges()) {
        doc["edges"].push_back({net.variables[static_cast<std::size_t>(from)].name,
                                net.variables[static_cast<std::size_t>(to)].name});
    }
    doc["cpts"] = json::array();
    for (const auto& cpt : net.cpts) {
        json entry;
        entry["child"] = net.variables[static_cast<std::size_t>(cpt.child)].name;
        entry["parents"] = json::array();
        for (int p : cpt.parents) {
            entry["parents"].push_back(net.variables[static_cast<std::size_t>(p)].name);
        }
        json table = json::array();
        for (std::size_t r = 0; r < cpt.row_count(); ++r) {
            json row = json::array();
            for (int s = 0; s < cpt.child_card; ++s) row.push_back(cpt.at(r, s));
            table.push_back(std::move(row));
        }
        entry["table"] = std::move(table);
        doc["cpts"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

void save_network(const BayesNet& net, const std::string& path) {
    validate_network(net);
    write_file(path, network_to_json_text(net));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell.push_back(ch);
        }
    }
    cells.push_back(cell);
    return cells;
}

DataSet parse_dataset(const std::string& text, const std::string& origin,
                      const std::vector<Variable>* schema) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(origin + ": empty file");
    }
    const std::vector<std::string> names = split_csv_line(line);

    std::vector<std::vector<std::string>> raw_rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != names.size()) {
            throw ParseError(origin + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, header has " +
                             std::to_string(names.size()));
        }
        raw_rows.push_back(std::move(cells));
    }

    std::vector<Variable> vars;
    if (schema) {
        for (const auto& name : names) {
            auto it = std::find_if(schema->begin(), schema->end(),
                                   [&name](const Variable& v) { return v.name == name; });
            if (it == schema->end()) {
                throw ParseError(origin + ": column '" + name + "' missing from the schema");
            }
            vars.push_back(*it);
        }
    } else {
        for (std::size_t k = 0; k < names.size(); ++k) {
            std::set<std::string> labels;
            for (const auto& row : raw_rows) labels.insert(row[k]);
            Variable v;
            v.name = names[k];
            v.states.assign(labels.begin(), labels.end()); // sorted distinct labels
            vars.push_back(std::move(v));
        }
    }
    require_valid_variables(vars);

    DataSet ds(vars);
    ds.reserve(raw_rows.size());
    std::vector<int> row(vars.size());
    for (std::size_t r = 0; r < raw_rows.size(); ++r) {
        for (std::size_t k = 0; k < vars.size(); ++k) {
            const int s = vars[k].state_index(raw_rows[r][k]);
            if (s < 0) {
                throw ParseError(origin + ": line " + std::to_string(r + 2) + ", column '" +
                                 vars[k].name + "': unknown state label '" + raw_rows[r][k] + "'");
            }
            row[k] = s;
        }
        ds.push_row(row);
    }
    return ds;
}

} // namespace

DataSet load_dataset(const std::string& path) {
    return parse_dataset(read_file(path), path, nullptr);
}

DataSet load_dataset(const std::string& path, const std::vector<Variable>& schema) {
    return parse_dataset(read_file(path), path, &schema);
}

void save_dataset(const DataSet& ds, const std::string& path) {
    std::ostringstream out;
    const auto& vars = ds.variables();
    for (std::size_t k = 0; k < vars.size(); ++k) {
        out << (k ? "," : "") << vars[k].name;
    }
    out << "\n";
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t k = 0; k < vars.size(); ++k) {
            out << (k ? "," : "") << vars[k].states[static_cast<std::size_t>(ds.at(r, static_cast<int>(k)))];
        }
        out << "\n";
    }
    write_file(path, out.str());
}

} // namespace bnpool::io
