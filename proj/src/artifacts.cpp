#include "dlab/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dlab::artifacts {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CsvWriter::meta(const std::string& key, const std::string& value) {
    out_ << "# " << key << "=" << value << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
}

void CsvWriter::row_values(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row(cells);
}

double CsvFile::value(size_t r, const std::string& column) const {
    for (size_t c = 0; c < columns.size(); ++c)
        if (columns[c] == column) return std::stod(rows.at(r).at(c));
    throw std::out_of_range("CsvFile: no column named " + column);
}

CsvFile CsvFile::parse(std::istream& in) {
    CsvFile f;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            size_t start = body.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            body = body.substr(start);
            size_t eq = body.find('=');
            if (eq != std::string::npos) f.meta[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            f.columns = std::move(cells);
            have_header = true;
        } else {
            f.rows.push_back(std::move(cells));
        }
    }
    return f;
}

CsvFile CsvFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse(in);
}

std::string body_params_to_json(const body::BodyParams& p) {
    nlohmann::ordered_json j;
    j["d"] = p.d;
    j["gamma"] = p.gamma;
    return j.dump();
}

body::BodyParams body_params_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    body::BodyParams p;
    p.d = j.at("d").get<int>();
    p.gamma = j.at("gamma").get<double>();
    p.validate();
    return p;
}

std::string placement_to_json(const lattice::Placement& pl) {
    nlohmann::ordered_json j;
    const int d = pl.dim();
    j["d"] = d;
    j["R"] = pl.R;
    nlohmann::ordered_json rot = nlohmann::ordered_json::array();
    for (int i = 0; i < d; ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int k = 0; k < d; ++k) row.push_back(pl.rotation.m[i][k]);
        rot.push_back(row);
    }
    j["rotation"] = rot;
    nlohmann::ordered_json t = nlohmann::ordered_json::array();
    for (int i = 0; i < d; ++i) t.push_back(pl.translation[i]);
    j["translation"] = t;
    return j.dump();
}

lattice::Placement placement_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    lattice::Placement pl;
    int d = j.at("d").get<int>();
    pl.rotation.d = d;
    pl.R = j.at("R").get<double>();
    auto rot = j.at("rotation");
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) pl.rotation.m[i][k] = rot.at(i).at(k).get<double>();
    auto t = j.at("translation");
    for (int i = 0; i < d; ++i) pl.translation[i] = t.at(i).get<double>();
    pl.validate();
    return pl;
}

}  // namespace dlab::artifacts
