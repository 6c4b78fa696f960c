// artifacts.hpp -- CSV and JSON artifact I/O.
//
// CSV artifacts carry '#'-prefixed metadata lines (seed, version, parameters,
// timestamp), then a header row, then data rows: '.' decimals, '\n' line
// ends, doubles printed with 17 significant digits so every file re-parses
// losslessly.
#pragma once

#include <array>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dlab/body.hpp"
#include "dlab/lattice.hpp"

namespace dlab::artifacts {

std::string format_double(double v);  // %.17g

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}
    void meta(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& values);

private:
    std::ostream& out_;
};

struct CsvFile {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    double value(size_t row, const std::string& column) const;
    static CsvFile parse(std::istream& in);
    static CsvFile load(const std::string& path);
};

// JSON round trips. Body parameters serialize as {"d":..., "gamma":...};
// derived constants are always recomputed on load, never read back.
std::string body_params_to_json(const body::BodyParams& p);
body::BodyParams body_params_from_json(const std::string& text);

std::string placement_to_json(const lattice::Placement& pl);
lattice::Placement placement_from_json(const std::string& text);

}  // namespace dlab::artifacts
