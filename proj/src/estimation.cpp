#include "decorr/estimation.hpp"

#include <fstream>
#include <string>

#include "decorr/error.hpp"

namespace decorr {

Estimate estimate_joint(const Dataset& data, SmoothingSpec smoothing) {
    if (data.records.empty()) throw Error(ErrorCode::EmptyDataset, "cannot estimate from zero records");
    if (!(smoothing.alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");

    const auto& schema = data.schema;
    std::vector<std::size_t> counts(schema.cell_count(), 0);
    for (const auto& record : data.records) ++counts[schema.flat_index(schema.cell_of(record))];

    const double n = static_cast<double>(data.records.size());
    const double denom = n + smoothing.alpha * static_cast<double>(counts.size());
    std::vector<double> mass(counts.size());
    std::vector<std::size_t> empty;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        mass[i] = (static_cast<double>(counts[i]) + smoothing.alpha) / denom;
        if (counts[i] == 0) empty.push_back(i);
    }
    return Estimate{JointDistribution(schema, std::move(mass)), data.records.size(), std::move(empty), denom};
}

namespace {

std::vector<std::string> split_row(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

Dataset parse_csv(std::istream& in, const VariableSchema& schema) {
    std::string line;
    if (!std::getline(in, line) || split_row(line) == std::vector<std::string>{""})
        throw Error(ErrorCode::EmptyFile, "no header row");
    const auto header = split_row(line);

    // column position of each schema variable
    std::vector<std::size_t> column(schema.size());
    for (std::size_t v = 0; v < schema.size(); ++v) {
        const auto& name = schema.variable(v).name;
        std::size_t found = header.size();
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) found = c;
        if (found == header.size()) throw Error(ErrorCode::MissingColumn, "header lacks column '" + name + "'");
        column[v] = found;
    }

    Dataset data{schema, {}};
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_row(line);
        if (fields.size() != header.size())
            throw Error(ErrorCode::RaggedRow, "row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                                                  " fields, header has " + std::to_string(header.size()));
        Assignment a;
        a.levels.resize(schema.size());
        for (std::size_t v = 0; v < schema.size(); ++v) {
            const auto level = schema.find_level(v, fields[column[v]]);
            if (!level)
                throw Error(ErrorCode::UnknownLevel, "row " + std::to_string(row) + ": value '" + fields[column[v]] +
                                                         "' is not a level of '" + schema.variable(v).name + "'");
            a.levels[v] = *level;
        }
        data.records.push_back(std::move(a));
    }
    if (data.records.empty()) throw Error(ErrorCode::EmptyDataset, "file has a header but no records");
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const VariableSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    return parse_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& data) {
    const auto& vars = data.schema.variables();
    for (std::size_t v = 0; v < vars.size(); ++v) out << (v ? "," : "") << vars[v].name;
    out << '\n';
    for (const auto& record : data.records) {
        for (std::size_t v = 0; v < vars.size(); ++v) out << (v ? "," : "") << vars[v].levels[record.levels[v]];
        out << '\n';
    }
}

}  // namespace decorr
