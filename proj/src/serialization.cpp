#include "decorr/serialization.hpp"

#include <fstream>
#include <sstream>

#include "decorr/error.hpp"

namespace decorr {

using nlohmann::json;

json schema_to_json(const VariableSchema& schema) {
    json vars = json::array();
    for (const auto& v : schema.variables())
        vars.push_back({{"name", v.name}, {"role", std::string(to_string(v.role))}, {"levels", v.levels}});
    return json{{"variables", vars}};
}

VariableSchema schema_from_json(const json& doc) {
    try {
        std::vector<Variable> vars;
        for (const auto& entry : doc.at("variables")) {
            Variable v;
            v.name = entry.at("name").get<std::string>();
            const auto role_text = entry.at("role").get<std::string>();
            const auto role = parse_role(role_text);
            if (!role) throw Error(ErrorCode::InvalidSchema, "unknown role '" + role_text + "' for '" + v.name + "'");
            v.role = *role;
            v.levels = entry.at("levels").get<std::vector<std::string>>();
            vars.push_back(std::move(v));
        }
        return VariableSchema(std::move(vars));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("schema: ") + e.what());
    }
}

json joint_to_json(const JointDistribution& dist) {
    const auto& schema = dist.schema();
    return json{
        {"format", kJointFormat},
        {"schema", schema_to_json(schema)},
        {"shape", {schema.s_size(), schema.u_size(), schema.w_size()}},
        {"probabilities", std::vector<double>(dist.mass().begin(), dist.mass().end())},
    };
}

JointDistribution joint_from_json(const json& doc) {
    try {
        if (doc.at("format").get<std::string>() != kJointFormat)
            throw Error(ErrorCode::ParseError, "unsupported joint format '" + doc.at("format").get<std::string>() + "'");
        auto schema = schema_from_json(doc.at("schema"));
        const auto shape = doc.at("shape").get<std::vector<std::size_t>>();
        if (shape != std::vector<std::size_t>{schema.s_size(), schema.u_size(), schema.w_size()})
            throw Error(ErrorCode::ParseError, "shape does not match schema");
        return JointDistribution(std::move(schema), doc.at("probabilities").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("joint: ") + e.what());
    }
}

json manifest_to_json(const RunManifest& m) {
    json doc{{"tool", "decorr"},
             {"version", m.tool_version},
             {"subcommand", m.subcommand},
             {"inputs", m.inputs},
             {"outputs", m.outputs},
             {"parameters", m.parameters}};
    doc["seed"] = m.seed ? json(*m.seed) : json(nullptr);
    return doc;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
    std::vector<std::filesystem::path> temps;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) std::filesystem::remove(t, ec);
    };
    for (const auto& [path, contents] : files) {
        auto tmp = path;
        tmp += ".tmp";
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << contents;
        out.close();
        if (!out) {
            cleanup();
            throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i) std::filesystem::rename(temps[i], files[i].first);
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace decorr
