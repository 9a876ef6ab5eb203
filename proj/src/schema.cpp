#include "decorr/schema.hpp"

#include <set>

#include "decorr/error.hpp"

namespace decorr {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidSchema: return "InvalidSchema";
        case ErrorCode::BadAssignment: return "BadAssignment";
        case ErrorCode::DuplicateCell: return "DuplicateCell";
        case ErrorCode::NegativeMass: return "NegativeMass";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::EmptyKeepSet: return "EmptyKeepSet";
        case ErrorCode::OverlappingAxes: return "OverlappingAxes";
        case ErrorCode::SameAxis: return "SameAxis";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::InfiniteDivergence: return "InfiniteDivergence";
        case ErrorCode::BadScope: return "BadScope";
        case ErrorCode::EmptyScopeCellSchema: return "EmptyScopeCellSchema";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::UnknownLevel: return "UnknownLevel";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::InvalidTable: return "InvalidTable";
        case ErrorCode::BadPolicy: return "BadPolicy";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

std::string_view to_string(Role role) noexcept {
    switch (role) {
        case Role::Outcome: return "outcome";
        case Role::Unprotected: return "unprotected";
        case Role::Protected: return "protected";
    }
    return "unknown";
}

std::optional<Role> parse_role(std::string_view text) noexcept {
    if (text == "outcome") return Role::Outcome;
    if (text == "unprotected") return Role::Unprotected;
    if (text == "protected") return Role::Protected;
    return std::nullopt;
}

VariableSchema::VariableSchema(std::vector<Variable> variables) : variables_(std::move(variables)) {
    std::set<std::string> names;
    std::size_t outcomes = 0;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const auto& var = variables_[i];
        if (var.name.empty()) throw Error(ErrorCode::InvalidSchema, "variable name must be nonempty");
        if (!names.insert(var.name).second)
            throw Error(ErrorCode::InvalidSchema, "duplicate variable name '" + var.name + "'");
        if (var.levels.empty())
            throw Error(ErrorCode::InvalidSchema, "variable '" + var.name + "' has no levels");
        std::set<std::string> levels(var.levels.begin(), var.levels.end());
        if (levels.size() != var.levels.size())
            throw Error(ErrorCode::InvalidSchema, "duplicate level in variable '" + var.name + "'");

        switch (var.role) {
            case Role::Outcome:
                ++outcomes;
                outcome_ = i;
                s_size_ = var.levels.size();
                break;
            case Role::Unprotected:
                unprotected_.push_back(i);
                u_size_ *= var.levels.size();
                break;
            case Role::Protected:
                protected_.push_back(i);
                w_size_ *= var.levels.size();
                break;
        }
    }
    if (outcomes != 1)
        throw Error(ErrorCode::InvalidSchema, "exactly one outcome variable required, found " +
                                                  std::to_string(outcomes));
    if (protected_.empty()) throw Error(ErrorCode::InvalidSchema, "at least one protected variable required");
}

std::optional<std::size_t> VariableSchema::find(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> VariableSchema::find_level(std::size_t variable,
                                                      std::string_view level) const noexcept {
    const auto& levels = variables_[variable].levels;
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == level) return i;
    return std::nullopt;
}

Cell VariableSchema::cell_of(std::size_t flat) const noexcept {
    Cell cell;
    cell.w = flat % w_size_;
    flat /= w_size_;
    cell.u = flat % u_size_;
    cell.s = flat / u_size_;
    return cell;
}

void VariableSchema::validate(const Assignment& assignment) const {
    if (assignment.levels.size() != variables_.size())
        throw Error(ErrorCode::BadAssignment, "assignment has " + std::to_string(assignment.levels.size()) +
                                                  " entries, schema has " + std::to_string(variables_.size()));
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (assignment.levels[i] >= variables_[i].levels.size())
            throw Error(ErrorCode::BadAssignment, "level index " + std::to_string(assignment.levels[i]) +
                                                      " out of range for '" + variables_[i].name + "'");
}

namespace {

std::size_t encode(const std::vector<Variable>& vars, const std::vector<std::size_t>& indices,
                   const Assignment& assignment) {
    std::size_t flat = 0;
    for (auto i : indices) flat = flat * vars[i].levels.size() + assignment.levels[i];
    return flat;
}

std::vector<std::size_t> decode(const std::vector<Variable>& vars, const std::vector<std::size_t>& indices,
                                std::size_t flat) {
    std::vector<std::size_t> levels(indices.size());
    for (std::size_t k = indices.size(); k-- > 0;) {
        const auto n = vars[indices[k]].levels.size();
        levels[k] = flat % n;
        flat /= n;
    }
    return levels;
}

}  // namespace

Cell VariableSchema::cell_of(const Assignment& assignment) const {
    validate(assignment);
    return Cell{assignment.levels[outcome_], encode(variables_, unprotected_, assignment),
                encode(variables_, protected_, assignment)};
}

Assignment VariableSchema::assignment_of(const Cell& cell) const {
    Assignment a;
    a.levels.assign(variables_.size(), 0);
    a.levels[outcome_] = cell.s;
    const auto u = decode_u(cell.u);
    for (std::size_t k = 0; k < unprotected_.size(); ++k) a.levels[unprotected_[k]] = u[k];
    const auto w = decode_w(cell.w);
    for (std::size_t k = 0; k < protected_.size(); ++k) a.levels[protected_[k]] = w[k];
    return a;
}

std::vector<std::size_t> VariableSchema::decode_w(std::size_t w) const {
    return decode(variables_, protected_, w);
}

std::vector<std::size_t> VariableSchema::decode_u(std::size_t u) const {
    return decode(variables_, unprotected_, u);
}

std::string VariableSchema::compound_label(const std::vector<std::size_t>& vars,
                                           const std::vector<std::size_t>& levels) const {
    if (vars.empty()) return "*";
    std::string out;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        if (k) out += ',';
        out += variables_[vars[k]].name + "=" + variables_[vars[k]].levels[levels[k]];
    }
    return out;
}

std::string VariableSchema::s_label(std::size_t s) const { return variables_[outcome_].levels.at(s); }

std::string VariableSchema::u_label(std::size_t u) const { return compound_label(unprotected_, decode_u(u)); }

std::string VariableSchema::w_label(std::size_t w) const { return compound_label(protected_, decode_w(w)); }

}  // namespace decorr
