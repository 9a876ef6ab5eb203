#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace decorr {

enum class Role { Outcome, Unprotected, Protected };

std::string_view to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view text) noexcept;

struct Variable {
    std::string name;
    Role role = Role::Unprotected;
    std::vector<std::string> levels;

    bool operator==(const Variable&) const = default;
};

// One level index per schema variable, in schema order.
struct Assignment {
    std::vector<std::size_t> levels;

    bool operator==(const Assignment&) const = default;
};

// Coordinates of a cell in the flattened (S, U, W) tensor.
struct Cell {
    std::size_t s = 0;
    std::size_t u = 0;
    std::size_t w = 0;

    bool operator==(const Cell&) const = default;
};

// Ordered list of categorical variables with roles.
//
// The joint tensor has three axes: S (levels of the single outcome variable),
// U (cartesian product of unprotected variables) and W (cartesian product of
// protected variables). U and W are flattened row-major in schema order, so the
// earliest variable of a role varies slowest. With no unprotected variables
// |U| = 1.
class VariableSchema {
public:
    explicit VariableSchema(std::vector<Variable> variables);

    const std::vector<Variable>& variables() const noexcept { return variables_; }
    std::size_t size() const noexcept { return variables_.size(); }
    const Variable& variable(std::size_t index) const { return variables_.at(index); }

    std::optional<std::size_t> find(std::string_view name) const noexcept;
    std::optional<std::size_t> find_level(std::size_t variable, std::string_view level) const noexcept;

    std::size_t outcome_index() const noexcept { return outcome_; }
    const std::vector<std::size_t>& unprotected_indices() const noexcept { return unprotected_; }
    const std::vector<std::size_t>& protected_indices() const noexcept { return protected_; }

    std::size_t s_size() const noexcept { return s_size_; }
    std::size_t u_size() const noexcept { return u_size_; }
    std::size_t w_size() const noexcept { return w_size_; }
    std::size_t cell_count() const noexcept { return s_size_ * u_size_ * w_size_; }

    std::size_t flat_index(const Cell& cell) const noexcept {
        return (cell.s * u_size_ + cell.u) * w_size_ + cell.w;
    }
    Cell cell_of(std::size_t flat) const noexcept;

    // Throws BadAssignment when the assignment does not fit the schema.
    void validate(const Assignment& assignment) const;
    Cell cell_of(const Assignment& assignment) const;
    Assignment assignment_of(const Cell& cell) const;

    // Level indices of the protected (resp. unprotected) variables for a
    // flattened W (resp. U) index, in schema order.
    std::vector<std::size_t> decode_w(std::size_t w) const;
    std::vector<std::size_t> decode_u(std::size_t u) const;

    std::string s_label(std::size_t s) const;
    std::string u_label(std::size_t u) const;
    std::string w_label(std::size_t w) const;

    bool operator==(const VariableSchema& other) const { return variables_ == other.variables_; }

private:
    std::string compound_label(const std::vector<std::size_t>& vars,
                               const std::vector<std::size_t>& levels) const;

    std::vector<Variable> variables_;
    std::size_t outcome_ = 0;
    std::vector<std::size_t> unprotected_;
    std::vector<std::size_t> protected_;
    std::size_t s_size_ = 1;
    std::size_t u_size_ = 1;
    std::size_t w_size_ = 1;
};

}  // namespace decorr
