#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include "decorr/distribution.hpp"
#include "decorr/schema.hpp"

namespace decorr {

// Individual-level records; one Assignment per individual.
struct Dataset {
    VariableSchema schema;
    std::vector<Assignment> records;
};

struct SmoothingSpec {
    double alpha = 0.0;  // pseudo-count added to every joint cell
};

struct Estimate {
    JointDistribution joint;
    std::size_t record_count = 0;
    // Flat indices of cells with no observed record. Reported regardless of
    // smoothing so structural zeros are never erased silently.
    std::vector<std::size_t> empty_cells;
    // N + alpha * #cells: the total count mass behind the estimate.
    double effective_sample_size = 0.0;
};

// Pr(cell) = (count + alpha) / (N + alpha * #cells).
// Throws EmptyDataset, InvalidArgument (negative alpha), BadAssignment.
Estimate estimate_joint(const Dataset& data, SmoothingSpec smoothing = {});

// CSV: comma separated, header row naming every schema variable (extra
// columns are ignored), one record per row, values are declared level labels.
// Throws EmptyFile, MissingColumn, RaggedRow, UnknownLevel, EmptyDataset.
Dataset parse_csv(std::istream& in, const VariableSchema& schema);
Dataset load_csv(const std::filesystem::path& path, const VariableSchema& schema);

// Columns in schema order, labels as declared, "\n" line endings.
void write_csv(std::ostream& out, const Dataset& data);

}  // namespace decorr
