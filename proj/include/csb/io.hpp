#pragma once

#include <span>
#include <string>
#include <utility>

#include "csb/intercept_test.hpp"
#include "csb/matrix.hpp"

namespace csb {

// CSV with header "group,value"; group labels are arbitrary strings, groups
// are ordered by first appearance. Parse failures carry the line number.
GroupedData ingest_grouped_csv(const std::string& path);

// Rectangular numeric CSV, optional single header row.
Matrix ingest_matrix_csv(const std::string& path);

// Removes observations from a grouped dataset; each entry is a 1-based
// (group index, within-group position) pair referring to the original data.
GroupedData remove_entries(const GroupedData& data,
                           std::span<const std::pair<int, int>> drops);

} // namespace csb
