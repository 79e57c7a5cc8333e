#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qforge/forge/pipeline.hpp"
#include "qforge/forge/registry.hpp"

namespace qforge::forge {

/// An inclusive integer range "sym=lo..hi".
struct GridAxis {
  std::string symbol;
  long lo = 0;
  long hi = 0;
};

/// Cells are ordered q-major, then by the axes in the order given, the last axis fastest.
struct GridSpec {
  std::vector<GridAxis> axes;
  std::vector<ExactScalar> qs;
  Bindings fixed;  // extra bindings shared by every cell

  std::size_t size() const;
  std::vector<Bindings> cells() const;
};

// "M=0..6,N=0..6"; an empty string yields no axes. Throws Usage on malformed text
// or an empty range.
std::vector<GridAxis> parse_grid(const std::string& text);

// Comma-separated exact scalars, e.g. "1/2,2/3".
std::vector<ExactScalar> parse_scalar_list(const std::string& text);

/// One report per cell, in cell order, whatever the execution strategy.
std::vector<IdentityReport> run_grid(const IdentityRecord& rec, const std::vector<Bindings>& cells, double tol,
                                     std::optional<Mode> mode = std::nullopt, Execution exec = Execution::Parallel);

}  // namespace qforge::forge
