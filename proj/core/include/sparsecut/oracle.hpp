#pragma once

#include "sparsecut/graph.hpp"

namespace sparsecut {

struct OracleOptions {
  /// Enumeration visits 2^(n-1) cuts; raise only for sparse G with rank-1 H,
  /// where each step costs O(deg).
  int max_vertices = kExhaustiveLimit;
};

struct OracleResult {
  Cut cut;
  SparsityReport report;
};

/// Exact sparsest cut by exhaustive enumeration. Ties go to the
/// lexicographically smallest side containing vertex 0. Throws InputError when
/// n exceeds the guard or no cut separates any H mass.
OracleResult brute_force_opt(const InstancePair& pair, const OracleOptions& options = {});

}  // namespace sparsecut
