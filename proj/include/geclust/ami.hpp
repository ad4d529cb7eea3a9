#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace geclust {

/// Joint counts between two labelings over the same observations.
struct ContingencyTable {
  std::vector<std::vector<long long>> counts;  // rows: classes of a, cols: classes of b
  std::vector<long long> row_sums;
  std::vector<long long> col_sums;
  long long total = 0;

  static ContingencyTable from_labels(std::span<const int> a, std::span<const int> b);
};

/// Shannon entropy (nats) of label frequencies. Throws ConfigError when empty.
double entropy(std::span<const int> labels);
double mutual_information(const ContingencyTable& table);
/// E[MI] under the hypergeometric (fixed marginals) model, via log-factorials.
double expected_mutual_information(const ContingencyTable& table);

/// Adjusted mutual information, arithmetic-mean normalisation. `predicted`
/// must already have noise expanded into singletons.
double ami(std::span<const int> truth, std::span<const int> predicted);

}  // namespace geclust
