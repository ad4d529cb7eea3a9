#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geclust {

class Graph;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Observations to cluster: one row per observation, one column per graph node
/// (column order = graph node order).
struct AttributeMatrix {
  std::vector<std::string> observation_ids;
  std::vector<std::string> column_ids;
  RowMatrix values;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

/// Throws NumericalError on non-finite values, ConfigError on id/shape mismatch.
void check_attributes(const AttributeMatrix& attrs);

/// Reorders columns so they follow g's node order. Throws ConfigError when the
/// column ids are not exactly g's node ids.
AttributeMatrix align_to_graph(const AttributeMatrix& attrs, const Graph& g);

/// Default ids "0", "1", ... for matrices built in code.
std::vector<std::string> index_ids(std::size_t n);

// CSV: header `observation_id,<column ids>`, then one row per observation.
std::string format_attributes_csv(const AttributeMatrix& attrs);
AttributeMatrix parse_attributes_csv(std::string_view text);
AttributeMatrix load_attributes_csv(const std::string& path);
void save_attributes_csv(const AttributeMatrix& attrs, const std::string& path);

enum class MetricKind { generalized_euclidean, euclidean };

const char* to_string(MetricKind kind);

/// Symmetric, non-negative, zero-diagonal pairwise distances.
struct DistanceMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;
  MetricKind metric = MetricKind::euclidean;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

/// Throws ConfigError unless square, exactly symmetric, zero diagonal,
/// finite and non-negative.
void check_distance_matrix(const DistanceMatrix& d);

// CSV: header `,<ids>`, then `id,<row>` per observation.
std::string format_distance_csv(const DistanceMatrix& d);
DistanceMatrix parse_distance_csv(std::string_view text);
DistanceMatrix load_distance_csv(const std::string& path);
void save_distance_csv(const DistanceMatrix& d, const std::string& path);

/// Cluster assignment per observation; -1 marks noise.
struct Labeling {
  std::vector<std::string> ids;
  std::vector<int> labels;
};

// CSV: `observation_id,label` (+ optional `eval_label` column, ignored on read).
std::string format_labels_csv(const Labeling& labels, const std::vector<int>* eval_labels = nullptr);
Labeling parse_labels_csv(std::string_view text);
Labeling load_labels_csv(const std::string& path);
void save_labels_csv(const Labeling& labels, const std::string& path, const std::vector<int>* eval_labels = nullptr);

}  // namespace geclust
