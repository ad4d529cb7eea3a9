#include "geclust/ami.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "geclust/error.hpp"

namespace geclust {

namespace {

std::vector<int> dense_codes(std::span<const int> labels, std::size_t& classes) {
  std::map<int, int> code;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = code.try_emplace(labels[i], static_cast<int>(code.size()));
    out[i] = it->second;
  }
  classes = code.size();
  return out;
}

double entropy_of_counts(std::span<const long long> counts, long long total) {
  double h = 0.0;
  const double n = static_cast<double>(total);
  for (auto c : counts)
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log(p);
    }
  return h;
}

bool same_partition(std::span<const int> a, std::span<const int> b) {
  std::map<int, int> ab;
  std::map<int, int> ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto [it, ins] = ab.try_emplace(a[i], b[i]); !ins && it->second != b[i]) return false;
    if (auto [it, ins] = ba.try_emplace(b[i], a[i]); !ins && it->second != a[i]) return false;
  }
  return true;
}

}  // namespace

ContingencyTable ContingencyTable::from_labels(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw ConfigError("labelings differ in length (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw ConfigError("labelings are empty");
  std::size_t ra = 0, cb = 0;
  const auto ca = dense_codes(a, ra);
  const auto cbv = dense_codes(b, cb);
  ContingencyTable t;
  t.counts.assign(ra, std::vector<long long>(cb, 0));
  t.row_sums.assign(ra, 0);
  t.col_sums.assign(cb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++t.counts[static_cast<std::size_t>(ca[i])][static_cast<std::size_t>(cbv[i])];
    ++t.row_sums[static_cast<std::size_t>(ca[i])];
    ++t.col_sums[static_cast<std::size_t>(cbv[i])];
  }
  t.total = static_cast<long long>(a.size());
  return t;
}

double entropy(std::span<const int> labels) {
  if (labels.empty()) throw ConfigError("entropy of an empty labeling");
  std::map<int, long long> freq;
  for (int l : labels) ++freq[l];
  std::vector<long long> counts;
  for (const auto& [l, c] : freq) counts.push_back(c);
  return entropy_of_counts(counts, static_cast<long long>(labels.size()));
}

double mutual_information(const ContingencyTable& t) {
  if (t.total <= 0) throw ConfigError("mutual information of an empty table");
  const double n = static_cast<double>(t.total);
  double mi = 0.0;
  for (std::size_t i = 0; i < t.row_sums.size(); ++i)
    for (std::size_t j = 0; j < t.col_sums.size(); ++j) {
      const auto nij = t.counts[i][j];
      if (nij == 0) continue;
      const double v = static_cast<double>(nij);
      mi += v / n * std::log(n * v / (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
    }
  return std::max(0.0, mi);
}

double expected_mutual_information(const ContingencyTable& t) {
  const long long n = t.total;
  if (n <= 0) throw ConfigError("expected mutual information of an empty table");
  std::vector<double> lf(static_cast<std::size_t>(n) + 1, 0.0);
  for (long long i = 1; i <= n; ++i) lf[static_cast<std::size_t>(i)] = lf[static_cast<std::size_t>(i - 1)] + std::log(static_cast<double>(i));
  auto f = [&](long long k) { return lf[static_cast<std::size_t>(k)]; };
  const double dn = static_cast<double>(n);

  double emi = 0.0;
  for (auto a : t.row_sums)
    for (auto b : t.col_sums) {
      const long long lo = std::max<long long>(1, a + b - n);
      const long long hi = std::min(a, b);
      const double fixed = f(a) + f(b) + f(n - a) + f(n - b) - f(n);
      for (long long nij = lo; nij <= hi; ++nij) {
        const double v = static_cast<double>(nij);
        const double term = v / dn * std::log(dn * v / (static_cast<double>(a) * static_cast<double>(b)));
        const double log_p = fixed - f(nij) - f(a - nij) - f(b - nij) - f(n - a - b + nij);
        emi += term * std::exp(log_p);
      }
    }
  return emi;
}

double ami(std::span<const int> truth, std::span<const int> predicted) {
  const auto t = ContingencyTable::from_labels(truth, predicted);
  const double hu = entropy_of_counts(t.row_sums, t.total);
  const double hv = entropy_of_counts(t.col_sums, t.total);
  if (hu == 0.0 && hv == 0.0) return same_partition(truth, predicted) ? 1.0 : 0.0;
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double numerator = mi - emi;
  const double denominator = 0.5 * (hu + hv) - emi;
  if (std::abs(denominator) < 1e-12) return std::abs(numerator) < 1e-12 && same_partition(truth, predicted) ? 1.0 : 0.0;
  return numerator / denominator;
}

}  // namespace geclust
