#include "gnbp/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace gnbp {

Partition Partition::from_labels(std::span<const int> labels) {
  Partition out;
  out.assignments_.reserve(labels.size());
  std::unordered_map<int, int> relabel;
  for (int label : labels) {
    if (label < 0) throw std::invalid_argument("Partition: negative label");
    auto [it, inserted] = relabel.try_emplace(label, static_cast<int>(relabel.size()));
    if (inserted) out.sizes_.push_back(0);
    out.assignments_.push_back(it->second);
    ++out.sizes_[static_cast<std::size_t>(it->second)];
  }
  return out;
}

Partition Partition::restricted(int j) const {
  if (j < 0 || j > size()) {
    throw std::out_of_range("Partition::restricted: j outside [0, m]");
  }
  return from_labels(std::span<const int>(assignments_.data(), static_cast<std::size_t>(j)));
}

int subsample_cluster_counts(const Partition& part, int j) {
  if (j < 1 || j > part.size()) {
    throw std::out_of_range("subsample_cluster_counts: j outside [1, m]");
  }
  // Canonical labels make the count the largest label seen plus one.
  const auto& z = part.assignments();
  return *std::max_element(z.begin(), z.begin() + j) + 1;
}

SetPartitions::SetPartitions(int m) : m_(m) {
  if (m < 1 || m > kMaxElements) {
    throw std::invalid_argument("enumerate_partitions: m must lie in [1, 12]");
  }
}

SetPartitions::iterator::iterator(int m)
    : rgs_(static_cast<std::size_t>(m), 0), done_(false) {
  refresh();
}

void SetPartitions::iterator::refresh() {
  current_ = Partition::from_labels(rgs_);
}

SetPartitions::iterator& SetPartitions::iterator::operator++() {
  // Rightmost position that can grow: rgs[i] <= max(rgs[0..i-1]).
  const int m = static_cast<int>(rgs_.size());
  std::vector<int> prefix_max(rgs_.size(), 0);
  for (int i = 1; i < m; ++i) {
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)],
                 rgs_[static_cast<std::size_t>(i - 1)]);
  }
  for (int i = m - 1; i >= 1; --i) {
    auto idx = static_cast<std::size_t>(i);
    if (rgs_[idx] <= prefix_max[idx]) {
      ++rgs_[idx];
      std::fill(rgs_.begin() + i + 1, rgs_.end(), 0);
      refresh();
      return *this;
    }
  }
  done_ = true;
  return *this;
}

unsigned long long bell_number(int m) {
  if (m < 0 || m > 25) throw std::out_of_range("bell_number: m outside [0, 25]");
  std::vector<unsigned long long> row{1};
  for (int i = 0; i < m; ++i) {
    std::vector<unsigned long long> next{row.back()};
    for (unsigned long long v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

}  // namespace gnbp
