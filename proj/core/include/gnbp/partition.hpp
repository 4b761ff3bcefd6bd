#pragma once

#include <iterator>
#include <span>
#include <vector>

namespace gnbp {

/// A set partition of m elements in canonical form: labels are 0..l-1,
/// assigned in order of first appearance (element 0 is always in cluster 0).
/// Every constructor canonicalizes, so two Partitions with the same blocks
/// compare equal.
class Partition {
 public:
  Partition() = default;

  /// Canonicalizes arbitrary non-negative labels.
  static Partition from_labels(std::span<const int> labels);

  int size() const noexcept { return static_cast<int>(assignments_.size()); }
  int num_clusters() const noexcept { return static_cast<int>(sizes_.size()); }
  const std::vector<int>& assignments() const noexcept { return assignments_; }
  const std::vector<int>& sizes() const noexcept { return sizes_; }

  /// Restriction to the first j elements.
  Partition restricted(int j) const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> assignments_;
  std::vector<int> sizes_;
};

/// Number of distinct clusters among the first j elements.
int subsample_cluster_counts(const Partition& part, int j);

/// Every set partition of [m] exactly once, as restricted growth strings in
/// lexicographic order. Limited to m <= 12 (B_12 = 4213597).
class SetPartitions {
 public:
  static constexpr int kMaxElements = 12;

  explicit SetPartitions(int m);

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Partition;
    using difference_type = std::ptrdiff_t;
    using reference = const Partition&;
    using pointer = const Partition*;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const noexcept { return done_; }

   private:
    friend class SetPartitions;
    explicit iterator(int m);
    void refresh();

    std::vector<int> rgs_;
    Partition current_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(m_); }
  std::default_sentinel_t end() const noexcept { return {}; }

 private:
  int m_;
};

inline SetPartitions enumerate_partitions(int m) { return SetPartitions(m); }

/// Bell number B_m by the Bell triangle (exact up to m = 25).
unsigned long long bell_number(int m);

}  // namespace gnbp
