#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace albama {

struct TreeParams {
  // Minimum observations per child, counted with bootstrap multiplicity.
  int min_leaf = 40;
  // Maximum number of split levels below the root; 0 means unlimited.
  int max_depth = 0;
  // Minimum SSE reduction to accept a split. The tiny default stops splits
  // on pure floating-point dust in constant nodes.
  double gain_tolerance = 1e-12;
};

// Bootstrap draw for one tree. The regressor is the time trend, so the trend
// value of an observation is its index; only the index multiset is stored.
struct TrainingSample {
  std::vector<int> indices;
};

struct SplitCandidate {
  double split;     // threshold c on the trend axis; left child is <= c
  double sse_gain;  // parent SSE minus total child SSE
};

// Least-squares regression tree over the trend axis. Leaves partition the
// whole real line, store the member mean and the member multiset.
class Tree {
 public:
  struct Node {
    double split = 0.0;     // internal nodes
    std::int32_t left = -1;  // -1 marks a leaf
    std::int32_t right = -1;
    double mean = 0.0;       // leaves
    std::int32_t members_begin = 0;  // leaves: range into members()
    std::int32_t members_end = 0;
  };

  bool is_leaf(std::size_t node) const { return nodes_[node].left < 0; }
  const std::vector<Node>& nodes() const { return nodes_; }

  // Training indices sorted ascending; leaf member ranges point into this.
  const std::vector<int>& members() const { return members_; }

  double predict(double trend) const;
  std::span<const int> leaf_members(double trend) const;
  std::size_t leaf_index(double trend) const;  // node id of the routed leaf

 private:
  std::vector<Node> nodes_;
  std::vector<int> members_;

  friend Tree fit_tree(const TrainingSample&, std::span<const double>,
                       const TreeParams&);
};

// Optimal split of `node_members` (a multiset of observation indices) by
// total within-child SSE over y. Candidates are midpoints between
// consecutive distinct trend values; both children must keep at least
// min_leaf members (multiplicity counted). Returns nothing when no feasible
// candidate improves SSE by more than gain_tolerance. SSE ties resolve to
// the smallest threshold.
std::optional<SplitCandidate> best_split(std::span<const int> node_members,
                                         std::span<const double> y,
                                         const TreeParams& params);

Tree fit_tree(const TrainingSample& sample, std::span<const double> y,
              const TreeParams& params);

}  // namespace albama
