#include "albama/tree.hpp"

#include <algorithm>
#include <cstddef>

#include "albama/error.hpp"

namespace albama {

namespace {

struct ScanResult {
  std::size_t pos;  // first array position of the right child
  double split;
  double sse_gain;
};

// Single left-to-right sweep over a sorted index range using the running-sums
// identity SSE = sum(y^2) - sum(y)^2/n per side. Strict '>' on the gain keeps
// the smallest threshold among ties.
std::optional<ScanResult> scan_best_split(std::span<const int> sorted,
                                          std::span<const double> y,
                                          int min_leaf, double gain_tolerance) {
  const std::size_t n = sorted.size();
  if (n < 2 * static_cast<std::size_t>(min_leaf)) return std::nullopt;

  double total_sum = 0.0, total_sq = 0.0;
  for (int idx : sorted) {
    total_sum += y[idx];
    total_sq += y[idx] * y[idx];
  }
  const double parent_sse =
      total_sq - total_sum * total_sum / static_cast<double>(n);

  std::optional<ScanResult> best;
  double left_sum = 0.0, left_sq = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double v = y[sorted[k - 1]];
    left_sum += v;
    left_sq += v * v;
    if (sorted[k - 1] == sorted[k]) continue;  // not a distinct-value boundary
    const std::size_t nl = k, nr = n - k;
    if (nl < static_cast<std::size_t>(min_leaf) ||
        nr < static_cast<std::size_t>(min_leaf))
      continue;
    const double right_sum = total_sum - left_sum;
    const double right_sq = total_sq - left_sq;
    const double sse =
        (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
        (right_sq - right_sum * right_sum / static_cast<double>(nr));
    const double gain = parent_sse - sse;
    if (gain <= gain_tolerance) continue;
    if (!best || gain > best->sse_gain) {
      best = ScanResult{
          k, 0.5 * (static_cast<double>(sorted[k - 1]) + sorted[k]), gain};
    }
  }
  return best;
}

double range_mean(std::span<const int> sorted, std::span<const double> y) {
  double sum = 0.0;
  for (int idx : sorted) sum += y[idx];
  return sum / static_cast<double>(sorted.size());
}

}  // namespace

std::optional<SplitCandidate> best_split(std::span<const int> node_members,
                                         std::span<const double> y,
                                         const TreeParams& params) {
  if (node_members.empty())
    throw Error(ErrorKind::bad_param, "best_split on empty node");
  std::vector<int> sorted(node_members.begin(), node_members.end());
  std::sort(sorted.begin(), sorted.end());
  const auto r =
      scan_best_split(sorted, y, params.min_leaf, params.gain_tolerance);
  if (!r) return std::nullopt;
  return SplitCandidate{r->split, r->sse_gain};
}

Tree fit_tree(const TrainingSample& sample, std::span<const double> y,
              const TreeParams& params) {
  if (sample.indices.empty())
    throw Error(ErrorKind::bad_param, "fit_tree on empty sample");
  if (params.min_leaf < 1)
    throw Error(ErrorKind::bad_param, "min_leaf must be >= 1");
  if (params.gain_tolerance < 0.0)
    throw Error(ErrorKind::bad_param, "gain_tolerance must be >= 0");
  for (int idx : sample.indices) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= y.size())
      throw Error(ErrorKind::bad_param, "sample index out of bounds");
  }

  Tree tree;
  tree.members_ = sample.indices;
  std::sort(tree.members_.begin(), tree.members_.end());

  struct Work {
    std::int32_t node;
    std::int32_t lo, hi;  // range into members_
    int depth;
  };
  std::vector<Work> stack;
  tree.nodes_.emplace_back();
  stack.push_back({0, 0, static_cast<std::int32_t>(tree.members_.size()), 0});

  while (!stack.empty()) {
    const Work w = stack.back();
    stack.pop_back();
    const std::span<const int> range(tree.members_.data() + w.lo,
                                     static_cast<std::size_t>(w.hi - w.lo));

    std::optional<ScanResult> split;
    if (params.max_depth == 0 || w.depth < params.max_depth)
      split = scan_best_split(range, y, params.min_leaf, params.gain_tolerance);

    if (!split) {
      Tree::Node& node = tree.nodes_[w.node];
      node.mean = range_mean(range, y);
      node.members_begin = w.lo;
      node.members_end = w.hi;
      continue;
    }

    const std::int32_t mid = w.lo + static_cast<std::int32_t>(split->pos);
    const std::int32_t left_id = static_cast<std::int32_t>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    tree.nodes_.emplace_back();
    Tree::Node& node = tree.nodes_[w.node];
    node.split = split->split;
    node.left = left_id;
    node.right = left_id + 1;
    stack.push_back({left_id, w.lo, mid, w.depth + 1});
    stack.push_back({left_id + 1, mid, w.hi, w.depth + 1});
  }
  return tree;
}

std::size_t Tree::leaf_index(double trend) const {
  std::size_t node = 0;
  while (nodes_[node].left >= 0) {
    node = trend <= nodes_[node].split
               ? static_cast<std::size_t>(nodes_[node].left)
               : static_cast<std::size_t>(nodes_[node].right);
  }
  return node;
}

double Tree::predict(double trend) const {
  return nodes_[leaf_index(trend)].mean;
}

std::span<const int> Tree::leaf_members(double trend) const {
  const Node& leaf = nodes_[leaf_index(trend)];
  return std::span<const int>(
      members_.data() + leaf.members_begin,
      static_cast<std::size_t>(leaf.members_end - leaf.members_begin));
}

}  // namespace albama
