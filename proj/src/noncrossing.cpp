#include "rtnlab/noncrossing.hpp"

#include <algorithm>
#include <stdexcept>

namespace rtnlab {

BigInt catalan(int k) {
  if (k < 0) throw std::invalid_argument("catalan: negative index");
  BigInt num = 1;
  for (int i = 0; i < k; ++i) num = num * BigInt(2 * k - i);
  BigInt den = 1;
  for (int i = 2; i <= k; ++i) den *= i;
  return num / den / BigInt(k + 1);
}

namespace {

// Recursive construction: the block containing the first element of `points`
// is chosen as an increasing subsequence; the gaps between consecutive block
// members (and after the last) are partitioned independently. This visits
// each non-crossing partition exactly once.
void recurse(std::vector<int>& image, const std::vector<int>& points, size_t lo, size_t hi,
             std::vector<std::pair<size_t, size_t>>& pending,
             const std::function<void(std::vector<int>&)>& emit);

void next_pending(std::vector<int>& image, const std::vector<int>& points,
                  std::vector<std::pair<size_t, size_t>>& pending,
                  const std::function<void(std::vector<int>&)>& emit) {
  if (pending.empty()) {
    emit(image);
    return;
  }
  auto [lo, hi] = pending.back();
  pending.pop_back();
  recurse(image, points, lo, hi, pending, emit);
  pending.emplace_back(lo, hi);
}

void choose_block(std::vector<int>& image, const std::vector<int>& points, size_t prev, size_t hi,
                  int block_start, std::vector<std::pair<size_t, size_t>>& pending,
                  const std::function<void(std::vector<int>&)>& emit) {
  // Close the block: prev is its last member, everything in (prev, hi) is a gap.
  {
    image[points[prev]] = block_start;
    if (prev + 1 < hi) pending.emplace_back(prev + 1, hi);
    next_pending(image, points, pending, emit);
    if (prev + 1 < hi) pending.pop_back();
  }
  // Or extend the block with a later member, leaving a gap in between.
  for (size_t next = prev + 1; next < hi; ++next) {
    image[points[prev]] = points[next];
    if (prev + 1 < next) pending.emplace_back(prev + 1, next);
    choose_block(image, points, next, hi, block_start, pending, emit);
    if (prev + 1 < next) pending.pop_back();
  }
}

void recurse(std::vector<int>& image, const std::vector<int>& points, size_t lo, size_t hi,
             std::vector<std::pair<size_t, size_t>>& pending,
             const std::function<void(std::vector<int>&)>& emit) {
  choose_block(image, points, lo, hi, points[lo], pending, emit);
}

}  // namespace

void for_each_non_crossing(int k, const std::function<void(const Permutation&)>& visit) {
  if (k < 1) throw std::invalid_argument("for_each_non_crossing: k must be >= 1");
  std::vector<int> image(k);
  std::vector<int> points(k);
  for (int i = 0; i < k; ++i) points[i] = i;
  std::vector<std::pair<size_t, size_t>> pending;
  recurse(image, points, 0, static_cast<size_t>(k), pending,
          [&](std::vector<int>& im) { visit(Permutation(im)); });
}

std::vector<Permutation> non_crossing_permutations(int k) {
  if (k > 14) throw std::invalid_argument("non_crossing_permutations: k capped at 14");
  std::vector<Permutation> out;
  out.reserve(static_cast<size_t>(catalan(k).convert_to<long long>()));
  for_each_non_crossing(k, [&](const Permutation& p) { out.push_back(p); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rtnlab
