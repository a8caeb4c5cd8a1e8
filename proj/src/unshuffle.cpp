#include "ovc/unshuffle.hpp"

namespace ovc {

std::vector<PartitionWord> all_partition_words(int max_size, int max_letters) {
  std::vector<std::vector<NCPartition>> by_size;
  for (int s = 0; s <= max_size; ++s) by_size.push_back(enumerate_nc(s));
  std::vector<PartitionWord> out;
  std::vector<PartitionWord> frontier{PartitionWord{}};
  for (int len = 1; len <= max_letters; ++len) {
    std::vector<PartitionWord> next;
    for (const auto& w : frontier) {
      for (int s = 0; s + w.total_size() <= max_size; ++s) {
        for (const auto& p : by_size[static_cast<std::size_t>(s)]) {
          auto x = w;
          x.letters.push_back(p);
          next.push_back(std::move(x));
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace ovc
