#pragma once

#include <vector>

namespace uagraph {

template <class Fn>
void for_each_multiset(const std::vector<double>& weights, int k, Fn&& fn) {
  const int n = static_cast<int>(weights.size());
  if (k == 0) {
    fn(std::vector<int>{}, 1.0);
    return;
  }
  if (n == 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  for (;;) {
    // multinomial coefficient k! / prod(mult!) times prod w
    double prob = 1.0;
    int run = 0;
    for (int i = 0; i < k; ++i) {
      run = (i > 0 && idx[i] == idx[i - 1]) ? run + 1 : 1;
      prob *= weights[idx[i]] * (i + 1) / run;
    }
    fn(idx, prob);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - 1) --pos;
    if (pos < 0) return;
    const int v = idx[pos] + 1;
    for (int i = pos; i < k; ++i) idx[i] = v;
  }
}

}  // namespace uagraph
