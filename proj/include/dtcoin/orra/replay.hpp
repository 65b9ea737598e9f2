#pragma once

#include <vector>

#include "dtcoin/common.hpp"

namespace dtcoin::orra {

struct Transition {
  std::vector<double> state;
  std::vector<int> action;  // one grid index per branch
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

// FIFO ring buffer with uniform sampling without replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 10000);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  void push(Transition t);
  // i = 0 is the oldest stored transition.
  const Transition& at(std::size_t i) const;
  // min(n, size()) distinct indices (in at() numbering).
  std::vector<std::size_t> sample(std::size_t n, Rng& rng) const;
  void clear();

 private:
  std::size_t capacity_;
  std::vector<Transition> data_;
  std::size_t head_ = 0;  // next write slot
  std::size_t size_ = 0;
};

}  // namespace dtcoin::orra
