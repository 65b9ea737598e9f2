#include "dtcoin/orra/replay.hpp"

#include <numeric>
#include <random>

namespace dtcoin::orra {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw Error(Errc::kConfig, "replay capacity must be >= 1");
  data_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[head_] = std::move(t);
  }
  head_ = (head_ + 1) % capacity_;
  size_ = data_.size();
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw Error(Errc::kIndexOutOfRange, "replay index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : head_;
  return data_[(oldest + i) % capacity_];
}

std::vector<std::size_t> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  n = std::min(n, size_);
  std::vector<std::size_t> idx(size_);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, size_ - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  return idx;
}

void ReplayBuffer::clear() {
  data_.clear();
  head_ = 0;
  size_ = 0;
}

}  // namespace dtcoin::orra
