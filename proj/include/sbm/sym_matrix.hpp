#pragma once

#include <stdexcept>
#include <vector>

namespace sbm {

// Small dense symmetric matrix; writes through set() keep both triangles in
// step. Block removal uses swap-with-last so it mirrors label compaction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int k, double fill = 0.0)
      : k_(k), data_(static_cast<std::size_t>(k) * k, fill) {
    if (k < 0) throw std::invalid_argument("matrix dimension must be nonnegative");
  }

  int dim() const { return k_; }

  double operator()(int a, int b) const { return data_[static_cast<std::size_t>(a) * k_ + b]; }

  void set(int a, int b, double v) {
    data_[static_cast<std::size_t>(a) * k_ + b] = v;
    data_[static_cast<std::size_t>(b) * k_ + a] = v;
  }

  void append_block(double fill = 0.0) {
    SymMatrix next(k_ + 1, fill);
    for (int a = 0; a < k_; ++a)
      for (int b = 0; b < k_; ++b) next.data_[static_cast<std::size_t>(a) * (k_ + 1) + b] = (*this)(a, b);
    *this = std::move(next);
  }

  void remove_block_swap_last(int a) {
    if (a < 0 || a >= k_) throw std::invalid_argument("block index out of range");
    const int last = k_ - 1;
    SymMatrix next(k_ - 1);
    const auto src = [&](int x) { return x == a ? last : x; };
    for (int x = 0; x < k_ - 1; ++x)
      for (int y = x; y < k_ - 1; ++y) next.set(x, y, (*this)(src(x), src(y)));
    *this = std::move(next);
  }

  bool operator==(const SymMatrix& other) const = default;

 private:
  int k_ = 0;
  std::vector<double> data_;
};

}  // namespace sbm
