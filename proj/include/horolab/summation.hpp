#pragma once

#include <array>
#include <complex>
#include <cstddef>

namespace horolab {

// Online pairwise summation. Partial sums are merged along a binary
// counter, so the reduction tree depends only on the order and count of
// the pushed terms, never on threading or chunk boundaries. This is the
// deterministic accumulator used by every orbit/quadrature loop.
template <class T>
class PairwiseAccumulator {
  public:
    void add(const T& x) {
        T carry = x;
        std::size_t i = 0;
        std::size_t n = count_ + 1;
        while ((n & 1u) == 0u) {
            carry += levels_[i];
            levels_[i] = T{};
            n >>= 1u;
            ++i;
        }
        levels_[i] = carry;
        ++count_;
    }

    T total() const {
        T s{};
        // Merge low levels first so small partials combine before the
        // large ones.
        for (std::size_t i = 0; i < kLevels; ++i) {
            std::size_t bit = kLevels - 1 - i;
            if (count_ & (std::size_t{1} << bit)) s += levels_[bit];
        }
        return s;
    }

    std::size_t count() const { return count_; }

  private:
    static constexpr std::size_t kLevels = 64;
    std::array<T, kLevels> levels_{};
    std::size_t count_ = 0;
};

using PairwiseReal = PairwiseAccumulator<double>;
using PairwiseComplex = PairwiseAccumulator<std::complex<double>>;

} // namespace horolab
