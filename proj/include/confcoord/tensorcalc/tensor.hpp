#pragma once

#include <cstddef>
#include <vector>

namespace confcoord::tensorcalc {

/// Dense rank-r array over n indices, each in 0..n-1, stored row-major.
template <class T>
class Tensor {
public:
    Tensor() = default;
    Tensor(int dim, int rank, const T& fill = T{}) : dim_(dim), rank_(rank)
    {
        std::size_t size = 1;
        for (int r = 0; r < rank; ++r)
            size *= static_cast<std::size_t>(dim);
        data_.assign(size, fill);
    }

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    std::size_t size() const { return data_.size(); }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    template <class... I>
    T& operator()(I... idx)
    {
        return data_[flat(idx...)];
    }
    template <class... I>
    const T& operator()(I... idx) const
    {
        return data_[flat(idx...)];
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    /// Decodes a flat position into its index tuple.
    void unflatten(std::size_t pos, int* idx) const
    {
        for (int r = rank_ - 1; r >= 0; --r) {
            idx[r] = static_cast<int>(pos % dim_);
            pos /= dim_;
        }
    }

private:
    template <class... I>
    std::size_t flat(I... idx) const
    {
        std::size_t pos = 0;
        ((pos = pos * dim_ + static_cast<std::size_t>(idx)), ...);
        return pos;
    }

    int dim_ = 0;
    int rank_ = 0;
    std::vector<T> data_;
};

} // namespace confcoord::tensorcalc
