// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense row-major tensors and the lightweight matrix views the kernels run on.

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "armt/errors.hpp"

namespace armt {

enum class DType : std::uint8_t { F32 = 1, F64 = 2 };

template <typename T>
concept Real = std::is_same_v<T, float> || std::is_same_v<T, double>;

template <Real T>
constexpr DType dtype_of() {
    return std::is_same_v<T, float> ? DType::F32 : DType::F64;
}

std::string to_string(DType dtype);
std::size_t dtype_size(DType dtype);

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_string(const Shape& shape);

template <Real T>
struct ConstMatrixView {
    const T* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    const T* row(std::size_t r) const { return data + r * cols; }
    T operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return rows * cols; }
};

template <Real T>
struct MatrixView {
    T* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    T* row(std::size_t r) const { return data + r * cols; }
    T& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return rows * cols; }

    operator ConstMatrixView<T>() const { return {data, rows, cols}; }
};

/// Owning contiguous row-major tensor of arbitrary rank.
template <Real T>
class Tensor {
public:
    using value_type = T;

    Tensor() = default;
    explicit Tensor(Shape shape, T fill = T{0})
        : shape_(std::move(shape)), data_(shape_numel(shape_), fill) {}
    Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != shape_numel(shape_)) {
            throw DimensionError("tensor data has " + std::to_string(data_.size()) +
                                 " elements, shape " + shape_string(shape_) + " needs " +
                                 std::to_string(shape_numel(shape_)));
        }
    }

    /// 2-D convenience constructor from nested rows.
    static Tensor from_rows(std::initializer_list<std::initializer_list<T>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.begin()->size() : 0;
        std::vector<T> data;
        data.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) {
                throw DimensionError("ragged rows in from_rows");
            }
            data.insert(data.end(), row.begin(), row.end());
        }
        return Tensor({r, c}, std::move(data));
    }

    static Tensor matrix(std::size_t rows, std::size_t cols, T fill = T{0}) {
        return Tensor({rows, cols}, fill);
    }

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t i) const { return shape_.at(i); }
    std::size_t numel() const { return data_.size(); }
    static constexpr DType dtype() { return dtype_of<T>(); }

    std::span<T> data() { return data_; }
    std::span<const T> data() const { return data_; }
    std::vector<T>& storage() { return data_; }
    const std::vector<T>& storage() const { return data_; }

    T& operator[](std::size_t i) { return data_[i]; }
    T operator[](std::size_t i) const { return data_[i]; }

    /// Element access for rank-2 tensors.
    T& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
    T at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }

    std::size_t rows() const { return require_rank2().first; }
    std::size_t cols() const { return require_rank2().second; }

    MatrixView<T> view() {
        auto [r, c] = require_rank2();
        return {data_.data(), r, c};
    }
    ConstMatrixView<T> view() const {
        auto [r, c] = require_rank2();
        return {data_.data(), r, c};
    }

    /// Matrix view of slab `index` along the leading axis of a rank-3 tensor.
    MatrixView<T> slab(std::size_t index) {
        auto [r, c] = slab_dims(index);
        return {data_.data() + index * r * c, r, c};
    }
    ConstMatrixView<T> slab(std::size_t index) const {
        auto [r, c] = slab_dims(index);
        return {data_.data() + index * r * c, r, c};
    }

    bool operator==(const Tensor& other) const = default;

private:
    std::pair<std::size_t, std::size_t> require_rank2() const {
        if (shape_.size() != 2) {
            throw DimensionError("expected a rank-2 tensor, got shape " + shape_string(shape_));
        }
        return {shape_[0], shape_[1]};
    }
    std::pair<std::size_t, std::size_t> slab_dims(std::size_t index) const {
        if (shape_.size() != 3 || index >= shape_[0]) {
            throw DimensionError("slab " + std::to_string(index) + " out of range for shape " +
                                 shape_string(shape_));
        }
        return {shape_[1], shape_[2]};
    }

    Shape shape_;
    std::vector<T> data_;
};

template <Real T>
Tensor<T> to_tensor(ConstMatrixView<T> v) {
    return Tensor<T>({v.rows, v.cols}, std::vector<T>(v.data, v.data + v.size()));
}

template <Real To, Real From>
Tensor<To> cast(const Tensor<From>& t) {
    std::vector<To> out(t.numel());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<To>(t[i]);
    }
    return Tensor<To>(t.shape(), std::move(out));
}

/// Bitwise comparison, so that -0.0 != 0.0 and identical NaN payloads compare equal.
template <Real T>
bool bitwise_equal(std::span<const T> a, std::span<const T> b);

template <Real T>
bool bitwise_equal(const Tensor<T>& a, const Tensor<T>& b) {
    return a.shape() == b.shape() && bitwise_equal<T>(a.data(), b.data());
}

template <Real T>
bool all_finite(std::span<const T> values);

/// One contiguous allocation split into `group_size` equal member slices.
template <Real T>
class GroupedBuffer {
public:
    GroupedBuffer() = default;
    GroupedBuffer(std::size_t group_size, Shape member_shape)
        : group_size_(group_size),
          member_shape_(std::move(member_shape)),
          member_numel_(shape_numel(member_shape_)),
          backing_(group_size_ * member_numel_, T{0}) {}

    std::size_t group_size() const { return group_size_; }
    const Shape& member_shape() const { return member_shape_; }
    std::size_t member_numel() const { return member_numel_; }
    std::size_t offset(std::size_t g) const { return g * member_numel_; }

    std::span<T> slice(std::size_t g) { return {backing_.data() + offset(checked(g)), member_numel_}; }
    std::span<const T> slice(std::size_t g) const {
        return {backing_.data() + offset(checked(g)), member_numel_};
    }

    /// Member slice viewed as a matrix; member shape must be rank 2.
    MatrixView<T> matrix(std::size_t g) {
        require_matrix_members();
        return {backing_.data() + offset(checked(g)), member_shape_[0], member_shape_[1]};
    }
    ConstMatrixView<T> matrix(std::size_t g) const {
        require_matrix_members();
        return {backing_.data() + offset(checked(g)), member_shape_[0], member_shape_[1]};
    }

    std::span<T> backing() { return backing_; }
    std::span<const T> backing() const { return backing_; }

private:
    std::size_t checked(std::size_t g) const {
        if (g >= group_size_) {
            throw DimensionError("group slice " + std::to_string(g) + " out of range (G=" +
                                 std::to_string(group_size_) + ")");
        }
        return g;
    }
    void require_matrix_members() const {
        if (member_shape_.size() != 2) {
            throw DimensionError("grouped buffer members are not matrices: " +
                                 shape_string(member_shape_));
        }
    }

    std::size_t group_size_ = 0;
    Shape member_shape_;
    std::size_t member_numel_ = 0;
    std::vector<T> backing_;
};

}  // namespace armt
