#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace plnmf {

using index_t = std::int64_t;

struct ConstMatrixView {
    const double* data = nullptr;
    index_t rows = 0;
    index_t cols = 0;
    index_t stride = 0;

    const double& operator()(index_t r, index_t c) const { return data[r + c * stride]; }
    const double* col(index_t c) const { return data + c * stride; }
};

struct MatrixView {
    double* data = nullptr;
    index_t rows = 0;
    index_t cols = 0;
    index_t stride = 0;

    double& operator()(index_t r, index_t c) const { return data[r + c * stride]; }
    double* col(index_t c) const { return data + c * stride; }
    operator ConstMatrixView() const { return ConstMatrixView{data, rows, cols, stride}; }
};

// Column-major dense matrix: element (r, c) lives at data[r + c*rows], so any
// column panel [c0, c1) is one contiguous block.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(index_t rows, index_t cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
    }

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    index_t size() const { return rows_ * cols_; }

    double& operator()(index_t r, index_t c) { return data_[r + c * rows_]; }
    const double& operator()(index_t r, index_t c) const { return data_[r + c * rows_]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* col(index_t c) { return data_.data() + c * rows_; }
    const double* col(index_t c) const { return data_.data() + c * rows_; }

    void set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

    MatrixView view() { return {data(), rows_, cols_, rows_}; }
    ConstMatrixView view() const { return {data(), rows_, cols_, rows_}; }

    // Contiguous alias of columns [c0, c1); O(1), never copies.
    MatrixView col_panel(index_t c0, index_t c1) {
        check_cols(c0, c1);
        return {col(c0), rows_, c1 - c0, rows_};
    }
    ConstMatrixView col_panel(index_t c0, index_t c1) const {
        check_cols(c0, c1);
        return {col(c0), rows_, c1 - c0, rows_};
    }

    MatrixView block(index_t r0, index_t r1, index_t c0, index_t c1) {
        check_block(r0, r1, c0, c1);
        return {data() + r0 + c0 * rows_, r1 - r0, c1 - c0, rows_};
    }
    ConstMatrixView block(index_t r0, index_t r1, index_t c0, index_t c1) const {
        check_block(r0, r1, c0, c1);
        return {data() + r0 + c0 * rows_, r1 - r0, c1 - c0, rows_};
    }

    void swap(DenseMatrix& other) noexcept {
        std::swap(rows_, other.rows_);
        std::swap(cols_, other.cols_);
        data_.swap(other.data_);
    }

    bool operator==(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

private:
    void check_cols(index_t c0, index_t c1) const {
        if (c0 < 0 || c0 > c1 || c1 > cols_) throw std::invalid_argument("DenseMatrix: column range out of bounds");
    }
    void check_block(index_t r0, index_t r1, index_t c0, index_t c1) const {
        check_cols(c0, c1);
        if (r0 < 0 || r0 > r1 || r1 > rows_) throw std::invalid_argument("DenseMatrix: row range out of bounds");
    }

    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace plnmf
