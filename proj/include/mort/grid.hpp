#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace mort {

/// Row-major 2D grid of values. (x, y) indexing with y growing downward,
/// matching image coordinates throughout the library.
template <typename T>
class grid {
public:
    grid() = default;
    grid(int width, int height, T fill = T{})
        : width_(width), height_(height), cells_(static_cast<size_t>(width) * height, fill) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    size_t size() const noexcept { return cells_.size(); }
    bool empty() const noexcept { return cells_.empty(); }

    bool in_bounds(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    T& at(int x, int y) {
        assert(in_bounds(x, y));
        return cells_[static_cast<size_t>(y) * width_ + x];
    }
    const T& at(int x, int y) const {
        assert(in_bounds(x, y));
        return cells_[static_cast<size_t>(y) * width_ + x];
    }

    T* data() noexcept { return cells_.data(); }
    const T* data() const noexcept { return cells_.data(); }

    auto begin() { return cells_.begin(); }
    auto end() { return cells_.end(); }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

    friend bool operator==(const grid& a, const grid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.cells_ == b.cells_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> cells_;
};

using mask_grid = grid<uint8_t>;
using gray_grid = grid<uint8_t>;
using label_grid = grid<int32_t>;
using field_grid = grid<double>;

/// Dense row-major matrix, (row, col) indexed. Used for MORT coefficient and
/// descriptor matrices.
class matrix {
public:
    matrix() = default;
    matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), cells_(static_cast<size_t>(rows) * cols, fill) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& at(int r, int c) {
        assert(r >= 0 && c >= 0 && r < rows_ && c < cols_);
        return cells_[static_cast<size_t>(r) * cols_ + c];
    }
    double at(int r, int c) const {
        assert(r >= 0 && c >= 0 && r < rows_ && c < cols_);
        return cells_[static_cast<size_t>(r) * cols_ + c];
    }

    const double* row(int r) const { return cells_.data() + static_cast<size_t>(r) * cols_; }
    double* row(int r) { return cells_.data() + static_cast<size_t>(r) * cols_; }

    const std::vector<double>& cells() const noexcept { return cells_; }

    friend bool operator==(const matrix& a, const matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cells_ == b.cells_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> cells_;
};

} // namespace mort
