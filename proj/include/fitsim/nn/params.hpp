#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fitsim::nn {

struct TensorInfo {
    std::string name;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t offset = 0;  // into the flat value vector

    std::size_t size() const { return rows * cols; }
};

// Row-major view into a flat parameter vector.
class MatView {
public:
    MatView(double* data, std::size_t rows, std::size_t cols)
        : data_(data), rows_(rows), cols_(cols) {}

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double* data() { return data_; }
    const double* data() const { return data_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    double* data_;
    std::size_t rows_;
    std::size_t cols_;
};

class ConstMatView {
public:
    ConstMatView(const double* data, std::size_t rows, std::size_t cols)
        : data_(data), rows_(rows), cols_(cols) {}

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const double* data() const { return data_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    const double* data_;
    std::size_t rows_;
    std::size_t cols_;
};

// All parameters of one network as a flat vector with a named tensor layout.
// Gradients share the layout, so elementwise optimizer updates, checkpoints
// and finite-difference sweeps all operate on the same representation.
class ParamVector {
public:
    std::size_t add_tensor(const std::string& name, std::size_t rows, std::size_t cols) {
        TensorInfo info{name, rows, cols, values_.size()};
        values_.resize(values_.size() + rows * cols, 0.0);
        tensors_.push_back(info);
        return tensors_.size() - 1;
    }

    MatView view(std::size_t idx) {
        const TensorInfo& t = tensors_.at(idx);
        return MatView(values_.data() + t.offset, t.rows, t.cols);
    }

    ConstMatView view(std::size_t idx) const {
        const TensorInfo& t = tensors_.at(idx);
        return ConstMatView(values_.data() + t.offset, t.rows, t.cols);
    }

    MatView view(const std::string& name) { return view(index_of(name)); }
    ConstMatView view(const std::string& name) const { return view(index_of(name)); }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < tensors_.size(); ++i) {
            if (tensors_[i].name == name) return i;
        }
        throw std::out_of_range("no tensor named " + name);
    }

    const std::vector<TensorInfo>& tensors() const { return tensors_; }

    std::size_t size() const { return values_.size(); }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    void fill(double value) { values_.assign(values_.size(), value); }

    // Same layout, all values zero.
    ParamVector zeros_like() const {
        ParamVector z = *this;
        z.fill(0.0);
        return z;
    }

    bool same_layout(const ParamVector& other) const {
        if (tensors_.size() != other.tensors_.size()) return false;
        for (std::size_t i = 0; i < tensors_.size(); ++i) {
            const TensorInfo& a = tensors_[i];
            const TensorInfo& b = other.tensors_[i];
            if (a.name != b.name || a.rows != b.rows || a.cols != b.cols) return false;
        }
        return true;
    }

private:
    std::vector<double> values_;
    std::vector<TensorInfo> tensors_;
};

}  // namespace fitsim::nn
