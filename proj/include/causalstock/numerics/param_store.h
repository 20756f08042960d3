#pragma once

#include "causalstock/error.h"
#include "causalstock/numerics/tensor.h"

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace causalstock::numerics {

// Named trainable arrays with matching gradient and Adam moment buffers.
// Registration order is the iteration order everywhere (checkpoints, audits).
template <typename T>
class ParamStore {
public:
    using Id = std::size_t;

    Id add(std::string name, Mat<T> init) {
        if (index_.count(name) != 0) {
            throw ConfigError("duplicate parameter name '" + name + "'");
        }
        const Id id = entries_.size();
        Entry e;
        e.name = name;
        e.grad = Mat<T>::Zero(init.rows(), init.cols());
        e.m = Mat<T>::Zero(init.rows(), init.cols());
        e.v = Mat<T>::Zero(init.rows(), init.cols());
        e.value = std::move(init);
        entries_.push_back(std::move(e));
        index_.emplace(std::move(name), id);
        return id;
    }

    bool contains(std::string_view name) const { return index_.find(std::string(name)) != index_.end(); }

    Id id(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) {
            throw ConfigError("unknown parameter '" + std::string(name) + "'");
        }
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }
    const std::string& name(Id id) const { return entries_.at(id).name; }

    Mat<T>& value(Id id) { return entries_.at(id).value; }
    const Mat<T>& value(Id id) const { return entries_.at(id).value; }
    Mat<T>& value(std::string_view n) { return value(id(n)); }
    const Mat<T>& value(std::string_view n) const { return value(id(n)); }

    Mat<T>& grad(Id id) { return entries_.at(id).grad; }
    const Mat<T>& grad(Id id) const { return entries_.at(id).grad; }
    const Mat<T>& grad(std::string_view n) const { return grad(id(n)); }

    Mat<T>& first_moment(Id id) { return entries_.at(id).m; }
    const Mat<T>& first_moment(Id id) const { return entries_.at(id).m; }
    Mat<T>& second_moment(Id id) { return entries_.at(id).v; }
    const Mat<T>& second_moment(Id id) const { return entries_.at(id).v; }

    // Number of optimizer steps taken so far.
    long& step() { return step_; }
    long step() const { return step_; }

    void zero_grad() {
        for (auto& e : entries_) e.grad.setZero();
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& e : entries_) n += static_cast<std::size_t>(e.value.size());
        return n;
    }

    template <typename U>
    ParamStore<U> cast() const {
        ParamStore<U> out;
        for (Id i = 0; i < entries_.size(); ++i) {
            const Id j = out.add(entries_[i].name, entries_[i].value.template cast<U>());
            out.first_moment(j) = entries_[i].m.template cast<U>();
            out.second_moment(j) = entries_[i].v.template cast<U>();
        }
        out.step() = step_;
        return out;
    }

private:
    struct Entry {
        std::string name;
        Mat<T> value;
        Mat<T> grad;
        Mat<T> m;
        Mat<T> v;
    };

    std::vector<Entry> entries_;
    std::map<std::string, Id> index_;
    long step_ = 0;
};

}  // namespace causalstock::numerics
