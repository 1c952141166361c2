#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace hyplap {

/// Addressable binary max-heap over the fixed index set {0, ..., n-1}.
/// Keys are doubles; equal keys rank the smaller index first, so top()
/// is deterministic under ties. Supports O(log n) key updates by index.
class IndexedMaxHeap {
public:
    IndexedMaxHeap() = default;

    explicit IndexedMaxHeap(std::vector<double> keys) { build(std::move(keys)); }

    /// Rebuild the heap from scratch over keys 0..n-1.
    void build(std::vector<double> keys) {
        keys_ = std::move(keys);
        const std::size_t n = keys_.size();
        heap_.resize(n);
        pos_.resize(n);
        for (std::size_t i = 0; i < n; ++i) heap_[i] = i;
        for (std::size_t i = n / 2; i-- > 0;) sift_down(i);
        for (std::size_t h = 0; h < n; ++h) pos_[heap_[h]] = h;
    }

    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }

    /// Index with the largest key (smallest index under ties).
    std::size_t top() const {
        assert(!heap_.empty());
        return heap_[0];
    }

    double top_key() const { return keys_[top()]; }

    double key(std::size_t index) const { return keys_[index]; }

    /// Change the key of one index and restore the heap order.
    void update(std::size_t index, double key) {
        assert(index < keys_.size());
        const double old = keys_[index];
        if (key == old) return;
        keys_[index] = key;
        const std::size_t h = pos_[index];
        if (key > old) {
            sift_up(h);
        } else {
            sift_down(h);
        }
    }

private:
    // true if heap entry holding index a outranks the one holding index b
    bool before(std::size_t a, std::size_t b) const {
        const double ka = keys_[a];
        const double kb = keys_[b];
        if (ka != kb) return ka > kb;
        return a < b;
    }

    void sift_up(std::size_t h) {
        const std::size_t i = heap_[h];
        while (h > 0) {
            const std::size_t parent = (h - 1) / 2;
            if (!before(i, heap_[parent])) break;
            heap_[h] = heap_[parent];
            pos_[heap_[h]] = h;
            h = parent;
        }
        heap_[h] = i;
        pos_[i] = h;
    }

    void sift_down(std::size_t h) {
        const std::size_t n = heap_.size();
        const std::size_t i = heap_[h];
        for (;;) {
            std::size_t child = 2 * h + 1;
            if (child >= n) break;
            if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
            if (!before(heap_[child], i)) break;
            heap_[h] = heap_[child];
            pos_[heap_[h]] = h;
            h = child;
        }
        heap_[h] = i;
        pos_[i] = h;
    }

    std::vector<double> keys_;
    std::vector<std::size_t> heap_; // heap order -> index
    std::vector<std::size_t> pos_;  // index -> heap order
};

} // namespace hyplap
