#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace dysonclt {

// A finite subset B of {1,2,...}, kept strictly increasing.
struct IndexSet {
    std::vector<int> elements;

    static IndexSet prefix(int n) {
        if (n < 1) throw std::invalid_argument("prefix size must be >= 1");
        IndexSet b;
        b.elements.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) b.elements[static_cast<std::size_t>(i)] = i + 1;
        return b;
    }

    // Accepts any presentation order; canonicalizes to sorted and rejects
    // duplicates or non-positive indices.
    static IndexSet from(std::vector<int> v) {
        if (v.empty()) throw std::invalid_argument("index set must be nonempty");
        std::sort(v.begin(), v.end());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 1) throw std::invalid_argument("indices must be positive");
            if (i > 0 && v[i] == v[i - 1]) throw std::invalid_argument("duplicate index");
        }
        IndexSet b;
        b.elements = std::move(v);
        return b;
    }

    int size() const { return static_cast<int>(elements.size()); }
    int max_element() const { return elements.back(); }
};

struct OverlapFractions {
    double b_p = 0.0;
    double b_q = 0.0;
    double b_pq = 0.0;
};

// (|B_p|/L, |B_q|/L, |B_p n B_q|/L), computed exactly from the finite sets.
inline OverlapFractions overlap_fraction(const IndexSet& bp, const IndexSet& bq, double L) {
    if (!(L > 0.0)) throw std::invalid_argument("L must be positive");
    std::size_t i = 0, j = 0, common = 0;
    while (i < bp.elements.size() && j < bq.elements.size()) {
        if (bp.elements[i] == bq.elements[j]) {
            ++common;
            ++i;
            ++j;
        } else if (bp.elements[i] < bq.elements[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return {bp.size() / L, bq.size() / L, static_cast<double>(common) / L};
}

}  // namespace dysonclt
