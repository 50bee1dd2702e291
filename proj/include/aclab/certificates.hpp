#pragma once

#include <cstddef>
#include <vector>

#include "aclab/rational.hpp"

namespace aclab {

// Shortest arithmetic progression through 0 covering a value family:
// progression = { j*d : min_index <= j <= max_index }, 0 in range.
// length R = max_index - min_index (step count, not term count).
struct APCertificate {
    Rational difference;
    long min_index = 0;
    long max_index = 0;
    std::vector<std::size_t> covered;     // 0-based indices into the input
    std::vector<std::size_t> exceptional; // always empty for exact fits

    long length() const { return max_index - min_index; }
};

// a_i = dilate * coords_i with integer coords, |coords_i| <= bound, for all
// indices outside `exceptional`.
struct GAPCertificate {
    GaussianRational dilate;
    std::vector<Int> coords; // aligned with the input; meaningful off `exceptional`
    Int bound;
    std::vector<std::size_t> exceptional;
};

// Block rows x cols on which the matrix factors exactly as u_i * v_j.
struct RankOneCertificate {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    std::vector<GaussianRational> u; // aligned with rows
    std::vector<GaussianRational> v; // aligned with cols
};

// Per-tuple structure: v1 agrees with d_j * v_j off the disagreement set S_j.
struct TupleStructure {
    std::vector<GaussianRational> ratios;              // d_2..d_k (index 0 = d_2)
    std::vector<std::vector<std::size_t>> diff_sets;   // S_2..S_k
    std::size_t score = 0;       // #{j : S_j not contained in union of earlier S_i}
    Int product_metric = 1;      // prod |S_j \ union_{i<j} S_i|_1, |S|_1 = 1 if empty else min(|S|,4)
};

} // namespace aclab
