#pragma once

#include "aclab/dist.hpp"
#include "aclab/forms.hpp"

namespace aclab {

// The point/line model of the squared-linear-form event: split the variables
// at floor(m/2); the first half yields lines {y = 2 t1 x + t1^2 - s1 - d},
// the second half points (t2, s2 - t2^2). A point lies on a line exactly
// when (sum b_i x_i)^2 = sum c_i x_i + d.
struct PointLineModel {
    JointDistribution points; // (x, y)
    JointDistribution lines;  // (slope, intercept)
};

PointLineModel build_point_line(std::span<const Rational> b, std::span<const Rational> c, const Rational& d,
                                const AtomDistribution& atom, const EngineConfig& cfg = default_config());

// Exact sum of P(p)P(l) over incident support pairs.
Rational incidence_probability(const PointLineModel& model);

} // namespace aclab
