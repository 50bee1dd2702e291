#include "aclab/incidence.hpp"

namespace aclab {

PointLineModel build_point_line(std::span<const Rational> b, std::span<const Rational> c, const Rational& d,
                                const AtomDistribution& atom, const EngineConfig& cfg) {
    const std::size_t m = b.size();
    if (m < 2) raise(Errc::InvalidArgument, "build_point_line: need m >= 2");
    for (const Rational& bi : b) {
        if (bi.is_zero()) raise(Errc::InvalidCoefficient, "build_point_line: all b_i must be nonzero");
    }
    if (c.size() > m) raise(Errc::InvalidArgument, "build_point_line: linear part longer than b");
    const std::size_t half = m / 2;

    auto slice = [&](std::span<const Rational> v, std::size_t from, std::size_t to) {
        std::vector<GaussianRational> out;
        out.reserve(to - from);
        for (std::size_t i = from; i < to; ++i) out.emplace_back(i < v.size() ? v[i] : Rational(0));
        return out;
    };

    // first half: (t1, s1) -> lines; second half: (t2, s2) -> points
    std::vector<LinearForm> first{LinearForm(slice(b, 0, half), atom), LinearForm(slice(c, 0, half), atom)};
    std::vector<LinearForm> second{LinearForm(slice(b, half, m), atom), LinearForm(slice(c, half, m), atom)};
    const JointDistribution first_law = joint_distribution(first, cfg);
    const JointDistribution second_law = joint_distribution(second, cfg);

    JointDistribution::Support lines;
    for (const auto& [ts, p] : first_law.support()) {
        const GaussianRational& t1 = ts[0];
        const GaussianRational& s1 = ts[1];
        // intercept t1^2 - s1 - d so that incidence matches the squared event
        std::vector<GaussianRational> line{GaussianRational(Rational(2)) * t1,
                                           t1 * t1 - s1 - GaussianRational(d)};
        lines[std::move(line)] += p;
    }
    JointDistribution::Support points;
    for (const auto& [ts, p] : second_law.support()) {
        const GaussianRational& t2 = ts[0];
        const GaussianRational& s2 = ts[1];
        std::vector<GaussianRational> point{t2, s2 - t2 * t2};
        points[std::move(point)] += p;
    }
    return PointLineModel{JointDistribution(std::move(points)), JointDistribution(std::move(lines))};
}

Rational incidence_probability(const PointLineModel& model) {
    Rational acc(0);
    for (const auto& [pt, pp] : model.points.support()) {
        for (const auto& [ln, pl] : model.lines.support()) {
            if (pt[1] == ln[0] * pt[0] + ln[1]) acc += pp * pl;
        }
    }
    return acc;
}

} // namespace aclab
