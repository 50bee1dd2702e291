#include "aclab/decouple.hpp"

#include <algorithm>
#include <cmath>

#include "aclab/rng.hpp"
#include "engine_detail.hpp"

namespace aclab {

using namespace detail;

Partition Partition::from_y(std::size_t n, std::vector<std::size_t> y_indices) {
    std::sort(y_indices.begin(), y_indices.end());
    if (std::adjacent_find(y_indices.begin(), y_indices.end()) != y_indices.end())
        raise(Errc::InvalidArgument, "partition: duplicate index in Y");
    for (std::size_t i : y_indices) {
        if (i >= n) raise(Errc::InvalidArgument, "partition: index out of range");
    }
    Partition p;
    p.y = std::move(y_indices);
    std::vector<bool> in_y(n, false);
    for (std::size_t i : p.y) in_y[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_y[i]) p.z.push_back(i);
    }
    if (!(p.y.size() == p.z.size() || p.y.size() == p.z.size() + 1))
        raise(Errc::InvalidArgument, "partition: |Y| must be |Z| or |Z|+1");
    return p;
}

// ---------------------------------------------------------------------------
// decoupling check

namespace {

// Per-assignment integer weights in odometer order, plus the total.
std::pair<std::vector<Int>, Int> assignment_weights(std::span<const AtomDistribution> atoms,
                                                    const EngineConfig& cfg) {
    AssignmentEnumerator space(atoms, cfg);
    std::vector<Int> weights;
    weights.reserve(space.count());
    space.for_each([&](std::span<const std::uint8_t>, const Int& w) { weights.push_back(w); });
    return {std::move(weights), space.total_weight()};
}

} // namespace

DecouplingCheckResult decoupling_check(const std::vector<std::vector<bool>>& table,
                                       std::span<const AtomDistribution> y_atoms,
                                       std::span<const AtomDistribution> z_atoms, const EngineConfig& cfg) {
    auto [wy, ty] = assignment_weights(y_atoms, cfg);
    auto [wz, tz] = assignment_weights(z_atoms, cfg);
    if (table.size() != wy.size()) raise(Errc::InvalidArgument, "decoupling_check: table row count mismatch");
    Int p_weight(0);  // sum_y wy * S_y    (at scale ty*tz)
    Int pp_weight(0); // sum_y wy * S_y^2  (at scale ty*tz^2)
    for (std::size_t yi = 0; yi < wy.size(); ++yi) {
        if (table[yi].size() != wz.size()) raise(Errc::InvalidArgument, "decoupling_check: table column mismatch");
        Int sy(0);
        for (std::size_t zi = 0; zi < wz.size(); ++zi) {
            if (table[yi][zi]) sy += wz[zi];
        }
        p_weight += wy[yi] * sy;
        pp_weight += wy[yi] * sy * sy;
    }
    DecouplingCheckResult out;
    const Rational p_event(p_weight, ty * tz);
    out.lhs = p_event * p_event;
    out.rhs = Rational(pp_weight, ty * tz * tz);
    out.holds = out.lhs <= out.rhs;
    return out;
}

bool is_balanced(const QuadraticForm& form, const Partition& p, std::size_t r) {
    for (std::size_t i : p.y) {
        std::size_t nz = 0;
        for (std::size_t j : p.z) {
            if (!form.at(i, j).is_zero()) ++nz;
        }
        if (nz < r) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// shattering

std::optional<std::array<std::size_t, 4>> shatter_verify(std::size_t n, const PartitionFamily& family) {
    if (n < 4) raise(Errc::InvalidArgument, "shatter_verify: need n >= 4");
    if (n > 64) raise(Errc::BudgetExceeded, "shatter_verify: n > 64 not supported");
    std::vector<std::uint64_t> ymasks, zmasks;
    for (const auto& p : family.partitions) {
        std::uint64_t ym = 0, zm = 0;
        for (std::size_t i : p.y) ym |= std::uint64_t(1) << i;
        for (std::size_t i : p.z) zm |= std::uint64_t(1) << i;
        ymasks.push_back(ym);
        zmasks.push_back(zm);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::uint64_t pair_y = (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                for (std::size_t l = k + 1; l < n; ++l) {
                    if (l == i || l == j) continue;
                    const std::uint64_t pair_z = (std::uint64_t(1) << k) | (std::uint64_t(1) << l);
                    bool covered = false;
                    for (std::size_t s = 0; s < ymasks.size(); ++s) {
                        if ((ymasks[s] & pair_y) == pair_y && (zmasks[s] & pair_z) == pair_z) {
                            covered = true;
                            break;
                        }
                    }
                    if (!covered) return std::array<std::size_t, 4>{i, j, k, l};
                }
            }
        }
    }
    return std::nullopt;
}

std::size_t shatter_family_size(std::size_t n) {
    if (n < 2) raise(Errc::InvalidArgument, "shatter_family_size: n must be >= 2");
    return static_cast<std::size_t>(
        std::ceil(5.0 * std::log(static_cast<double>(n)) / std::log(17.0 / 16.0)));
}

namespace {

Partition random_equal_split(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    const std::size_t ysize = (n + 1) / 2;
    return Partition::from_y(n, std::vector<std::size_t>(perm.begin(), perm.begin() + ysize));
}

PartitionFamily exhaustive_family(std::size_t n) {
    PartitionFamily family;
    family.n = n;
    const std::size_t ysize = (n + 1) / 2;
    std::vector<std::size_t> pick(ysize);
    for (std::size_t i = 0; i < ysize; ++i) pick[i] = i;
    for (;;) {
        family.partitions.push_back(Partition::from_y(n, pick));
        // next lexicographic combination
        std::size_t i = ysize;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (pick[i] + (ysize - i) < n) {
                ++pick[i];
                for (std::size_t j = i + 1; j < ysize; ++j) pick[j] = pick[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced) break;
    }
    return family;
}

} // namespace

PartitionFamily shatter_build(const QuadraticForm& form, std::size_t r, std::uint64_t seed,
                              std::size_t max_attempts) {
    const std::size_t n = form.size();
    if (n < 4) raise(Errc::InvalidArgument, "shatter_build: need n >= 4");
    if (n < 8) {
        // fewer distinct splits than the sampled-size bound; use them all
        PartitionFamily family = exhaustive_family(n);
        for (const auto& p : family.partitions) {
            if (!is_balanced(form, p, r))
                raise(Errc::ShatterFailure,
                      "shatter_build: exhaustive family is not balanced for r=" + std::to_string(r));
        }
        if (shatter_verify(n, family))
            raise(Errc::ShatterFailure, "shatter_build: exhaustive family fails to shatter");
        return family;
    }
    const std::size_t fam_size = shatter_family_size(n);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(derive_seed(seed, "shatter-attempt", attempt));
        PartitionFamily family;
        family.n = n;
        family.partitions.reserve(fam_size);
        bool balanced = true;
        for (std::size_t s = 0; s < fam_size; ++s) {
            family.partitions.push_back(random_equal_split(n, rng));
            if (!is_balanced(form, family.partitions.back(), r)) {
                balanced = false;
                break;
            }
        }
        if (!balanced) continue;
        if (!shatter_verify(n, family)) return family;
    }
    raise(Errc::ShatterFailure, "shatter_build: no balanced shattering family within " +
                                    std::to_string(max_attempts) + " attempts (n=" + std::to_string(n) +
                                    ", r=" + std::to_string(r) + ")");
}

// ---------------------------------------------------------------------------
// quadratic-to-bilinear reduction

namespace {

AtomDistribution difference_atom_of(const AtomDistribution& atom) {
    std::map<GaussianRational, Rational> law;
    for (std::size_t i = 0; i < atom.size(); ++i) {
        for (std::size_t j = 0; j < atom.size(); ++j) {
            law[atom.values()[i] - atom.values()[j]] += atom.probs()[i] * atom.probs()[j];
        }
    }
    std::vector<std::pair<GaussianRational, Rational>> entries(law.begin(), law.end());
    return AtomDistribution::finite_support(std::move(entries));
}

} // namespace

QuadToBilinear quad_to_bilinear(const QuadraticForm& form, const Partition& p) {
    if (p.y.size() + p.z.size() != form.size()) raise(Errc::InvalidArgument, "quad_to_bilinear: partition mismatch");
    if (p.z.empty()) raise(Errc::InvalidArgument, "quad_to_bilinear: Z side is empty");
    std::vector<GaussianRational> entries;
    entries.reserve(p.y.size() * p.z.size());
    const GaussianRational two{Rational(2)};
    for (std::size_t i : p.y) {
        for (std::size_t j : p.z) entries.push_back(two * form.at(i, j));
    }
    AtomDistribution diff = difference_atom_of(form.atom());
    if (form.atom().kind() == AtomDistribution::Kind::Rademacher) {
        // difference of independent Rademachers: {0: 1/2, +-2: 1/4}
        const AtomDistribution expected =
            AtomDistribution::finite_support({{GaussianRational(-2), Rational(1, 4)},
                                              {GaussianRational(0), Rational(1, 2)},
                                              {GaussianRational(2), Rational(1, 4)}});
        if (!(diff == expected)) raise(Errc::Internal, "quad_to_bilinear: difference law mismatch");
    }
    return QuadToBilinear{
        BilinearForm(p.y.size(), p.z.size(), std::move(entries), form.atom(), diff),
        diff,
        "y-side variables are differences z_j - z_j' of independent copies; the decoupled event's "
        "right-hand side depends on (z, z'), see decoupled_event_probability"};
}

// ---------------------------------------------------------------------------
// decoupled event probability

namespace {

struct DecoupleScaled {
    std::vector<GInt> a;  // n*n at scale Ld
    std::vector<GInt> l;  // n at scale Ld
    std::vector<GInt> xv; // atom values at scale Lx
    std::vector<std::int64_t> w;
    std::int64_t lx = 1;
};

// Bound checks mirror the quadratic engine: g_y(z) values stay within the
// component cap and the weight accumulator TY * TZ^2 fits int64 headroom.
std::optional<DecoupleScaled> try_scale_decouple(const QuadraticForm& form, std::size_t y_vars,
                                                 std::size_t z_vars) {
    DecoupleScaled out;
    std::vector<GaussianRational> all = form.entries();
    all.insert(all.end(), form.linear().begin(), form.linear().end());
    const Int Ld = lcm_denominators(all);
    const Int Lx = lcm_denominators(form.atom().values());
    if (!Lx.fits_slong_p()) return std::nullopt;

    const std::size_t n = form.size();
    Int mu_x(0);
    for (const auto& v : form.atom().values()) mu_x = std::max(mu_x, scaled_component_norm(v, Lx));
    if (!fits_component(mu_x)) return std::nullopt;
    Int bound(0);
    for (std::size_t i = 0; i < n; ++i) {
        Int row(0); // covers both u_j = 2 sum_i a_ij y_i and the A_ZZ row sums
        for (std::size_t j = 0; j < n; ++j) row += Int(4) * scaled_component_norm(form.at(i, j), Ld) * mu_x;
        if (!fits_component(row)) return std::nullopt;
        bound += Int(4) * row * mu_x; // u-term (2 row mu) plus quadratic term (row mu), with slack
        bound += Int(2) * Lx * scaled_component_norm(form.linear()[i], Ld) * mu_x;
    }
    if (!fits_component(bound)) return std::nullopt;
    Int weight_bound(1);
    const Int cap = Int(1) << 62;
    for (std::size_t i = 0; i < y_vars + 2 * z_vars; ++i) {
        weight_bound *= form.atom().weight_total();
        if (weight_bound > cap) return std::nullopt;
    }

    out.a.resize(n * n);
    for (std::size_t i = 0; i < n * n; ++i) out.a[i] = scale_to_gint(form.entries()[i], Ld);
    out.l.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.l[i] = scale_to_gint(form.linear()[i], Ld);
    for (const auto& v : form.atom().values()) out.xv.push_back(scale_to_gint(v, Lx));
    for (const Int& w : form.atom().weights()) out.w.push_back(w.get_si());
    out.lx = Lx.get_si();
    return out;
}

} // namespace

Rational decoupled_event_probability(const QuadraticForm& form, const Partition& p, const EngineConfig& cfg) {
    if (p.y.size() + p.z.size() != form.size())
        raise(Errc::InvalidArgument, "decoupled_event_probability: partition mismatch");
    if (p.y.empty() || p.z.empty())
        raise(Errc::InvalidArgument, "decoupled_event_probability: both sides must be nonempty");
    const AtomDistribution& atom = form.atom();
    const std::size_t s = atom.size();
    const std::size_t ny = p.y.size();
    const std::size_t nz = p.z.size();
    checked_assignment_count(s, ny + 2 * nz, cfg.enum_cap);
    const std::size_t y_count = checked_assignment_count(s, ny, cfg.enum_cap);
    const std::size_t z_count = checked_assignment_count(s, nz, cfg.enum_cap);

    Int ty(1), tz(1);
    for (std::size_t i = 0; i < ny; ++i) ty *= atom.weight_total();
    for (std::size_t j = 0; j < nz; ++j) tz *= atom.weight_total();

    std::optional<DecoupleScaled> scaled;
    if (!cfg.force_generic) scaled = try_scale_decouple(form, ny, nz);

    if (scaled) {
        Int acc(0);
        std::vector<std::uint8_t> yidx(ny, 0);
        std::int64_t wy = 1;
        for (std::size_t i = 0; i < ny; ++i) wy *= scaled->w[0];
        I64Map law;
        for (std::size_t ylin = 0; ylin < y_count; ++ylin) {
            // u_j = 2 sum_{i in Y} a[y_i][z_j] yval_i, at scale Ld*Lx
            std::vector<GInt> u(nz);
            for (std::size_t jz = 0; jz < nz; ++jz) {
                GInt acc_j{};
                for (std::size_t iy = 0; iy < ny; ++iy) {
                    acc_j = acc_j + mul(scaled->a[p.y[iy] * form.size() + p.z[jz]], scaled->xv[yidx[iy]]);
                }
                u[jz] = {2 * acc_j.re, 2 * acc_j.im};
            }
            law.clear();
            std::vector<std::uint8_t> zidx(nz, 0);
            std::int64_t wz = 1;
            for (std::size_t j = 0; j < nz; ++j) wz *= scaled->w[0];
            for (std::size_t zlin = 0; zlin < z_count; ++zlin) {
                // g = u.z + z^T A_ZZ z - L_Z(z), at scale Ld*Lx^2
                GInt g{};
                GInt lin_part{};
                for (std::size_t j = 0; j < nz; ++j) {
                    const GInt zj = scaled->xv[zidx[j]];
                    g = g + mul(u[j], zj);
                    GInt row{};
                    for (std::size_t j2 = 0; j2 < nz; ++j2) {
                        row = row + mul(scaled->a[p.z[j] * form.size() + p.z[j2]], scaled->xv[zidx[j2]]);
                    }
                    g = g + mul(zj, row);
                    lin_part = lin_part + mul(scaled->l[p.z[j]], zj);
                }
                g.re -= scaled->lx * lin_part.re;
                g.im -= scaled->lx * lin_part.im;
                law[pack(g)] += wz;
                if (zlin + 1 < z_count) {
                    advance_assignment(std::span<std::uint8_t>(zidx), s,
                                       [&](std::size_t, std::uint8_t oldj, std::uint8_t newj) {
                                           wz = wz / scaled->w[oldj] * scaled->w[newj];
                                       });
                }
            }
            std::int64_t collision = 0;
            for (const auto& [key, wv] : law) collision += wv * wv;
            acc += Int(wy) * Int(collision);
            if (ylin + 1 < y_count) {
                advance_assignment(std::span<std::uint8_t>(yidx), s,
                                   [&](std::size_t, std::uint8_t oldj, std::uint8_t newj) {
                                       wy = wy / scaled->w[oldj] * scaled->w[newj];
                                   });
            }
        }
        return Rational(acc, ty * tz * tz);
    }

    // arbitrary-precision path
    Int acc(0);
    std::vector<AtomDistribution> y_atoms(ny, atom);
    std::vector<AtomDistribution> z_atoms(nz, atom);
    AssignmentEnumerator y_space(y_atoms, cfg);
    y_space.for_each([&](std::span<const std::uint8_t> yidx, const Int& wy) {
        std::vector<GaussianRational> u(nz);
        for (std::size_t jz = 0; jz < nz; ++jz) {
            GaussianRational acc_j;
            for (std::size_t iy = 0; iy < ny; ++iy) acc_j += form.at(p.y[iy], p.z[jz]) * atom.values()[yidx[iy]];
            u[jz] = GaussianRational(Rational(2)) * acc_j;
        }
        std::map<GaussianRational, Int> law;
        AssignmentEnumerator z_space(z_atoms, cfg);
        z_space.for_each([&](std::span<const std::uint8_t> zidx, const Int& wz) {
            GaussianRational g;
            for (std::size_t j = 0; j < nz; ++j) {
                const GaussianRational& zj = atom.values()[zidx[j]];
                g += u[j] * zj;
                GaussianRational row;
                for (std::size_t j2 = 0; j2 < nz; ++j2) row += form.at(p.z[j], p.z[j2]) * atom.values()[zidx[j2]];
                g += zj * row;
                g -= form.linear()[p.z[j]] * zj;
            }
            law[g] += wz;
        });
        Int collision(0);
        for (const auto& [v, wv] : law) collision += wv * wv;
        acc += wy * collision;
    });
    return Rational(acc, ty * tz * tz);
}

} // namespace aclab
