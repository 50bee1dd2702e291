#include "aclab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "engine_detail.hpp"

namespace aclab {

APCertificate shortest_ap(std::span<const Rational> values) {
    bool any_nonzero = false;
    for (const auto& v : values) {
        if (!v.is_zero()) {
            any_nonzero = true;
            break;
        }
    }
    if (!any_nonzero) raise(Errc::AllZero, "shortest_ap: all values are zero");
    const Rational d = gcd_all(values);
    long min_j = 0, max_j = 0; // 0 is always on the progression
    APCertificate cert;
    cert.difference = d;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Rational q = values[i] / d;
        if (!q.is_integer()) raise(Errc::Internal, "shortest_ap: generator does not divide a value");
        if (!q.num().fits_slong_p()) raise(Errc::BudgetExceeded, "shortest_ap: progression index overflow");
        const long j = q.num().get_si();
        min_j = std::min(min_j, j);
        max_j = std::max(max_j, j);
        cert.covered.push_back(i);
    }
    cert.min_index = min_j;
    cert.max_index = max_j;
    return cert;
}

bool verify_ap(std::span<const Rational> values, const APCertificate& cert) {
    if (cert.min_index > 0 || cert.max_index < 0) return false;
    if (cert.difference.sign() <= 0) return false;
    std::vector<bool> seen(values.size(), false);
    for (std::size_t i : cert.covered) {
        if (i >= values.size() || seen[i]) return false;
        seen[i] = true;
        const Rational j = values[i] / cert.difference;
        if (!j.is_integer()) return false;
        if (j < Rational(cert.min_index) || j > Rational(cert.max_index)) return false;
    }
    for (std::size_t i : cert.exceptional) {
        if (i >= values.size() || seen[i]) return false;
        seen[i] = true;
    }
    for (bool s : seen) {
        if (!s) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// commensurability

namespace {

// Exponent of the truncation floor: -1/2 + eps/4.
Rational floor_exponent(const Rational& eps) { return Rational(-1, 2) + eps / Rational(4); }

void validate_comm_args(long r, const Rational& eps) {
    if (r < 2) raise(Errc::InvalidArgument, "commensurability: r must be >= 2");
    if (!(Rational(0) < eps && eps < Rational(1, 2)))
        raise(Errc::InvalidArgument, "commensurability: eps must satisfy 0 < eps < 1/2");
}

} // namespace

double CommValue::value(long r, const Rational& eps) const {
    if (!is_floor) return rational.to_double();
    return std::pow(static_cast<double>(r), floor_exponent(eps).to_double());
}

CommValue commensurability_value(std::span<const GaussianRational> values, long r, const Rational& eps,
                                 CommMode mode) {
    validate_comm_args(r, eps);
    bool any_zero = false, all_zero = true;
    const GaussianRational* first_nonzero = nullptr;
    for (const auto& v : values) {
        if (v.is_zero()) {
            any_zero = true;
        } else {
            all_zero = false;
            if (!first_nonzero) first_nonzero = &v;
        }
    }
    if (mode == CommMode::CommStar && any_zero) return {false, Rational(0)};
    if (all_zero) return {false, Rational(1)};

    // A progression {j*d} through 0 containing every value exists iff all
    // values are rational multiples of one of them.
    std::vector<Rational> ratios;
    ratios.reserve(values.size());
    for (const auto& v : values) {
        if (v.is_zero()) continue;
        const GaussianRational t = v / *first_nonzero;
        if (!t.is_real()) return {true, Rational(0)}; // no progression: floor binds
        ratios.push_back(t.re);
    }
    const Rational g = gcd_all(ratios);
    Int min_j(0), max_j(0);
    for (const Rational& t : ratios) {
        const Rational q = t / g;
        if (q.num() < min_j) min_j = q.num();
        if (q.num() > max_j) max_j = q.num();
    }
    const Int R = max_j - min_j;
    const Rational inv_r(Int(1), R);
    // Comm = max(floor, 1/R)
    if (cmp_power(inv_r, Int(r), floor_exponent(eps)) >= 0) return {false, inv_r};
    return {true, Rational(0)};
}

double commensurability(std::span<const Rational> values, long r, const Rational& eps) {
    std::vector<GaussianRational> lifted(values.begin(), values.end());
    return commensurability_value(lifted, r, eps, CommMode::Comm).value(r, eps);
}

double comm_star(std::span<const Rational> values, long r, const Rational& eps) {
    std::vector<GaussianRational> lifted(values.begin(), values.end());
    return commensurability_value(lifted, r, eps, CommMode::CommStar).value(r, eps);
}

double CommExpectation::value() const {
    return a_part.to_double() +
           floor_mass.to_double() * std::pow(static_cast<double>(r), floor_exponent(eps).to_double());
}

Rational CommExpectation::as_rational() const {
    if (!is_rational())
        raise(Errc::InvalidArgument, "CommExpectation: truncation floor carries mass; value is irrational");
    return a_part;
}

CommExpectation expected_commensurability(std::span<const std::vector<GaussianRational>> rows,
                                          const AtomDistribution& atom, long r, const Rational& eps,
                                          CommMode mode, const EngineConfig& cfg) {
    validate_comm_args(r, eps);
    if (rows.empty()) raise(Errc::InvalidArgument, "expected_commensurability: no rows");
    std::vector<LinearForm> forms;
    forms.reserve(rows.size());
    for (const auto& row : rows) forms.emplace_back(row, atom);
    const JointDistribution joint = joint_distribution(forms, cfg);

    CommExpectation out;
    out.r = r;
    out.eps = eps;
    for (const auto& [vec, p] : joint.support()) {
        const CommValue cv = commensurability_value(vec, r, eps, mode);
        if (cv.is_floor) {
            out.floor_mass += p;
        } else {
            out.a_part += p * cv.rational;
        }
    }
    // neighborly: a + b*r^(-1/2+eps/4) >= (1/6) r^(-1/2+5eps/8)
    const Rational alpha = floor_exponent(eps);
    const Rational beta = Rational(-1, 2) + Rational(5) * eps / Rational(8);
    out.neighborly = cmp_affine_power(out.a_part, out.floor_mass, alpha, Rational(1, 6), beta, Int(r)) >= 0;
    return out;
}

bool classify_typical(const BilinearForm& form, std::span<const GaussianRational> y, long r, const Rational& eps) {
    validate_comm_args(r, eps);
    if (y.size() != form.cols()) raise(Errc::InvalidArgument, "classify_typical: assignment length mismatch");
    std::size_t nonzeros = 0;
    for (std::size_t i = 0; i < form.rows(); ++i) {
        GaussianRational w;
        for (std::size_t j = 0; j < form.cols(); ++j) w += form.at(i, j) * y[j];
        if (!w.is_zero()) ++nonzeros;
    }
    const Int threshold = ceil_power(Int(r), Rational(1) - eps / Rational(4));
    return Int(static_cast<long>(nonzeros)) >= threshold;
}

// ---------------------------------------------------------------------------
// degenerate pairs

std::optional<std::pair<long, long>> degenerate_pair(std::span<const GaussianRational> a,
                                                     std::span<const GaussianRational> b, long r,
                                                     long search_bound) {
    if (search_bound < 1) raise(Errc::InvalidArgument, "degenerate_pair: search_bound must be >= 1");
    if (a.size() != b.size()) raise(Errc::InvalidArgument, "degenerate_pair: length mismatch");
    const long n = static_cast<long>(a.size());

    std::set<std::pair<long, long>> candidates{{1, 1}, {1, 0}, {0, 1}};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool az = a[i].is_zero(), bz = b[i].is_zero();
        if (az && bz) continue;
        if (az) {
            candidates.emplace(1, 0); // forces l2 = 0
            continue;
        }
        if (bz) {
            candidates.emplace(0, 1);
            continue;
        }
        const GaussianRational ratio = b[i] / a[i]; // = l1/l2 at an agreeing coordinate
        if (!ratio.is_real()) continue;
        Int l1 = ratio.re.num(), l2 = ratio.re.den();
        if (::abs(l1) > search_bound || l2 > search_bound) continue;
        candidates.emplace(l1.get_si(), l2.get_si());
    }

    long best_agree = -1;
    std::pair<long, long> best{0, 0};
    for (const auto& [l1, l2] : candidates) {
        const GaussianRational gl1{Rational(l1)}, gl2{Rational(l2)};
        long agree = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (gl1 * a[i] == gl2 * b[i]) ++agree;
        }
        if (5 * (n - agree) > r) continue; // needs agreements >= n - r/5
        const long key = std::max(std::labs(l1), std::labs(l2));
        const long best_key = std::max(std::labs(best.first), std::labs(best.second));
        if (agree > best_agree || (agree == best_agree && key < best_key)) {
            best_agree = agree;
            best = {l1, l2};
        }
    }
    if (best_agree < 0) return std::nullopt;
    return best;
}

// ---------------------------------------------------------------------------
// tuple structure

TupleStructure tuple_structure(std::span<const std::vector<GaussianRational>> vectors, long r) {
    if (vectors.size() < 2) raise(Errc::InvalidArgument, "tuple_structure: need k >= 2 vectors");
    const auto& v1 = vectors[0];
    const std::size_t n = v1.size();
    bool v1_zero = true;
    for (const auto& c : v1) {
        if (!c.is_zero()) v1_zero = false;
    }
    if (v1_zero) raise(Errc::InvalidArgument, "tuple_structure: v1 must not be identically zero");
    (void)r;

    TupleStructure out;
    std::set<std::size_t> covered_union;
    for (std::size_t j = 1; j < vectors.size(); ++j) {
        const auto& vj = vectors[j];
        if (vj.size() != n) raise(Errc::InvalidArgument, "tuple_structure: length mismatch");
        // candidate ratios: coordinatewise v1(i)/vj(i), plus 0
        std::set<GaussianRational> candidates{GaussianRational(0)};
        for (std::size_t i = 0; i < n; ++i) {
            if (!vj[i].is_zero()) candidates.insert(v1[i] / vj[i]);
        }
        bool have_best = false;
        std::size_t best_count = 0;
        Int best_height(0);
        bool best_positive = false;
        GaussianRational best_d;
        std::vector<std::size_t> best_set;
        for (const auto& d : candidates) {
            std::vector<std::size_t> diff;
            for (std::size_t i = 0; i < n; ++i) {
                if (v1[i] != d * vj[i]) diff.push_back(i);
            }
            const Int h = height(d);
            const bool positive = d.is_real() && d.re.is_positive();
            bool better = false;
            if (!have_best) {
                better = true;
            } else if (diff.size() != best_count) {
                better = diff.size() < best_count;
            } else if (h != best_height) {
                better = h < best_height;
            } else if (positive != best_positive) {
                better = positive; // prefer d > 0 when representable
            }
            if (better) {
                have_best = true;
                best_count = diff.size();
                best_height = h;
                best_positive = positive;
                best_d = d;
                best_set = std::move(diff);
            }
        }
        // score increment: S_j not contained in the union of earlier sets
        bool contained = true;
        for (std::size_t i : best_set) {
            if (!covered_union.count(i)) {
                contained = false;
                break;
            }
        }
        if (!contained) ++out.score;
        // |S_j \ union|_1 with |S|_1 = 1 if empty else min(|S|, 4)
        std::size_t fresh = 0;
        for (std::size_t i : best_set) {
            if (!covered_union.count(i)) ++fresh;
        }
        out.product_metric *= Int(static_cast<long>(fresh == 0 ? 1 : std::min<std::size_t>(fresh, 4)));
        covered_union.insert(best_set.begin(), best_set.end());
        out.ratios.push_back(best_d);
        out.diff_sets.push_back(std::move(best_set));
    }
    return out;
}

// ---------------------------------------------------------------------------
// friendly tuples

Rational friendly_probability(std::span<const std::vector<GaussianRational>> vectors, const AtomDistribution& atom,
                              const EngineConfig& cfg) {
    if (vectors.empty()) raise(Errc::InvalidArgument, "friendly_probability: no vectors");
    std::vector<LinearForm> forms;
    forms.reserve(vectors.size());
    for (const auto& v : vectors) forms.emplace_back(v, atom);
    const JointDistribution joint = joint_distribution(forms, cfg);
    return joint.prob_at(std::vector<GaussianRational>(vectors.size(), GaussianRational(0)));
}

bool is_friendly(const Rational& p, long r, const Rational& eps) {
    if (r < 1) raise(Errc::InvalidArgument, "is_friendly: r must be >= 1");
    if (p.sign() <= 0) return false;
    // p >= (1/3) r^(-1+eps)
    return cmp_power(Rational(3) * p, Int(r), Rational(-1) + eps) >= 0;
}

// ---------------------------------------------------------------------------
// rank-one extraction

namespace {

struct BlockFactors {
    std::vector<GaussianRational> u, v;
};

// Exact rank-one factorization of the rows x cols block, if it has one.
std::optional<BlockFactors> factor_block(const BilinearForm& form, const std::vector<std::size_t>& rows,
                                         const std::vector<std::size_t>& cols) {
    BlockFactors f;
    f.u.assign(rows.size(), GaussianRational(0));
    f.v.assign(cols.size(), GaussianRational(0));
    std::size_t ref = rows.size();
    for (std::size_t ri = 0; ri < rows.size() && ref == rows.size(); ++ri) {
        for (std::size_t cj = 0; cj < cols.size(); ++cj) {
            if (!form.at(rows[ri], cols[cj]).is_zero()) {
                ref = ri;
                break;
            }
        }
    }
    if (ref == rows.size()) return f; // all-zero block factors trivially
    for (std::size_t cj = 0; cj < cols.size(); ++cj) f.v[cj] = form.at(rows[ref], cols[cj]);
    std::size_t pivot = 0;
    while (f.v[pivot].is_zero()) ++pivot;
    for (std::size_t ri = 0; ri < rows.size(); ++ri) f.u[ri] = form.at(rows[ri], cols[pivot]) / f.v[pivot];
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        for (std::size_t cj = 0; cj < cols.size(); ++cj) {
            if (form.at(rows[ri], cols[cj]) != f.u[ri] * f.v[cj]) return std::nullopt;
        }
    }
    return f;
}

bool rows_proportional(const BilinearForm& form, std::size_t r1, std::size_t r2) {
    for (std::size_t k = 0; k + 1 < form.cols(); ++k) {
        for (std::size_t l = k + 1; l < form.cols(); ++l) {
            if (form.at(r1, k) * form.at(r2, l) != form.at(r1, l) * form.at(r2, k)) return false;
        }
    }
    return true;
}

} // namespace

bool verify_rank_one(const BilinearForm& form, const RankOneCertificate& cert) {
    if (cert.u.size() != cert.rows.size() || cert.v.size() != cert.cols.size()) return false;
    for (std::size_t i : cert.rows) {
        if (i >= form.rows()) return false;
    }
    for (std::size_t j : cert.cols) {
        if (j >= form.cols()) return false;
    }
    for (std::size_t ri = 0; ri < cert.rows.size(); ++ri) {
        for (std::size_t cj = 0; cj < cert.cols.size(); ++cj) {
            if (form.at(cert.rows[ri], cert.cols[cj]) != cert.u[ri] * cert.v[cj]) return false;
        }
    }
    return true;
}

RankOneCertificate rank_one_extract(const BilinearForm& form, const std::optional<RankOneCertificate>& seed) {
    std::vector<std::size_t> x1, x2, y1;
    if (seed) {
        if (!verify_rank_one(form, *seed)) raise(Errc::InvalidArgument, "rank_one_extract: invalid seed certificate");
        x1 = seed->rows;
        y1 = seed->cols;
        std::sort(x1.begin(), x1.end());
        std::sort(y1.begin(), y1.end());
        for (std::size_t i = 0; i < form.rows(); ++i) {
            if (!std::binary_search(x1.begin(), x1.end(), i)) x2.push_back(i);
        }
    } else {
        // Largest proportional row class on the full column set. Zero rows
        // cannot anchor a class (they are vacuously proportional to every
        // row) but may join one, with factor 0.
        std::vector<std::size_t> best_class;
        for (std::size_t i = 0; i < form.rows(); ++i) {
            if (form.row_nonzero_counts()[i] == 0) continue;
            std::vector<std::size_t> cls{i};
            for (std::size_t j = 0; j < form.rows(); ++j) {
                if (j != i && rows_proportional(form, i, j)) cls.push_back(j);
            }
            if (cls.size() > best_class.size()) best_class = std::move(cls);
        }
        if (best_class.empty()) best_class.push_back(0); // all-zero matrix
        std::sort(best_class.begin(), best_class.end());
        x1 = best_class;
        for (std::size_t i = 0; i < form.rows(); ++i) {
            if (!std::binary_search(x1.begin(), x1.end(), i)) x2.push_back(i);
        }
        y1.resize(form.cols());
        for (std::size_t j = 0; j < form.cols(); ++j) y1[j] = j;
    }

    auto minor_violates = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return form.at(i, k) * form.at(j, l) != form.at(i, l) * form.at(j, k);
    };

    for (;;) {
        std::vector<std::size_t> rows_now;
        rows_now.reserve(x1.size() + x2.size());
        rows_now.insert(rows_now.end(), x1.begin(), x1.end());
        rows_now.insert(rows_now.end(), x2.begin(), x2.end());
        std::sort(rows_now.begin(), rows_now.end());
        if (auto f = factor_block(form, rows_now, y1)) {
            RankOneCertificate cert;
            cert.rows = rows_now;
            cert.cols = y1;
            cert.u = std::move(f->u);
            cert.v = std::move(f->v);
            return cert;
        }
        // violating 2x2 minor straddling X1/X2
        bool found = false;
        std::size_t demote = 0, col_k = 0, col_l = 0;
        for (std::size_t j : x2) {
            for (std::size_t i : x1) {
                for (std::size_t ka = 0; ka + 1 < y1.size() && !found; ++ka) {
                    for (std::size_t la = ka + 1; la < y1.size() && !found; ++la) {
                        if (minor_violates(i, j, y1[ka], y1[la])) {
                            found = true;
                            demote = j;
                            col_k = y1[ka];
                            col_l = y1[la];
                        }
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) {
            // X1 x Y1 stays rank one, so the violation must sit inside X2.
            for (std::size_t ja = 0; ja < x2.size() && !found; ++ja) {
                for (std::size_t jb = ja + 1; jb < x2.size() && !found; ++jb) {
                    for (std::size_t ka = 0; ka + 1 < y1.size() && !found; ++ka) {
                        for (std::size_t la = ka + 1; la < y1.size() && !found; ++la) {
                            if (minor_violates(x2[ja], x2[jb], y1[ka], y1[la])) {
                                found = true;
                                demote = x2[jb];
                                col_k = y1[ka];
                                col_l = y1[la];
                            }
                        }
                    }
                }
            }
        }
        if (!found) raise(Errc::Internal, "rank_one_extract: block not rank one but no violating minor found");
        x2.erase(std::find(x2.begin(), x2.end(), demote));
        y1.erase(std::find(y1.begin(), y1.end(), col_k));
        y1.erase(std::find(y1.begin(), y1.end(), col_l));
    }
}

// ---------------------------------------------------------------------------
// GAP fitting

bool verify_gap(std::span<const GaussianRational> coeffs, const GAPCertificate& cert) {
    if (cert.coords.size() != coeffs.size()) return false;
    for (std::size_t i : cert.exceptional) {
        if (i >= coeffs.size()) return false;
    }
    std::set<std::size_t> exceptional(cert.exceptional.begin(), cert.exceptional.end());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (exceptional.count(i)) continue;
        if (::abs(cert.coords[i]) > cert.bound) return false;
        if (coeffs[i] != cert.dilate * GaussianRational(Rational(cert.coords[i]))) return false;
    }
    return true;
}

std::optional<GAPCertificate> gap_fit(std::span<const GaussianRational> coeffs, long bound,
                                      std::size_t max_exceptions) {
    if (bound < 1) raise(Errc::InvalidArgument, "gap_fit: bound must be >= 1");
    const std::size_t n = coeffs.size();
    if (n == 0) raise(Errc::InvalidArgument, "gap_fit: empty coefficient family");

    bool all_zero = true;
    for (const auto& c : coeffs) {
        if (!c.is_zero()) all_zero = false;
    }
    if (all_zero) {
        GAPCertificate cert;
        cert.dilate = GaussianRational(1);
        cert.coords.assign(n, Int(0));
        cert.bound = bound;
        return cert;
    }

    // size-capped deterministic sample of candidate sources
    constexpr std::size_t kSampleCap = 64;
    std::vector<std::size_t> sample;
    if (n <= kSampleCap) {
        for (std::size_t i = 0; i < n; ++i) sample.push_back(i);
    } else {
        for (std::size_t s = 0; s < kSampleCap; ++s) sample.push_back(s * n / kSampleCap);
    }

    std::set<GaussianRational> candidates;
    for (std::size_t i : sample) {
        if (coeffs[i].is_zero()) continue;
        for (long t = 1; t <= bound; ++t) {
            GaussianRational d = coeffs[i] / GaussianRational(Rational(t));
            if (d.re.is_negative() || (d.re.is_zero() && d.im.is_negative())) d = -d;
            candidates.insert(d);
        }
    }

    bool have_best = false;
    std::size_t best_exceptions = 0;
    Int best_height(0);
    GAPCertificate best;
    for (const auto& d : candidates) {
        std::vector<Int> coords(n, Int(0));
        std::vector<std::size_t> exceptional;
        for (std::size_t i = 0; i < n; ++i) {
            const GaussianRational q = coeffs[i] / d;
            if (q.is_real() && q.re.is_integer() && ::abs(q.re.num()) <= bound) {
                coords[i] = q.re.num();
            } else {
                exceptional.push_back(i);
            }
        }
        const Int h = height(d);
        if (!have_best || exceptional.size() < best_exceptions ||
            (exceptional.size() == best_exceptions && h < best_height)) {
            have_best = true;
            best_exceptions = exceptional.size();
            best_height = h;
            best.dilate = d;
            best.coords = std::move(coords);
            best.bound = bound;
            best.exceptional = std::move(exceptional);
        }
    }
    if (!have_best || best_exceptions > max_exceptions) return std::nullopt;
    if (!verify_gap(coeffs, best)) raise(Errc::Internal, "gap_fit: produced certificate failed verification");
    return best;
}

// ---------------------------------------------------------------------------
// dense principal minor (k-core peeling)

std::vector<std::size_t> dense_principal_minor(const QuadraticForm& form, std::size_t threshold) {
    const std::size_t n = form.size();
    std::vector<bool> alive(n, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            std::size_t degree = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && alive[j] && !form.at(i, j).is_zero()) ++degree;
            }
            if (degree < threshold) {
                alive[i] = false;
                changed = true;
            }
        }
    }
    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < n; ++i) {
        if (alive[i]) survivors.push_back(i);
    }
    return survivors;
}

// ---------------------------------------------------------------------------
// fraction heights

CountLowHeightResult count_low_height(long a, long b, long c, long d, long n, long q) {
    if (n < 1) raise(Errc::InvalidArgument, "count_low_height: n must be >= 1");
    if (q < 0) raise(Errc::InvalidArgument, "count_low_height: q must be >= 0");
    const long long det = static_cast<long long>(a) * d - static_cast<long long>(b) * c;
    if (det == 0) raise(Errc::DegenerateMap, "count_low_height: ad = bc");
    CountLowHeightResult out;
    const Int qz(q);
    for (long z = 1; z <= n; ++z) {
        const long long den = static_cast<long long>(c) * z + d;
        if (den == 0) {
            out.skipped.push_back(z);
            continue;
        }
        const long long num = static_cast<long long>(a) * z + b;
        const Fraction h(Int(static_cast<long>(num)), Int(static_cast<long>(den)));
        if (height(h) <= qz) ++out.count;
    }
    return out;
}

long tuple_census_k0(long r) {
    if (r < 2) raise(Errc::InvalidArgument, "tuple_census_k0: r must be >= 2");
    return static_cast<long>(std::floor(std::pow(std::log(static_cast<double>(r)), 7.0)));
}

} // namespace aclab
