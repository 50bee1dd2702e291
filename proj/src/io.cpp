#include "aclab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace aclab {

Json to_json(const Rational& r) { return r.str(); }

Json to_json(const GaussianRational& v) {
    Json j;
    j["re"] = v.re.str();
    if (!v.im.is_zero()) j["im"] = v.im.str();
    return j;
}

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    raise(Errc::ParseError, "expected a rational ('p/q' string or integer)");
}

GaussianRational gaussian_from_json(const Json& j) {
    if (j.is_object()) {
        GaussianRational v;
        if (j.contains("re")) v.re = rational_from_json(j.at("re"));
        if (j.contains("im")) v.im = rational_from_json(j.at("im"));
        return v;
    }
    if (j.is_number_integer()) return GaussianRational(Rational(static_cast<long>(j.get<std::int64_t>())));
    if (j.is_string()) return GaussianRational::parse(j.get<std::string>());
    raise(Errc::ParseError, "expected a gaussian rational (string, integer, or {re, im})");
}

// --- atoms -------------------------------------------------------------------

Json atom_to_json(const AtomDistribution& atom) {
    Json j;
    switch (atom.kind()) {
    case AtomDistribution::Kind::Rademacher:
        j["kind"] = "rademacher";
        break;
    case AtomDistribution::Kind::LazyWalker:
        j["kind"] = "lazy_walker";
        j["rho"] = atom.rho().str();
        break;
    case AtomDistribution::Kind::FiniteSupport: {
        j["kind"] = "finite_support";
        Json support = Json::array();
        for (std::size_t i = 0; i < atom.size(); ++i) {
            Json entry;
            entry["value"] = to_json(atom.values()[i]);
            entry["prob"] = atom.probs()[i].str();
            support.push_back(std::move(entry));
        }
        j["support"] = std::move(support);
        break;
    }
    }
    return j;
}

AtomDistribution atom_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "rademacher") return AtomDistribution::rademacher();
    if (kind == "lazy_walker") return AtomDistribution::lazy_walker(rational_from_json(j.at("rho")));
    if (kind == "finite_support") {
        std::vector<std::pair<GaussianRational, Rational>> entries;
        for (const auto& e : j.at("support")) {
            entries.emplace_back(gaussian_from_json(e.at("value")), rational_from_json(e.at("prob")));
        }
        return AtomDistribution::finite_support(std::move(entries));
    }
    raise(Errc::ParseError, "unknown atom kind: " + kind);
}

// --- matrices ----------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

std::vector<std::vector<GaussianRational>> matrix_from_csv(const std::string& text) {
    std::vector<std::vector<GaussianRational>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        std::vector<GaussianRational> row;
        std::istringstream cells(stripped);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(cells, cell, ',')) {
            ++col;
            const std::string v = trim(cell);
            try {
                row.push_back(GaussianRational::parse(v));
            } catch (const Error&) {
                raise(Errc::ParseError, "bad matrix entry at line " + std::to_string(lineno) + ", column " +
                                            std::to_string(col) + ": '" + v + "'");
            }
        }
        if (!rows.empty() && rows.front().size() != row.size())
            raise(Errc::ParseError, "ragged matrix row at line " + std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) raise(Errc::ParseError, "empty matrix");
    return rows;
}

std::string matrix_to_csv(const std::vector<std::vector<GaussianRational>>& rows) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ",";
            out += row[j].str();
        }
        out += "\n";
    }
    return out;
}

Json matrix_to_json(std::size_t rows, std::size_t cols, std::span<const GaussianRational> entries) {
    Json out = Json::array();
    for (std::size_t i = 0; i < rows; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < cols; ++j) row.push_back(entries[i * cols + j].str());
        out.push_back(std::move(row));
    }
    Json j;
    j["rows"] = std::move(out);
    return j;
}

std::vector<std::vector<GaussianRational>> matrix_from_json(const Json& j) {
    const Json& rows = j.is_object() ? j.at("rows") : j;
    if (!rows.is_array() || rows.empty()) raise(Errc::ParseError, "matrix: expected nonempty 'rows' array");
    std::vector<std::vector<GaussianRational>> out;
    for (const auto& row : rows) {
        std::vector<GaussianRational> r;
        for (const auto& cell : row) r.push_back(gaussian_from_json(cell));
        if (!out.empty() && out.front().size() != r.size()) raise(Errc::ParseError, "matrix: ragged rows");
        out.push_back(std::move(r));
    }
    return out;
}

// --- forms -------------------------------------------------------------------

namespace {

Json target_to_json(const TargetFunction& t) {
    Json j;
    switch (t.kind()) {
    case TargetFunction::Kind::Constant:
        j["kind"] = "constant";
        j["value"] = to_json(t.constant_value());
        return j;
    default:
        raise(Errc::InvalidArgument, "only constant targets serialize to form files");
    }
}

TargetFunction target_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return TargetFunction::constant(gaussian_from_json(j.at("value")));
    if (kind == "affine") {
        std::vector<GaussianRational> coeffs;
        for (const auto& c : j.at("coeffs")) coeffs.push_back(gaussian_from_json(c));
        return TargetFunction::affine(std::move(coeffs), gaussian_from_json(j.at("constant")));
    }
    raise(Errc::ParseError, "unknown target kind: " + kind);
}

std::vector<GaussianRational> flatten(const std::vector<std::vector<GaussianRational>>& rows) {
    std::vector<GaussianRational> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

} // namespace

Json form_to_json(const FormFile& f) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    if (const auto* lin = std::get_if<LinearForm>(&f.form)) {
        j["kind"] = "linear";
        Json coeffs = Json::array();
        for (const auto& c : lin->coeffs()) coeffs.push_back(c.str());
        j["coeffs"] = std::move(coeffs);
        j["atom"] = atom_to_json(lin->atom());
    } else if (const auto* bil = std::get_if<BilinearForm>(&f.form)) {
        j["kind"] = "bilinear";
        j["matrix"] = matrix_to_json(bil->rows(), bil->cols(), bil->entries());
        j["x_atom"] = atom_to_json(bil->x_atom());
        j["y_atom"] = atom_to_json(bil->y_atom());
    } else if (const auto* quad = std::get_if<QuadraticForm>(&f.form)) {
        j["kind"] = "quadratic";
        j["matrix"] = matrix_to_json(quad->size(), quad->size(), quad->entries());
        Json lin = Json::array();
        for (const auto& c : quad->linear()) lin.push_back(c.str());
        j["linear"] = std::move(lin);
        j["constant"] = to_json(quad->constant());
        j["atom"] = atom_to_json(quad->atom());
    } else if (const auto* multi = std::get_if<MultilinearForm>(&f.form)) {
        j["kind"] = "multilinear";
        j["order"] = multi->order();
        j["n"] = multi->dimension();
        Json coeffs = Json::array();
        for (const auto& [index, value] : multi->coeffs()) {
            Json e;
            Json idx = Json::array();
            for (auto i : index) idx.push_back(i + 1); // 1-based on the wire
            e["index"] = std::move(idx);
            e["value"] = value.str();
            coeffs.push_back(std::move(e));
        }
        j["coeffs"] = std::move(coeffs);
        Json atoms = Json::array();
        for (const auto& a : multi->atoms()) atoms.push_back(atom_to_json(a));
        j["atoms"] = std::move(atoms);
    }
    if (f.target) j["target"] = target_to_json(*f.target);
    return j;
}

FormFile form_from_json(const Json& j) {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
        raise(Errc::ParseError, "unsupported schema_version");
    const std::string kind = j.at("kind").get<std::string>();
    FormFile out{LinearForm({GaussianRational(1)}, AtomDistribution::rademacher()), std::nullopt};
    if (kind == "linear") {
        std::vector<GaussianRational> coeffs;
        for (const auto& c : j.at("coeffs")) coeffs.push_back(gaussian_from_json(c));
        AtomDistribution atom = j.contains("atom") ? atom_from_json(j.at("atom")) : AtomDistribution::rademacher();
        out.form = LinearForm(std::move(coeffs), std::move(atom));
    } else if (kind == "bilinear") {
        auto rows = matrix_from_json(j.at("matrix"));
        AtomDistribution x = j.contains("x_atom") ? atom_from_json(j.at("x_atom")) : AtomDistribution::rademacher();
        AtomDistribution y = j.contains("y_atom") ? atom_from_json(j.at("y_atom")) : AtomDistribution::rademacher();
        out.form = BilinearForm(rows.size(), rows.front().size(), flatten(rows), std::move(x), std::move(y));
    } else if (kind == "quadratic") {
        auto rows = matrix_from_json(j.at("matrix"));
        std::vector<GaussianRational> linear;
        if (j.contains("linear")) {
            for (const auto& c : j.at("linear")) linear.push_back(gaussian_from_json(c));
        }
        GaussianRational constant =
            j.contains("constant") ? gaussian_from_json(j.at("constant")) : GaussianRational(0);
        AtomDistribution atom = j.contains("atom") ? atom_from_json(j.at("atom")) : AtomDistribution::rademacher();
        out.form =
            QuadraticForm(rows.size(), flatten(rows), std::move(linear), std::move(constant), std::move(atom));
    } else if (kind == "multilinear") {
        const std::size_t order = j.at("order").get<std::size_t>();
        const std::size_t n = j.at("n").get<std::size_t>();
        std::map<MultilinearForm::Index, GaussianRational> coeffs;
        for (const auto& e : j.at("coeffs")) {
            MultilinearForm::Index idx;
            for (const auto& i : e.at("index")) {
                const auto v = i.get<std::int64_t>();
                if (v < 1) raise(Errc::ParseError, "multilinear index entries are 1-based");
                idx.push_back(static_cast<std::uint32_t>(v - 1));
            }
            coeffs[idx] = gaussian_from_json(e.at("value"));
        }
        std::vector<AtomDistribution> atoms;
        if (j.contains("atoms")) {
            for (const auto& a : j.at("atoms")) atoms.push_back(atom_from_json(a));
        } else {
            atoms.assign(order, AtomDistribution::rademacher());
        }
        out.form = MultilinearForm(order, n, std::move(coeffs), std::move(atoms));
    } else {
        raise(Errc::ParseError, "unknown form kind: " + kind);
    }
    if (j.contains("target")) out.target = target_from_json(j.at("target"));
    return out;
}

FormFile form_from_csv(const std::string& text) {
    auto rows = matrix_from_csv(text);
    return FormFile{BilinearForm(rows.size(), rows.front().size(), flatten(rows), AtomDistribution::rademacher(),
                                 AtomDistribution::rademacher()),
                    std::nullopt};
}

FormFile load_form_file(const std::string& path) {
    const std::string text = read_text_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return form_from_csv(text);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::ParseError, std::string("json parse error: ") + e.what());
    }
    return form_from_json(j);
}

// --- distributions -----------------------------------------------------------

Json distribution_to_json(const ValueDistribution& d) {
    Json support = Json::array();
    for (const auto& [v, p] : d.support()) {
        Json e;
        e["value"] = to_json(v);
        e["prob"] = p.str();
        support.push_back(std::move(e));
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["support"] = std::move(support);
    return j;
}

Json joint_distribution_to_json(const JointDistribution& d) {
    Json support = Json::array();
    for (const auto& [vec, p] : d.support()) {
        Json e;
        Json value = Json::array();
        for (const auto& v : vec) value.push_back(v.str());
        e["value"] = std::move(value);
        e["prob"] = p.str();
        support.push_back(std::move(e));
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["support"] = std::move(support);
    return j;
}

JointDistribution joint_distribution_from_json(const Json& j) {
    JointDistribution::Support support;
    for (const auto& e : j.at("support")) {
        std::vector<GaussianRational> vec;
        for (const auto& v : e.at("value")) vec.push_back(gaussian_from_json(v));
        support[std::move(vec)] = rational_from_json(e.at("prob"));
    }
    return JointDistribution(std::move(support));
}

std::string distribution_to_csv(const ValueDistribution& d) {
    std::string out = "value,prob\n";
    for (const auto& [v, p] : d.support()) {
        out += v.str();
        out += ",";
        out += p.str();
        out += "\n";
    }
    return out;
}

// --- reports -----------------------------------------------------------------

Json concentration_report_to_json(const ConcentrationReport& rep) {
    Json j;
    j["sup_prob"] = rep.sup_prob.str();
    j["sup_prob_approx"] = rep.sup_prob.to_double();
    Json argmax = Json::array();
    for (const auto& v : rep.argmax_values) argmax.push_back(v.str());
    j["argmax_values"] = std::move(argmax);
    j["method"] = rep.method == ConcentrationReport::Method::Exact ? "exact" : "monte_carlo";
    if (rep.sample_count) j["sample_count"] = *rep.sample_count;
    if (rep.ci_halfwidth) j["ci_halfwidth"] = *rep.ci_halfwidth;
    if (rep.at_target) {
        j["at_target"] = rep.at_target->str();
        j["at_target_approx"] = rep.at_target->to_double();
    }
    return j;
}

Json bound_report_to_json(const BoundReport& rep) {
    Json j;
    j["bound_name"] = rep.bound_name;
    j["bound_value"] = rep.bound_value;
    j["observed_prob"] = rep.observed_prob;
    j["exact_prob"] = rep.exact_prob.str();
    j["ratio"] = rep.ratio;
    j["passes"] = rep.passes;
    return j;
}

// --- certificates ------------------------------------------------------------

namespace {

Json indices_to_json(std::span<const std::size_t> idx) {
    Json out = Json::array();
    for (std::size_t i : idx) out.push_back(i + 1); // 1-based on the wire
    return out;
}

std::vector<std::size_t> indices_from_json(const Json& j) {
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        const auto i = v.get<std::int64_t>();
        if (i < 1) raise(Errc::ParseError, "certificate indices are 1-based");
        out.push_back(static_cast<std::size_t>(i - 1));
    }
    return out;
}

void expect_kind(const Json& j, const std::string& kind) {
    if (j.at("kind").get<std::string>() != kind) raise(Errc::ParseError, "expected a '" + kind + "' certificate");
}

Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    Int v;
    if (mpz_set_str(v.get_mpz_t(), j.get<std::string>().c_str(), 10) != 0)
        raise(Errc::ParseError, "bad integer literal");
    return v;
}

} // namespace

Json certificate_to_json(const APCertificate& cert) {
    Json j;
    j["kind"] = "ap";
    j["difference"] = cert.difference.str();
    j["min_index"] = cert.min_index;
    j["max_index"] = cert.max_index;
    j["length"] = cert.length();
    j["covered"] = indices_to_json(cert.covered);
    j["exceptional"] = indices_to_json(cert.exceptional);
    return j;
}

Json certificate_to_json(const GAPCertificate& cert) {
    Json j;
    j["kind"] = "gap";
    j["dilate"] = cert.dilate.str();
    Json coords = Json::array();
    for (const auto& c : cert.coords) coords.push_back(c.get_str());
    j["coords"] = std::move(coords);
    j["bound"] = cert.bound.get_str();
    j["exceptional"] = indices_to_json(cert.exceptional);
    return j;
}

Json certificate_to_json(const RankOneCertificate& cert) {
    Json j;
    j["kind"] = "rank_one";
    j["rows"] = indices_to_json(cert.rows);
    j["cols"] = indices_to_json(cert.cols);
    Json u = Json::array(), v = Json::array();
    for (const auto& x : cert.u) u.push_back(x.str());
    for (const auto& x : cert.v) v.push_back(x.str());
    j["u"] = std::move(u);
    j["v"] = std::move(v);
    return j;
}

APCertificate ap_certificate_from_json(const Json& j) {
    expect_kind(j, "ap");
    APCertificate cert;
    cert.difference = rational_from_json(j.at("difference"));
    cert.min_index = j.at("min_index").get<long>();
    cert.max_index = j.at("max_index").get<long>();
    cert.covered = indices_from_json(j.at("covered"));
    if (j.contains("exceptional")) cert.exceptional = indices_from_json(j.at("exceptional"));
    return cert;
}

GAPCertificate gap_certificate_from_json(const Json& j) {
    expect_kind(j, "gap");
    GAPCertificate cert;
    cert.dilate = gaussian_from_json(j.at("dilate"));
    for (const auto& c : j.at("coords")) cert.coords.push_back(int_from_json(c));
    cert.bound = int_from_json(j.at("bound"));
    if (j.contains("exceptional")) cert.exceptional = indices_from_json(j.at("exceptional"));
    return cert;
}

RankOneCertificate rank_one_certificate_from_json(const Json& j) {
    expect_kind(j, "rank_one");
    RankOneCertificate cert;
    cert.rows = indices_from_json(j.at("rows"));
    cert.cols = indices_from_json(j.at("cols"));
    for (const auto& x : j.at("u")) cert.u.push_back(gaussian_from_json(x));
    for (const auto& x : j.at("v")) cert.v.push_back(gaussian_from_json(x));
    return cert;
}

Json partition_family_to_json(const PartitionFamily& family) {
    Json parts = Json::array();
    for (const auto& p : family.partitions) {
        Json e = Json::array();
        e.push_back(indices_to_json(p.y));
        e.push_back(indices_to_json(p.z));
        parts.push_back(std::move(e));
    }
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = family.n;
    j["partitions"] = std::move(parts);
    return j;
}

PartitionFamily partition_family_from_json(const Json& j) {
    PartitionFamily family;
    family.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("partitions")) {
        const auto y = indices_from_json(e.at(0));
        Partition p = Partition::from_y(family.n, y);
        if (e.size() > 1) {
            const auto z = indices_from_json(e.at(1));
            if (z != p.z) raise(Errc::ParseError, "partition z side does not match the complement of y");
        }
        family.partitions.push_back(std::move(p));
    }
    return family;
}

// --- files and hashing ---------------------------------------------------------

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::ParseError, "cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(Errc::ParseError, "cannot write file: " + path);
    out << content;
}

std::string content_hash(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace aclab
