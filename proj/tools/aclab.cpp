// aclab: exact concentration functions of Bernoulli forms, bound checks, and
// structure detectors, from the command line.
//
// Subcommands: dist | verify | detect | shatter | report | verify-cert.
// Exit codes: 0 success, 1 property failure, 2 input error, 3 budget
// exceeded, 4 internal error.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "aclab/decouple.hpp"
#include "aclab/dist.hpp"
#include "aclab/incidence.hpp"
#include "aclab/io.hpp"
#include "aclab/rng.hpp"
#include "aclab/structure.hpp"
#include "aclab/suites.hpp"

namespace {

using namespace aclab;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

struct RunConfig {
    std::uint64_t seed = 20240601;
    int threads = 0;
    std::size_t enum_cap = EngineConfig{}.enum_cap;
    std::size_t dp_cap = EngineConfig{}.dp_support_cap;
    std::string c_halasz = "8";
    std::string c_st = "16";
    std::string format = "json";
    std::string out_path;

    EngineConfig engine() const {
        EngineConfig cfg;
        cfg.enum_cap = enum_cap;
        cfg.dp_support_cap = dp_cap;
        cfg.threads = threads;
        return cfg;
    }

    FittedConstants constants() const {
        FittedConstants c;
        c.c_halasz = Rational::parse(c_halasz);
        c.c_st = Rational::parse(c_st);
        return c;
    }

    Json to_json() const {
        Json j;
        j["seed"] = seed;
        j["threads"] = threads;
        j["enum_cap"] = enum_cap;
        j["dp_support_cap"] = dp_cap;
        j["c_halasz"] = c_halasz;
        j["c_st"] = c_st;
        j["rng"] = std::string(kRngAlgorithm);
        return j;
    }
};

void add_common_flags(CLI::App* cmd, RunConfig& rc) {
    cmd->add_option("--seed", rc.seed, "master seed for all substreams");
    cmd->add_option("--threads", rc.threads, "worker threads (0 = ACLAB_THREADS env or hardware)");
    cmd->add_option("--budget", rc.enum_cap, "enumeration cap (assignments)");
    cmd->add_option("--dp-cap", rc.dp_cap, "DP support cap (values)");
    cmd->add_option("--c-halasz", rc.c_halasz, "frozen constant for the halasz ratio check");
    cmd->add_option("--c-st", rc.c_st, "frozen constant for the incidence bound check");
    cmd->add_option("--format", rc.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", rc.out_path, "write the report to this path (stdout otherwise)");
}

void emit(const RunConfig& rc, const std::string& text) {
    if (rc.out_path.empty()) {
        std::cout << text << "\n";
    } else {
        write_text_file(rc.out_path, text + "\n");
    }
}

Json report_shell(const RunConfig& rc, const std::string& command) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = rc.to_json();
    return j;
}

std::vector<GaussianRational> flatten_matrix(const std::vector<std::vector<GaussianRational>>& rows) {
    std::vector<GaussianRational> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::vector<std::vector<GaussianRational>> load_matrix(const std::string& path) {
    const std::string text = read_text_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return matrix_from_csv(text);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::ParseError, std::string("json parse error: ") + e.what());
    }
    return matrix_from_json(j);
}

std::vector<Rational> real_parts_or_fail(const std::vector<GaussianRational>& values, const std::string& what) {
    std::vector<Rational> out;
    for (const auto& v : values) {
        if (!v.is_real()) raise(Errc::InvalidArgument, what + " requires real rational entries");
        out.push_back(v.re);
    }
    return out;
}

// --- dist ---------------------------------------------------------------------

int cmd_dist(const RunConfig& rc, const std::string& form_path, const std::string& dist_out) {
    const std::string text = read_text_file(form_path);
    const FormFile file = load_form_file(form_path);
    const EngineConfig engine = rc.engine();

    Json report = report_shell(rc, "dist");
    report["input"] = form_path;
    report["input_hash"] = content_hash(text);

    ConcentrationReport rep;
    Json bound;
    std::string law_csv;
    if (const auto* lin = std::get_if<LinearForm>(&file.form)) {
        const ValueDistribution d = linear_distribution(*lin, engine);
        rep = concentration(d);
        law_csv = distribution_to_csv(d);
        const long m = static_cast<long>(lin->nonzero_count());
        if (m >= 1) {
            bound["name"] = "littlewood-offord";
            bound["m"] = m;
            bound["bound_value"] = lo_bound(m).value();
            bound["passes"] = lo_check(rep.sup_prob, m);
        }
    } else if (const auto* bil = std::get_if<BilinearForm>(&file.form)) {
        const TargetFunction target =
            file.target ? *file.target : TargetFunction::constant(GaussianRational(0));
        rep = bilinear_conditional_concentration(*bil, target, engine);
        law_csv = distribution_to_csv(bilinear_value_distribution(*bil, engine));
        const long r = static_cast<long>(bil->min_row_nonzeros());
        if (r >= 1) {
            bound["name"] = "bilinear-explicit";
            bound["r"] = r;
            bound["bound_value"] = bilo_bound(r);
            bound["passes"] = bilo_check(rep.sup_prob, r);
        }
    } else if (const auto* quad = std::get_if<QuadraticForm>(&file.form)) {
        rep = quadratic_concentration(*quad, engine);
        law_csv = distribution_to_csv(quadratic_value_distribution(*quad, engine));
    } else if (const auto* multi = std::get_if<MultilinearForm>(&file.form)) {
        const TargetFunction target =
            file.target ? *file.target : TargetFunction::constant(GaussianRational(0));
        rep = multilinear_concentration(*multi, target, engine);
    }
    report["concentration"] = concentration_report_to_json(rep);
    if (!bound.is_null()) report["bound"] = bound;
    if (!dist_out.empty()) {
        if (law_csv.empty())
            raise(Errc::InvalidArgument, "full distribution output is not available for this form kind");
        write_text_file(dist_out, law_csv);
        report["distribution_csv"] = dist_out;
    }
    emit(rc, report.dump(2));
    return kExitOk;
}

// --- verify -------------------------------------------------------------------

int cmd_verify(const RunConfig& rc, const std::string& suite) {
    SuiteOptions opt;
    opt.seed = rc.seed;
    opt.engine = rc.engine();
    opt.constants = rc.constants();
    if (rc.format == "csv") opt.max_recorded_cases = std::size_t(-1);

    std::vector<std::string> to_run;
    if (suite == "all") {
        to_run = suite_names();
    } else {
        to_run.push_back(suite);
    }
    Json report = report_shell(rc, "verify");
    Json suites = Json::array();
    bool all_passed = true;
    std::string csv = "suite,case,passed,observed,detail\n";
    for (const auto& name : to_run) {
        const SuiteResult res = run_suite(name, opt);
        all_passed = all_passed && res.passed;
        Json j;
        j["name"] = res.name;
        j["passed"] = res.passed;
        j["cases_run"] = res.cases_run;
        j["failures"] = res.failures;
        if (!res.summary.empty()) j["summary"] = res.summary;
        Json cases = Json::array();
        for (const auto& c : res.cases) {
            Json e;
            e["label"] = c.label;
            e["passed"] = c.passed;
            e["observed"] = c.observed;
            if (!c.detail.empty()) e["detail"] = c.detail;
            cases.push_back(std::move(e));
            csv += res.name + "," + c.label + "," + (c.passed ? "1" : "0") + "," +
                   std::to_string(c.observed) + "," + c.detail + "\n";
        }
        j["cases"] = std::move(cases);
        suites.push_back(std::move(j));
        std::cerr << (res.passed ? "[PASS] " : "[FAIL] ") << res.name << " (" << res.cases_run
                  << " cases, " << res.failures << " failures)"
                  << (res.summary.empty() ? "" : "; " + res.summary) << "\n";
    }
    report["suites"] = std::move(suites);
    report["passed"] = all_passed;
    emit(rc, rc.format == "csv" ? csv : report.dump(2));
    return all_passed ? kExitOk : kExitPropertyFailure;
}

// --- detect -------------------------------------------------------------------

int cmd_detect(const RunConfig& rc, const std::string& matrix_path, const std::string& detector, long bound,
               std::size_t max_exceptions, long r, const std::string& eps_text, long search_bound,
               std::size_t threshold) {
    const std::string text = read_text_file(matrix_path);
    const auto rows = load_matrix(matrix_path);
    const auto flat = flatten_matrix(rows);
    const Rational eps = Rational::parse(eps_text);

    Json report = report_shell(rc, "detect");
    report["input"] = matrix_path;
    report["input_hash"] = content_hash(text);
    report["detector"] = detector;

    if (detector == "rank1") {
        BilinearForm form(rows.size(), rows.front().size(), flat, AtomDistribution::rademacher(),
                          AtomDistribution::rademacher());
        const auto cert = rank_one_extract(form);
        if (!verify_rank_one(form, cert)) {
            std::cerr << "internal error: emitted certificate failed re-verification\n";
            return kExitInternal;
        }
        report["certificate"] = certificate_to_json(cert);
    } else if (detector == "gap") {
        const auto cert = gap_fit(flat, bound, max_exceptions);
        report["found"] = cert.has_value();
        if (cert) {
            if (!verify_gap(flat, *cert)) {
                std::cerr << "internal error: emitted certificate failed re-verification\n";
                return kExitInternal;
            }
            report["certificate"] = certificate_to_json(*cert);
        }
    } else if (detector == "ap") {
        const auto values = real_parts_or_fail(flat, "ap detector");
        const auto cert = shortest_ap(values);
        if (!verify_ap(values, cert)) {
            std::cerr << "internal error: emitted certificate failed re-verification\n";
            return kExitInternal;
        }
        report["certificate"] = certificate_to_json(cert);
    } else if (detector == "comm") {
        const auto cv = commensurability_value(flat, r, eps, CommMode::Comm);
        Json j;
        j["is_floor"] = cv.is_floor;
        if (!cv.is_floor) j["value"] = cv.rational.str();
        j["value_approx"] = cv.value(r, eps);
        report["commensurability"] = std::move(j);
    } else if (detector == "tuple") {
        if (rows.size() < 2) raise(Errc::InvalidArgument, "tuple detector needs at least two rows");
        const auto ts = tuple_structure(rows, r);
        Json j;
        Json ratios = Json::array(), sets = Json::array();
        for (const auto& d : ts.ratios) ratios.push_back(d.str());
        for (const auto& s : ts.diff_sets) {
            Json set = Json::array();
            for (std::size_t i : s) set.push_back(i + 1);
            sets.push_back(std::move(set));
        }
        j["ratios"] = std::move(ratios);
        j["diff_sets"] = std::move(sets);
        j["score"] = ts.score;
        j["product_metric"] = ts.product_metric.get_str();
        report["tuple_structure"] = std::move(j);
    } else if (detector == "kcore") {
        if (rows.size() != rows.front().size())
            raise(Errc::InvalidArgument, "kcore detector needs a square symmetric matrix");
        QuadraticForm q(rows.size(), flat, {}, GaussianRational(0), AtomDistribution::rademacher());
        const auto survivors = dense_principal_minor(q, threshold);
        Json idx = Json::array();
        for (std::size_t i : survivors) idx.push_back(i + 1);
        report["surviving_indices"] = std::move(idx);
        report["threshold"] = threshold;
    } else if (detector == "degenerate-pair") {
        if (rows.size() != 2) raise(Errc::InvalidArgument, "degenerate-pair detector needs exactly two rows");
        const auto res = degenerate_pair(rows[0], rows[1], r, search_bound);
        report["found"] = res.has_value();
        if (res) {
            report["l1"] = res->first;
            report["l2"] = res->second;
        }
    } else {
        raise(Errc::InvalidArgument, "unknown detector: " + detector);
    }
    emit(rc, report.dump(2));
    return kExitOk;
}

// --- shatter --------------------------------------------------------------------

int cmd_shatter(const RunConfig& rc, std::size_t n, std::size_t r, const std::string& matrix_path,
                std::size_t max_attempts) {
    QuadraticForm q = [&] {
        if (matrix_path.empty()) {
            return quadratic_from_square(std::vector<Rational>(n, Rational(1)), {}, Rational(0));
        }
        const auto rows = load_matrix(matrix_path);
        return QuadraticForm(rows.size(), flatten_matrix(rows), {}, GaussianRational(0),
                             AtomDistribution::rademacher());
    }();
    Json report = report_shell(rc, "shatter");
    report["n"] = q.size();
    report["r"] = r;
    const PartitionFamily family = shatter_build(q, r, rc.seed, max_attempts);
    report["family"] = partition_family_to_json(family);
    report["family_size"] = family.partitions.size();
    report["substream"] = "shatter-attempt";
    Json transcript;
    const bool shatters = !shatter_verify(q.size(), family).has_value();
    bool balanced = true;
    for (const auto& p : family.partitions) balanced = balanced && is_balanced(q, p, r);
    transcript["shatters"] = shatters;
    transcript["balanced"] = balanced;
    report["verification"] = std::move(transcript);
    emit(rc, report.dump(2));
    return (shatters && balanced) ? kExitOk : kExitInternal;
}

// --- report (format conversion) --------------------------------------------------

int cmd_report(const RunConfig& rc, const std::string& in_path) {
    Json j;
    try {
        j = Json::parse(read_text_file(in_path));
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::ParseError, std::string("json parse error: ") + e.what());
    }
    std::string csv;
    if (j.contains("suites")) {
        csv = "suite,passed,cases_run,failures\n";
        for (const auto& s : j.at("suites")) {
            csv += s.at("name").get<std::string>() + "," + (s.at("passed").get<bool>() ? "1" : "0") + "," +
                   std::to_string(s.at("cases_run").get<std::size_t>()) + "," +
                   std::to_string(s.at("failures").get<std::size_t>()) + "\n";
        }
    } else if (j.contains("support")) {
        csv = "value,prob\n";
        for (const auto& e : j.at("support")) {
            const auto& v = e.at("value");
            std::string value;
            if (v.is_string()) {
                value = v.get<std::string>();
            } else if (v.is_object()) {
                value = v.at("re").get<std::string>();
                if (v.contains("im")) value += "+(" + v.at("im").get<std::string>() + ")i";
            } else {
                value = v.dump();
            }
            csv += value + "," + e.at("prob").get<std::string>() + "\n";
        }
    } else if (j.contains("concentration")) {
        const auto& c = j.at("concentration");
        csv = "field,value\n";
        csv += "sup_prob," + c.at("sup_prob").get<std::string>() + "\n";
        if (c.contains("at_target")) csv += "at_target," + c.at("at_target").get<std::string>() + "\n";
        if (j.contains("bound")) {
            csv += "bound," + std::to_string(j.at("bound").at("bound_value").get<double>()) + "\n";
            csv += "bound_passes," + std::string(j.at("bound").at("passes").get<bool>() ? "1" : "0") + "\n";
        }
    } else {
        raise(Errc::InvalidArgument, "unrecognized report layout");
    }
    emit(rc, csv);
    return kExitOk;
}

// --- verify-cert ------------------------------------------------------------------

int cmd_verify_cert(const RunConfig& rc, const std::string& matrix_path, const std::string& cert_path) {
    const auto rows = load_matrix(matrix_path);
    const auto flat = flatten_matrix(rows);
    Json cj;
    try {
        cj = Json::parse(read_text_file(cert_path));
    } catch (const nlohmann::json::parse_error& e) {
        raise(Errc::ParseError, std::string("json parse error: ") + e.what());
    }
    if (cj.contains("certificate")) cj = cj.at("certificate"); // accept detect output directly
    const std::string kind = cj.at("kind").get<std::string>();
    bool ok = false;
    if (kind == "rank_one") {
        BilinearForm form(rows.size(), rows.front().size(), flat, AtomDistribution::rademacher(),
                          AtomDistribution::rademacher());
        ok = verify_rank_one(form, rank_one_certificate_from_json(cj));
    } else if (kind == "gap") {
        ok = verify_gap(flat, gap_certificate_from_json(cj));
    } else if (kind == "ap") {
        ok = verify_ap(real_parts_or_fail(flat, "ap certificate"), ap_certificate_from_json(cj));
    } else {
        raise(Errc::InvalidArgument, "unknown certificate kind: " + kind);
    }
    Json report = report_shell(rc, "verify-cert");
    report["certificate_kind"] = kind;
    report["valid"] = ok;
    emit(rc, report.dump(2));
    return ok ? kExitOk : kExitPropertyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact anti-concentration laboratory for Bernoulli forms"};
    app.require_subcommand(1);

    RunConfig rc;

    auto* dist = app.add_subcommand("dist", "exact law / concentration of a form");
    std::string form_path, dist_out;
    dist->add_option("--form", form_path, "form file (.json or .csv matrix)")->required();
    dist->add_option("--distribution-out", dist_out, "also write the full law as CSV");
    add_common_flags(dist, rc);

    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    std::string suite;
    std::string suite_help = "one of: all";
    for (const auto& n : suite_names()) suite_help += ", " + n;
    verify->add_option("suite", suite, suite_help)->required();
    add_common_flags(verify, rc);

    auto* detect = app.add_subcommand("detect", "run a structure detector on a matrix file");
    std::string matrix_path, detector, eps_text = "1/4";
    long bound = 10, r = 10, search_bound = 10;
    std::size_t max_exceptions = 0, threshold = 1;
    detect->add_option("--matrix", matrix_path, "matrix file (.csv or .json)")->required();
    detect->add_option("--detector", detector, "rank1 | gap | ap | comm | tuple | kcore | degenerate-pair")
        ->required();
    detect->add_option("--bound", bound, "gap detector coordinate bound");
    detect->add_option("--max-exceptions", max_exceptions, "gap detector exception budget");
    detect->add_option("--r", r, "row support parameter for comm/tuple/degenerate-pair");
    detect->add_option("--eps", eps_text, "epsilon for comm (rational)");
    detect->add_option("--search-bound", search_bound, "degenerate-pair search bound");
    detect->add_option("--threshold", threshold, "kcore degree threshold");
    add_common_flags(detect, rc);

    auto* shatter = app.add_subcommand("shatter", "build and verify a shattering family");
    std::size_t sh_n = 8, sh_r = 2, sh_attempts = 50;
    std::string sh_matrix;
    shatter->add_option("--n", sh_n, "variable count (complete all-ones form)");
    shatter->add_option("--r", sh_r, "balance parameter");
    shatter->add_option("--matrix", sh_matrix, "symmetric matrix file instead of all-ones");
    shatter->add_option("--max-attempts", sh_attempts, "sampling attempts before giving up");
    add_common_flags(shatter, rc);

    auto* report = app.add_subcommand("report", "render a JSON report as CSV");
    std::string report_in;
    report->add_option("--in", report_in, "report JSON produced by dist/verify")->required();
    add_common_flags(report, rc);

    auto* vcert = app.add_subcommand("verify-cert", "re-verify a certificate against a matrix");
    std::string vc_matrix, vc_cert;
    vcert->add_option("--matrix", vc_matrix, "matrix file")->required();
    vcert->add_option("--cert", vc_cert, "certificate JSON")->required();
    add_common_flags(vcert, rc);

    CLI11_PARSE(app, argc, argv);

    try {
        if (dist->parsed()) return cmd_dist(rc, form_path, dist_out);
        if (verify->parsed()) return cmd_verify(rc, suite);
        if (detect->parsed())
            return cmd_detect(rc, matrix_path, detector, bound, max_exceptions, r, eps_text, search_bound,
                              threshold);
        if (shatter->parsed()) return cmd_shatter(rc, sh_n, sh_r, sh_matrix, sh_attempts);
        if (report->parsed()) return cmd_report(rc, report_in);
        if (vcert->parsed()) return cmd_verify_cert(rc, vc_matrix, vc_cert);
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        switch (e.code()) {
        case Errc::BudgetExceeded:
            return kExitBudget;
        case Errc::Internal:
            return kExitInternal;
        case Errc::ShatterFailure:
            return kExitPropertyFailure;
        default:
            return kExitInputError;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
