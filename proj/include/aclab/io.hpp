#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "aclab/bounds.hpp"
#include "aclab/certificates.hpp"
#include "aclab/decouple.hpp"
#include "aclab/dist.hpp"
#include "aclab/forms.hpp"

namespace aclab {

using Json = nlohmann::ordered_json;

// --- scalars -----------------------------------------------------------------
// Rational text encoding: "p/q" or "p". GaussianRational JSON encoding:
// {"re": "p/q", "im": "p/q"} with "im" omitted when zero.
Json to_json(const Rational& r);
Json to_json(const GaussianRational& v);
Rational rational_from_json(const Json& j);
GaussianRational gaussian_from_json(const Json& j);

// --- atoms -------------------------------------------------------------------
Json atom_to_json(const AtomDistribution& atom);
AtomDistribution atom_from_json(const Json& j);

// --- matrices ----------------------------------------------------------------
// CSV: one row per line, comma-separated entries in text encoding.
std::vector<std::vector<GaussianRational>> matrix_from_csv(const std::string& text);
std::string matrix_to_csv(const std::vector<std::vector<GaussianRational>>& rows);
Json matrix_to_json(std::size_t rows, std::size_t cols, std::span<const GaussianRational> entries);
std::vector<std::vector<GaussianRational>> matrix_from_json(const Json& j);

// --- forms -------------------------------------------------------------------
inline constexpr int kSchemaVersion = 1;

struct FormFile {
    std::variant<LinearForm, BilinearForm, QuadraticForm, MultilinearForm> form;
    std::optional<TargetFunction> target;
};

Json form_to_json(const FormFile& f);
FormFile form_from_json(const Json& j);
// CSV matrices load as bilinear forms under Rademacher atoms.
FormFile form_from_csv(const std::string& text);
FormFile load_form_file(const std::string& path); // dispatches on extension (.json / .csv)

// --- distributions -----------------------------------------------------------
// Sorted list of {"value": ..., "prob": "p/q"}; the support order is the
// canonical (re, im) order.
Json distribution_to_json(const ValueDistribution& d);
Json joint_distribution_to_json(const JointDistribution& d);
JointDistribution joint_distribution_from_json(const Json& j);
std::string distribution_to_csv(const ValueDistribution& d);

// --- reports -----------------------------------------------------------------
Json concentration_report_to_json(const ConcentrationReport& rep);
Json bound_report_to_json(const BoundReport& rep);

// --- certificates (1-based indices on the wire) -------------------------------
Json certificate_to_json(const APCertificate& cert);
Json certificate_to_json(const GAPCertificate& cert);
Json certificate_to_json(const RankOneCertificate& cert);
APCertificate ap_certificate_from_json(const Json& j);
GAPCertificate gap_certificate_from_json(const Json& j);
RankOneCertificate rank_one_certificate_from_json(const Json& j);

Json partition_family_to_json(const PartitionFamily& family);
PartitionFamily partition_family_from_json(const Json& j);

// --- files and hashing ---------------------------------------------------------
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
// content hash embedded in reports: "fnv1a64:<16 hex digits>"
std::string content_hash(std::string_view data);

} // namespace aclab
