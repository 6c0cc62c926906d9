#pragma once

// JSON report emitted by `framec complete` and consumed by `framec sample`.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "framec/frame.hpp"
#include "framec/matrix_io.hpp"

namespace framec {

struct Report {
    std::string status; // unique | family | none | not_a_frame
    std::string method; // direct | product | svd | all
    std::optional<AnyMat> dual;
    std::optional<std::vector<AnyMat>> basis;
    std::optional<Index> dof;
    double residual = 0.0;
    std::optional<Certificate> certificate;
    std::optional<std::vector<double>> weights;
    std::vector<std::string> errata_notes;
};

/// Residual is ||F G^* - I||_F for unique/family and the projector residual
/// of the consistency test for none.
template <Field T>
Report make_report(const Frame<T>& f, const CompletionOutcome<T>& outcome, std::string method);

Report not_a_frame_report(std::string method);

/// Throws ParseError when an arm's required fields are missing.
nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

} // namespace framec
