#include "framec/report.hpp"

namespace framec {

template <Field T>
Report make_report(const Frame<T>& f, const CompletionOutcome<T>& outcome, std::string method) {
    Report r;
    r.method = std::move(method);
    if (const auto* none = std::get_if<NoCompletion>(&outcome)) {
        r.status = "none";
        r.certificate = none->certificate;
        r.residual = none->certificate.projector_residual;
    } else if (const auto* u = std::get_if<Unique<T>>(&outcome)) {
        r.status = "unique";
        r.dual = AnyMat{u->G};
        r.residual = dual_residual(f, u->G);
    } else {
        const auto& fam = std::get<Family<T>>(outcome).family;
        r.status = "family";
        r.dual = AnyMat{fam.particular};
        r.dof = fam.dof;
        r.basis = std::vector<AnyMat>(fam.basis.begin(), fam.basis.end());
        r.residual = dual_residual(f, fam.particular);
    }
    return r;
}

template Report make_report<double>(const Frame<double>&, const CompletionOutcome<double>&, std::string);
template Report make_report<Complex>(const Frame<Complex>&, const CompletionOutcome<Complex>&, std::string);

Report not_a_frame_report(std::string method) {
    Report r;
    r.status = "not_a_frame";
    r.method = std::move(method);
    return r;
}

nlohmann::json to_json(const Report& r) {
    nlohmann::json j;
    j["status"] = r.status;
    j["method"] = r.method;
    j["residual"] = r.residual;
    if (r.dual) {
        j["dual"] = matrix_to_json(*r.dual);
    }
    if (r.basis) {
        auto& arr = j["basis"] = nlohmann::json::array();
        for (const auto& b : *r.basis) {
            arr.push_back(matrix_to_json(b));
        }
    }
    if (r.dof) {
        j["dof"] = *r.dof;
    }
    if (r.certificate) {
        j["certificate"] = {{"rank_free", r.certificate->rank_free},
                            {"rank_augmented", r.certificate->rank_augmented},
                            {"projector_residual", r.certificate->projector_residual}};
    }
    if (r.weights) {
        j["weights"] = *r.weights;
    }
    j["errata_notes"] = r.errata_notes;
    return j;
}

Report report_from_json(const nlohmann::json& j) {
    try {
        Report r;
        r.status = j.at("status").get<std::string>();
        r.method = j.at("method").get<std::string>();
        r.residual = j.value("residual", 0.0);
        if (j.contains("dual")) {
            r.dual = parse_matrix_json(j.at("dual"));
        }
        if (j.contains("basis")) {
            r.basis.emplace();
            for (const auto& b : j.at("basis")) {
                r.basis->push_back(parse_matrix_json(b));
            }
        }
        if (j.contains("dof")) {
            r.dof = j.at("dof").get<Index>();
        }
        if (j.contains("certificate")) {
            const auto& c = j.at("certificate");
            r.certificate = Certificate{c.at("rank_free").get<Index>(), c.at("rank_augmented").get<Index>(),
                                        c.at("projector_residual").get<double>()};
        }
        if (j.contains("weights")) {
            r.weights = j.at("weights").get<std::vector<double>>();
        }
        r.errata_notes = j.value("errata_notes", std::vector<std::string>{});

        const bool ok = (r.status == "unique" && r.dual && !r.dof) ||
                        (r.status == "family" && r.dual && r.basis && r.dof &&
                         static_cast<Index>(r.basis->size()) == *r.dof) ||
                        (r.status == "none" && r.certificate) || r.status == "not_a_frame";
        if (!ok) {
            throw Error(ErrorKind::ParseError, "report fields do not match status '" + r.status + "'");
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
    }
}

} // namespace framec
