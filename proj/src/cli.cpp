#include "framec/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <type_traits>

#include <CLI11.hpp>

#include "framec/direct.hpp"
#include "framec/product.hpp"
#include "framec/report.hpp"
#include "framec/svd_completion.hpp"

namespace framec {

namespace {

struct Options {
    std::string frame;
    std::string partial;
    std::string dual;
    std::string report;
    std::string method = "direct";
    std::string indices;
    std::string weights;
    std::string output;
    std::string format = "json";
    bool solve_weights = false;
    std::optional<double> tol;
    std::uint64_t seed = 0;
};

double resolve_tol(const Options& opt, double frame_norm) {
    if (opt.tol) {
        return *opt.tol;
    }
    if (const char* env = std::getenv("FRAMEC_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > 0.0) {
            return v;
        }
        throw Error(ErrorKind::ParseError, std::string("FRAMEC_TOL='") + env + "' is not a positive number");
    }
    return kDefaultTol * std::max(1.0, frame_norm);
}

MatrixFormat parse_format(const std::string& name) {
    return name == "csv" ? MatrixFormat::Csv : MatrixFormat::Json;
}

void emit_matrix(const Options& opt, const AnyMat& m, std::ostream& out) {
    if (!opt.output.empty()) {
        write_matrix(opt.output, m);
    } else {
        out << serialize_matrix(m, parse_format(opt.format));
    }
}

std::vector<Index> parse_indices(const std::string& text, Index s) {
    std::vector<Index> out;
    if (text.empty()) {
        for (Index j = 0; j < s; ++j) {
            out.push_back(j);
        }
        return out;
    }
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const long v = std::stol(item, &used);
            if (used != item.size() || v < 1) {
                throw std::invalid_argument(item);
            }
            out.push_back(static_cast<Index>(v - 1));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::ParseError, "--indices expects 1-based positions, got '" + item + "'");
        }
    }
    return out;
}

// Runs `fn` with both matrices in a common field (real unless either is complex).
template <typename Fn>
int with_common_field(const AnyMat& a, const AnyMat& b, Fn&& fn) {
    if (is_complex(a) || is_complex(b)) {
        return fn(to_complex(a), to_complex(b));
    }
    return fn(std::get<Mat<double>>(a), std::get<Mat<double>>(b));
}

template <typename Fn>
int with_field(const AnyMat& a, Fn&& fn) {
    return std::visit([&](const auto& m) { return fn(m); }, a);
}

template <Field T>
std::optional<Frame<T>> try_frame(const Mat<T>& m, double tol) {
    try {
        return make_frame(m, tol);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotAFrame || e.kind() == ErrorKind::BadShape) {
            return std::nullopt;
        }
        throw;
    }
}

// ---- check / canonical / verify ------------------------------------------------

template <Field T>
int check_impl(const Options& opt, const Mat<T>& m, std::ostream& out) {
    const double tol = resolve_tol(opt, m.norm());
    const auto sv = singular_values(m);
    const Index rank = numerical_rank(m, rank_cutoff(sv.empty() ? 0.0 : sv.front(), tol));
    nlohmann::json j{{"n", m.rows()}, {"k", m.cols()}, {"rank", rank}, {"tol", tol}};
    const auto f = try_frame(m, tol);
    if (!f) {
        j["status"] = "not_a_frame";
        out << j.dump(2) << "\n";
        return kExitNotAFrame;
    }
    const auto bounds = frame_bounds(*f);
    j["status"] = "frame";
    j["lower_bound"] = bounds.lower;
    j["upper_bound"] = bounds.upper;
    j["tight"] = is_tight(*f, tol);
    out << j.dump(2) << "\n";
    return kExitOk;
}

template <Field T>
int canonical_impl(const Options& opt, const Mat<T>& m, std::ostream& out, std::ostream& err) {
    const auto f = try_frame(m, resolve_tol(opt, m.norm()));
    if (!f) {
        err << "framec: input is not a frame\n";
        return kExitNotAFrame;
    }
    emit_matrix(opt, AnyMat{canonical_dual(*f)}, out);
    return kExitOk;
}

template <Field T>
int verify_impl(const Options& opt, const Mat<T>& m, const Mat<T>& g, std::ostream& out, std::ostream& err) {
    const double tol = resolve_tol(opt, m.norm());
    const auto f = try_frame(m, tol);
    if (!f) {
        err << "framec: input is not a frame\n";
        return kExitNotAFrame;
    }
    if (g.rows() != f->n() || g.cols() != f->k()) {
        err << "framec: dual is " << g.rows() << "x" << g.cols() << ", expected " << f->n() << "x" << f->k() << "\n";
        return kExitUsage;
    }
    const double residual = dual_residual(*f, g);
    const bool ok = residual <= tol;
    out << nlohmann::json{{"residual", residual}, {"tol", tol}, {"dual_pair", ok}}.dump(2) << "\n";
    return ok ? kExitOk : kExitNoCompletion;
}

// ---- complete -----------------------------------------------------------------

template <Field T>
CompletionOutcome<T> run_method(const std::string& method, const Frame<T>& f, const PartialDual<T>& pd,
                                const std::optional<Weights<T>>& w) {
    if (method == "direct") {
        return w ? complete_direct_scaled(f, pd, *w) : complete_direct(f, pd);
    }
    if (method == "product") {
        return w ? complete_via_product_scaled(f, pd, *w) : complete_via_product(f, pd);
    }
    return complete_via_svd(f, w ? scale_partial_dual(pd, *w) : pd);
}

template <Field T>
std::vector<Mat<T>> draw_samples(const CompletionOutcome<T>& o, std::mt19937_64& rng, int count) {
    std::vector<Mat<T>> out;
    if (const auto* u = std::get_if<Unique<T>>(&o)) {
        out.push_back(u->G);
    } else if (const auto* fam = std::get_if<Family<T>>(&o)) {
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int i = 0; i < count; ++i) {
            std::vector<T> c(static_cast<std::size_t>(fam->family.dof));
            for (auto& x : c) {
                x = T(dist(rng));
            }
            out.push_back(family_sample<T>(fam->family, c));
        }
    }
    return out;
}

// Empty string when the two outcomes describe the same solution set.
template <Field T>
std::string compare_outcomes(const Frame<T>& f, const CompletionOutcome<T>& a, const CompletionOutcome<T>& b,
                             std::mt19937_64& rng) {
    const double tol = std::max(1e-8, f.tol());
    if (verdict(a) != verdict(b)) {
        return "verdicts differ";
    }
    if (const auto* fa = std::get_if<Family<T>>(&a)) {
        if (fa->family.dof != std::get<Family<T>>(b).family.dof) {
            return "degrees of freedom differ";
        }
    }
    for (const auto& g : draw_samples(a, rng, 3)) {
        if (!outcome_contains(f, b, g, tol)) {
            return "a solution of one method is missing from the other";
        }
    }
    for (const auto& g : draw_samples(b, rng, 3)) {
        if (!outcome_contains(f, a, g, tol)) {
            return "a solution of one method is missing from the other";
        }
    }
    return {};
}

template <Field T>
int complete_impl(const Options& opt, const Mat<T>& m, const Mat<T>& h, std::ostream& out, std::ostream& err) {
    const double tol = resolve_tol(opt, m.norm());
    const auto f = try_frame(m, tol);
    if (!f) {
        out << to_json(not_a_frame_report(opt.method)).dump(2) << "\n";
        return kExitNotAFrame;
    }
    const PartialDual<T> pd = make_partial_dual(h, parse_indices(opt.indices, h.cols()), f->k());
    validate_partial_dual(*f, pd);

    std::vector<std::string> notes;
    if (pd.s() > f->k() - f->n()) {
        notes.emplace_back("more columns prescribed than k-n; solved as a single linear system");
    }
    for (Index j = 0; j < pd.s(); ++j) {
        if (pd.indices[static_cast<std::size_t>(j)] != j) {
            notes.emplace_back("prescribed positions moved to the front by a column permutation and restored afterwards");
            break;
        }
    }

    std::optional<Weights<T>> weights;
    bool weights_infeasible = false;
    if (!opt.weights.empty()) {
        const Mat<Complex> wm = to_complex(read_matrix(opt.weights));
        if (wm.size() != pd.s()) {
            throw Error(ErrorKind::BadShape, "weights file holds " + std::to_string(wm.size()) + " entries, expected " +
                                                 std::to_string(pd.s()));
        }
        Weights<T> w;
        for (Index i = 0; i < wm.size(); ++i) {
            if constexpr (std::same_as<T, double>) {
                w.w.push_back(wm.reshaped()(i).real());
            } else {
                w.w.push_back(wm.reshaped()(i));
            }
        }
        weights = std::move(w);
    } else if (opt.solve_weights) {
        weights = solve_weights(*f, pd);
        weights_infeasible = !weights;
    }
    if (weights) {
        notes.emplace_back("scaled completion solves F_free G_free^* = I - F_pres W^* H^* directly");
    }
    if (weights_infeasible) {
        notes.emplace_back("no real weights make the prescribed columns completable");
    }

    CompletionOutcome<T> outcome = run_method(opt.method == "all" ? "direct" : opt.method, *f, pd, weights);
    if (opt.method == "all") {
        std::mt19937_64 rng(opt.seed);
        for (const char* other : {"product", "svd"}) {
            const auto alt = run_method(other, *f, pd, weights);
            const std::string why = compare_outcomes(*f, outcome, alt, rng);
            if (!why.empty()) {
                err << "framec: direct and " << other << " methods disagree: " << why << "\n";
                return kExitDisagreement;
            }
        }
    }

    Report report = make_report(*f, outcome, opt.method);
    report.errata_notes = std::move(notes);
    if (weights) {
        report.weights.emplace();
        for (const T& w : weights->w) {
            report.weights->push_back(std::real(w));
        }
    }
    out << to_json(report).dump(2) << "\n";
    if (!opt.output.empty() && report.dual) {
        write_matrix(opt.output, *report.dual);
    }
    return report.status == "none" ? kExitNoCompletion : kExitOk;
}

// ---- sample -------------------------------------------------------------------

template <Field T>
Mat<T> as_field(const AnyMat& m) {
    if constexpr (std::same_as<T, Complex>) {
        return to_complex(m);
    } else {
        return std::get<Mat<double>>(m);
    }
}

int sample_impl(const Options& opt, std::ostream& out, std::ostream& err) {
    std::ifstream in(opt.report);
    if (!in) {
        err << "framec: cannot open " << opt.report << "\n";
        return kExitUsage;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    const Report r = report_from_json(j);
    if (r.status != "family") {
        throw Error(ErrorKind::NotAFamily, "report status is '" + r.status + "'");
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const bool complex = is_complex(*r.dual) ||
                         std::any_of(r.basis->begin(), r.basis->end(), [](const AnyMat& b) { return is_complex(b); });
    auto combine = [&]<Field T>(std::type_identity<T>) {
        Mat<T> g = as_field<T>(*r.dual);
        for (const auto& b : *r.basis) {
            const Mat<T> bm = as_field<T>(b);
            if (bm.rows() != g.rows() || bm.cols() != g.cols()) {
                throw Error(ErrorKind::ParseError, "basis matrix shape differs from the particular dual");
            }
            g += T(dist(rng)) * bm;
        }
        return AnyMat{std::move(g)};
    };
    emit_matrix(opt, complex ? combine(std::type_identity<Complex>{}) : combine(std::type_identity<double>{}), out);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"framec: frame checks, canonical duals and dual frame completion"};
    app.require_subcommand(1);
    Options opt;

    auto add_tol = [&](CLI::App* cmd) {
        cmd->add_option("--tol", opt.tol, "working tolerance (default: FRAMEC_TOL or 1e-9*max(1,||F||_F))")
            ->check(CLI::PositiveNumber);
    };
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--output,-o", opt.output, "write the matrix to this file (.json or CSV)");
        cmd->add_option("--format", opt.format, "stdout matrix format")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* check = app.add_subcommand("check", "verify that a matrix is a frame and print its bounds");
    check->add_option("frame", opt.frame, "frame matrix file")->required();
    add_tol(check);

    auto* canonical = app.add_subcommand("canonical", "print the canonical dual S^{-1} F");
    canonical->add_option("frame", opt.frame, "frame matrix file")->required();
    add_tol(canonical);
    add_output(canonical);

    auto* complete = app.add_subcommand("complete", "complete prescribed dual columns to a dual frame");
    complete->add_option("frame", opt.frame, "frame matrix file")->required();
    complete->add_option("partial", opt.partial, "prescribed dual columns (n x s)")->required();
    complete->add_option("--method", opt.method)->check(CLI::IsMember({"direct", "product", "svd", "all"}));
    complete->add_option("--indices", opt.indices, "1-based positions of the prescribed columns, e.g. 1,3");
    auto* wopt = complete->add_option("--weights", opt.weights, "matrix file holding one weight per column");
    complete->add_flag("--solve-weights", opt.solve_weights, "search for real weights that allow a completion")
        ->excludes(wopt);
    complete->add_option("--output,-o", opt.output, "write the (particular) dual to this file");
    complete->add_option("--seed", opt.seed, "seed for the cross-method samples of --method all");
    add_tol(complete);

    auto* verify = app.add_subcommand("verify", "check F G^* = I");
    verify->add_option("frame", opt.frame, "frame matrix file")->required();
    verify->add_option("dual", opt.dual, "candidate dual matrix file")->required();
    add_tol(verify);

    auto* sample = app.add_subcommand("sample", "draw a member of a family report");
    sample->add_option("report", opt.report, "JSON report with status family")->required();
    sample->add_option("--seed", opt.seed, "coefficient seed");
    add_output(sample);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*check) {
            return with_field(read_matrix(opt.frame), [&](const auto& m) { return check_impl(opt, m, out); });
        }
        if (*canonical) {
            return with_field(read_matrix(opt.frame), [&](const auto& m) { return canonical_impl(opt, m, out, err); });
        }
        if (*complete) {
            return with_common_field(read_matrix(opt.frame), read_matrix(opt.partial),
                                     [&](const auto& m, const auto& h) { return complete_impl(opt, m, h, out, err); });
        }
        if (*verify) {
            return with_common_field(read_matrix(opt.frame), read_matrix(opt.dual),
                                     [&](const auto& m, const auto& g) { return verify_impl(opt, m, g, out, err); });
        }
        return sample_impl(opt, out, err);
    } catch (const Error& e) {
        err << "framec: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "framec: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace framec
