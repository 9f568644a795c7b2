#include "fractus/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fractus/error.hpp"
#include "fractus/fundamental.hpp"
#include "fractus/problem_io.hpp"
#include "fractus/solvability.hpp"
#include "fractus/volterra.hpp"

namespace fractus::cli {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
    return buf;
}

Truncation truncation_for(const ProblemFile& f) {
    Truncation t = Truncation::for_order(f.problem.alpha.value());
    if (f.solver.max_terms) t.max_terms = *f.solver.max_terms;
    if (f.solver.exponent_cap) t.exponent_cap = *f.solver.exponent_cap;
    return t;
}

// Grows the exponent cap from the leading exponent until `build` yields at
// least `terms` terms (or the configured cap is reached). Terms below the cap
// do not depend on it, so the first `terms` rows are final.
template <class Build>
Series first_terms(const ProblemFile& f, double lead, std::size_t terms, Build build) {
    const Truncation configured = truncation_for(f);
    double step = 1.0;
    for (const auto& t : f.problem.terms)
        step = std::min(step, std::real(f.problem.alpha.value() - t.order.value()));
    Truncation t = configured;
    for (double width = step * static_cast<double>(terms);; width *= 2.0) {
        t.exponent_cap = std::min(configured.exponent_cap, lead + width + 1e-9);
        Series s = build(t);
        if (s.size() >= terms || t.exponent_cap >= configured.exponent_cap) return s;
    }
}

Series head(const Series& s, std::size_t terms) {
    std::vector<PowerTerm> kept(s.terms().begin(), s.terms().begin() + std::min(terms, s.size()));
    return Series(s.base_point(), std::move(kept), Truncation::unbounded());
}

void print_terms(std::ostream& out, const Series& s, double tail) {
    out << "exponent_re,exponent_im,coeff_re,coeff_im\n";
    for (const auto& t : s.terms())
        out << num(t.exponent.real()) << ',' << num(t.exponent.imag()) << ',' << num(t.coeff.real()) << ','
            << num(t.coeff.imag()) << '\n';
    out << "# tail_bound=" << num(tail) << '\n';
}

int cmd_check(const std::string& file, std::ostream& out) {
    const ProblemFile f = load_problem(file);
    const SolvabilityReport r = classify_initial_data(f.problem);
    out << render_report(f.problem, r);
    return r.verdict == Verdict::NoSolution ? kNoSolution : kOk;
}

struct SolveArgs {
    std::string file;
    std::string method;
    std::string out_path;
    std::size_t eval_nodes = 0;
    bool project = false;
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
    ProblemFile f = load_problem(args.file);
    CauchyProblem& p = f.problem;
    const SolvabilityReport report = classify_initial_data(p, args.project);
    if (report.verdict == Verdict::NoSolution) {
        err << "no solution: b_k must vanish for k > k0 = " << report.k0 << "; nonzero at k =";
        for (int k : report.indices) err << ' ' << k;
        err << "\n(rerun with --project-initial to solve the projected problem)\n";
        return kNoSolution;
    }
    if (report.verdict == Verdict::SolvableIfTailZeroed) {
        err << "WARNING: initial data projected, b_k set to 0 for k =";
        for (int k : report.indices) err << ' ' << k;
        err << " (k0 = " << report.k0 << ")\n";
        p = project_initial_data(p, report.k0);
    }

    const std::string method = !args.method.empty() ? args.method : f.solver.method.value_or("picard");
    const std::size_t nodes = f.solver.nodes.value_or(512);
    const std::size_t eval = args.eval_nodes > 0 ? args.eval_nodes : nodes;
    SplitFunction y;
    double residual_value = 0.0;
    double tail = 0.0;
    double grading = f.solver.grading.value_or(0.0);

    if (method == "series") {
        const Truncation trunc = truncation_for(f);
        const FundamentalSystem sys = canonical_system(p, trunc);
        if (p.forcing.is_series()) {
            y.singular = homogeneous_solution(sys, p.initial);
            if (!p.forcing.series().empty()) y.singular += inhomogeneous_series(p, p.forcing.series(), trunc);
            Series defect = apply_operator(p, y.singular);
            if (!p.forcing.series().empty()) defect -= p.forcing.series().with_truncation(Truncation::unbounded());
            residual_value = defect.l1_bound(p.b - p.a);
            tail = defect.magnitude(p.b - p.a);
        } else {
            const GridFunction& g = p.forcing.sampled();
            const GreenFunction G = p.has_constant_coefficients() ? constant_green(p, trunc)
                                                                   : sampled_green(p, g.intervals(), g.grading(), trunc);
            y = superpose(p, sys, G, p.forcing);
            tail = homogeneous_tail(p, y.singular);
            residual_value = NAN;
        }
        if (grading == 0.0) grading = 1.0;
    } else if (method == "picard" || method == "marching") {
        SolveOptions opts;
        opts.nodes = nodes;
        opts.grading = grading;
        if (f.solver.tol) opts.picard_tol = *f.solver.tol;
        opts.method = method == "picard" ? SolveMethod::Picard : SolveMethod::Marching;
        const SplitFunction phi = solve(p, opts);
        y = reconstruct_y(p, phi);
        residual_value = residual(p, phi);
        grading = phi.regular.grading();
    } else {
        throw Error(Errc::ParseError, "unknown method \"" + method + "\" (picard, marching or series)");
    }

    std::ofstream file_out;
    if (!args.out_path.empty()) {
        file_out.open(args.out_path);
        if (!file_out) throw Error(Errc::ParseError, "cannot write " + args.out_path);
    }
    std::ostream& csv = args.out_path.empty() ? out : file_out;
    const std::vector<double> xs = graded_nodes(p.a, p.b, eval, grading);
    csv << "x,y_re,y_im\n";
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const SeriesEval s = y.singular.evaluate_checked(xs[i]);
        if (y.singular.truncated()) tail = std::max(tail, s.tail_estimate);
        const cplx v = s.value + (y.has_grid() ? y.regular.interpolate(xs[i]) : cplx{});
        csv << num(xs[i]) << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
    }
    csv << "# residual=" << num(residual_value) << '\n';
    csv << "# tail_bound=" << num(tail) << '\n';
    return kOk;
}

int cmd_fundamental(const std::string& file, int i, std::size_t terms, std::ostream& out) {
    const ProblemFile f = load_problem(file);
    const CauchyProblem& p = f.problem;
    if (!p.has_series_coefficients())
        throw Error(Errc::UnsupportedCoefficients, "fundamental needs series coefficients; use solve --method picard");
    const int k0 = compute_k0(p);
    if (i < 1 || i > k0)
        throw Error(Errc::InvalidOperand, "--i must lie in 1.." + std::to_string(k0) + " (k0)");
    const auto build = [&](Truncation t) { return canonical_system(p, t).entries[static_cast<std::size_t>(i - 1)]; };
    const Series y = terms > 0 ? head(first_terms(f, std::real(p.alpha.value()) - i, terms, build), terms)
                               : build(truncation_for(f));
    print_terms(out, y, homogeneous_tail(p, y));
    return kOk;
}

int cmd_green(const std::string& file, std::optional<double> xi_arg, std::size_t terms, std::ostream& out) {
    const ProblemFile f = load_problem(file);
    const CauchyProblem& p = f.problem;
    if (!p.has_series_coefficients())
        throw Error(Errc::UnsupportedCoefficients, "green needs series coefficients; use solve --method picard");
    const double xi = xi_arg.value_or(p.a);
    const auto build = [&](Truncation t) { return green_series(p, xi, t).shifted().kernel; };
    const Series G = terms > 0 ? head(first_terms(f, std::real(p.alpha.value()) - 1.0, terms, build), terms)
                               : build(truncation_for(f));
    print_terms(out, G, homogeneous_tail(rebased_problem(p, xi, truncation_for(f)), G));
    return kOk;
}

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::UnsolvableInitialData:
            return kNoSolution;
        case Errc::NoConvergence:
        case Errc::SingularStep:
            return kNoConvergence;
        default:
            return kInputError;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cauchy problems for linear Riemann-Liouville fractional differential equations", "fractus"};
    app.require_subcommand(1);

    std::string file;
    auto* check = app.add_subcommand("check", "k0 table and solvability verdict");
    check->add_option("FILE", file, "problem file")->required();

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "solve and write x,y_re,y_im as CSV");
    solve_cmd->add_option("FILE", solve_args.file, "problem file")->required();
    solve_cmd->add_option("--method", solve_args.method, "picard, marching or series")
        ->check(CLI::IsMember({"picard", "marching", "series"}));
    solve_cmd->add_option("--out", solve_args.out_path, "CSV path (default stdout)");
    solve_cmd->add_option("--eval-nodes", solve_args.eval_nodes, "evaluation points on (a, b]")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--project-initial", solve_args.project, "zero b_k for k > k0 instead of failing");

    int entry = 1;
    std::size_t terms = 0;
    auto* fundamental = app.add_subcommand("fundamental", "terms of the canonical solution y_i");
    fundamental->add_option("FILE", file, "problem file")->required();
    fundamental->add_option("--i", entry, "entry index, 1..k0");
    fundamental->add_option("--terms", terms, "number of leading terms (0 = all)");

    std::optional<double> xi;
    auto* green = app.add_subcommand("green", "terms of G(x; xi) in powers of (x - xi)");
    green->add_option("FILE", file, "problem file")->required();
    green->add_option("--xi", xi, "source point (default a)");
    green->add_option("--terms", terms, "number of leading terms (0 = all)");

    auto* dump = app.add_subcommand("dump", "print the normalized problem file");
    dump->add_option("FILE", file, "problem file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (check->parsed()) return cmd_check(file, out);
        if (solve_cmd->parsed()) return cmd_solve(solve_args, out, err);
        if (fundamental->parsed()) return cmd_fundamental(file, entry, terms, out);
        if (green->parsed()) return cmd_green(file, xi, terms, out);
        out << dump_problem(load_problem(file));
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace fractus::cli
