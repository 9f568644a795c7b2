#include "fractus/problem_io.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fractus/error.hpp"

namespace fractus {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(Errc::ParseError, where + ": " + what);
}

void only_keys(const json& node, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!node.is_object()) fail(where, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : node.items())
        if (!keys.contains(item.key())) fail(where, "unknown key \"" + item.key() + "\"");
}

const json& required(const json& node, const std::string& where, const char* key) {
    if (!node.contains(key)) fail(where, std::string("missing \"") + key + "\"");
    return node.at(key);
}

// Orders and exponents may be decimal strings (exact round trip) or numbers.
double real_of(const json& node, const std::string& where) {
    if (node.is_number()) return node.get<double>();
    if (!node.is_string()) fail(where, "expected a number or a decimal string");
    const auto& text = node.get_ref<const std::string&>();
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end != last) fail(where, "malformed numeral \"" + text + "\"");
    return value;
}

double optional_real(const json& node, const char* key, const std::string& where, double fallback) {
    return node.contains(key) ? real_of(node.at(key), where + "." + key) : fallback;
}

cplx complex_of(const json& node, const std::string& where) {
    only_keys(node, where, {"re", "im"});
    return {real_of(required(node, where, "re"), where + ".re"), optional_real(node, "im", where, 0.0)};
}

std::size_t count_of(const json& node, const std::string& where) {
    if (!node.is_number_unsigned()) fail(where, "expected a non-negative integer");
    return node.get<std::size_t>();
}

Series series_of(const json& node, double a, const std::string& where) {
    if (!node.is_array()) fail(where, "expected an array of terms");
    std::vector<PowerTerm> terms;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        only_keys(node[i], at, {"exponent", "coeff"});
        terms.push_back({complex_of(required(node[i], at, "coeff"), at + ".coeff"),
                         complex_of(required(node[i], at, "exponent"), at + ".exponent")});
    }
    return Series(a, std::move(terms), Truncation::unbounded());
}

GridFunction samples_of(const json& node, double a, double b, const std::string& where) {
    const json& re = required(node, where, "re");
    if (!re.is_array()) fail(where + ".re", "expected an array");
    std::vector<cplx> values(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) values[i].real(real_of(re[i], where + ".re"));
    if (node.contains("im")) {
        const json& im = node.at("im");
        if (!im.is_array() || im.size() != re.size()) fail(where + ".im", "expected an array matching \"re\"");
        for (std::size_t i = 0; i < im.size(); ++i) values[i].imag(real_of(im[i], where + ".im"));
    }
    return GridFunction(a, b, optional_real(node, "grading", where, 1.0), std::move(values));
}

CoefficientFunction coefficient_of(const json& node, double a, double b, const std::string& where) {
    const json& kind = required(node, where, "kind");
    if (kind == "constant") {
        only_keys(node, where, {"kind", "re", "im"});
        return CoefficientFunction::constant(a, complex_of(json{{"re", required(node, where, "re")},
                                                                {"im", node.value("im", json(0.0))}},
                                                           where));
    }
    if (kind == "series") {
        only_keys(node, where, {"kind", "terms"});
        return CoefficientFunction(series_of(required(node, where, "terms"), a, where + ".terms"));
    }
    if (kind == "sampled") {
        only_keys(node, where, {"kind", "grading", "re", "im", "vanishing_order", "sup_bound"});
        SampledCoefficient s{samples_of(node, a, b, where), optional_real(node, "vanishing_order", where, 0.0), 0.0};
        double sup = 0.0;
        for (cplx v : s.samples.values()) sup = std::max(sup, std::abs(v));
        s.sup_bound = optional_real(node, "sup_bound", where, sup);
        return CoefficientFunction(std::move(s));
    }
    fail(where + ".kind", "expected \"constant\", \"series\" or \"sampled\"");
}

Forcing forcing_of(const json& node, double a, double b, const std::string& where) {
    const json& kind = required(node, where, "kind");
    if (kind == "zero") {
        only_keys(node, where, {"kind"});
        return Forcing(Series(a));
    }
    if (kind == "constant" || kind == "series") {
        const CoefficientFunction c = coefficient_of(node, a, b, where);
        return Forcing(c.series());
    }
    if (kind == "sampled") {
        only_keys(node, where, {"kind", "grading", "re", "im"});
        return Forcing(samples_of(node, a, b, where));
    }
    fail(where + ".kind", "expected \"zero\", \"constant\", \"series\" or \"sampled\"");
}

SolverConfig solver_of(const json& node) {
    const std::string where = "solver";
    only_keys(node, where, {"method", "nodes", "grading", "tol", "max_terms", "exponent_cap"});
    SolverConfig s;
    if (node.contains("method")) {
        if (!node.at("method").is_string()) fail(where + ".method", "expected a string");
        s.method = node.at("method").get<std::string>();
        if (*s.method != "picard" && *s.method != "marching" && *s.method != "series")
            fail(where + ".method", "expected picard, marching or series");
    }
    if (node.contains("nodes")) s.nodes = count_of(node.at("nodes"), where + ".nodes");
    if (node.contains("grading")) s.grading = real_of(node.at("grading"), where + ".grading");
    if (node.contains("tol")) s.tol = real_of(node.at("tol"), where + ".tol");
    if (node.contains("max_terms")) s.max_terms = count_of(node.at("max_terms"), where + ".max_terms");
    if (node.contains("exponent_cap")) s.exponent_cap = real_of(node.at("exponent_cap"), where + ".exponent_cap");
    return s;
}

// shortest decimal that parses back to the same double
std::string decimal(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

json exact_complex(cplx z) { return {{"re", decimal(z.real())}, {"im", decimal(z.imag())}}; }
json plain_complex(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json series_json(const Series& s) {
    json terms = json::array();
    for (const auto& t : s.terms()) terms.push_back({{"exponent", exact_complex(t.exponent)}, {"coeff", plain_complex(t.coeff)}});
    return terms;
}

json samples_json(const GridFunction& g, json out) {
    json re = json::array();
    json im = json::array();
    for (cplx v : g.values()) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    out["grading"] = g.grading();
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, e.what());
    }
    try {
        only_keys(doc, "problem", {"interval", "alpha", "terms", "forcing", "initial", "solver"});
        const json& interval = required(doc, "problem", "interval");
        only_keys(interval, "interval", {"a", "b"});
        CauchyProblem p;
        p.a = real_of(required(interval, "interval", "a"), "interval.a");
        p.b = real_of(required(interval, "interval", "b"), "interval.b");
        if (!(p.b > p.a)) throw Error(Errc::InvalidGrid, "interval requires b > a");
        const cplx alpha = complex_of(required(doc, "problem", "alpha"), "alpha");
        p.alpha = ComplexOrder(alpha);

        if (doc.contains("terms")) {
            const json& terms = doc.at("terms");
            if (!terms.is_array()) fail("terms", "expected an array");
            for (std::size_t j = 0; j < terms.size(); ++j) {
                const std::string at = "terms[" + std::to_string(j) + "]";
                only_keys(terms[j], at, {"order", "coeff"});
                p.terms.push_back({ComplexOrder(complex_of(required(terms[j], at, "order"), at + ".order")),
                                   coefficient_of(required(terms[j], at, "coeff"), p.a, p.b, at + ".coeff")});
            }
        }
        p.forcing = doc.contains("forcing") ? forcing_of(doc.at("forcing"), p.a, p.b, "forcing") : Forcing(Series(p.a));

        p.initial.assign(static_cast<std::size_t>(p.n()), cplx{0.0, 0.0});
        if (doc.contains("initial")) {
            const json& initial = doc.at("initial");
            if (!initial.is_array()) fail("initial", "expected an array");
            std::set<int> seen;
            for (std::size_t i = 0; i < initial.size(); ++i) {
                const std::string at = "initial[" + std::to_string(i) + "]";
                only_keys(initial[i], at, {"k", "re", "im"});
                const json& kj = required(initial[i], at, "k");
                if (!kj.is_number_integer()) fail(at + ".k", "expected an integer");
                const int k = kj.get<int>();
                if (k < 1 || k > p.n())
                    throw Error(Errc::InvalidInitialData,
                                at + ": k = " + std::to_string(k) + " outside 1.." + std::to_string(p.n()), {k});
                if (!seen.insert(k).second) fail(at + ".k", "duplicate k = " + std::to_string(k));
                p.initial[static_cast<std::size_t>(k - 1)] = {real_of(required(initial[i], at, "re"), at + ".re"),
                                                              optional_real(initial[i], "im", at, 0.0)};
            }
        }
        ProblemFile out{validate_problem(std::move(p)), {}};
        if (doc.contains("solver")) out.solver = solver_of(doc.at("solver"));
        return out;
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
}

ProblemFile load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ParseError, "cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_problem(text.str());
}

std::string dump_problem(const ProblemFile& file) {
    const CauchyProblem& p = file.problem;
    json doc;
    doc["interval"] = {{"a", p.a}, {"b", p.b}};
    doc["alpha"] = exact_complex(p.alpha.value());
    json terms = json::array();
    for (const auto& t : p.terms) {
        json coeff;
        if (const auto c = t.coeff.constant_value()) {
            coeff = {{"kind", "constant"}, {"re", c->real()}, {"im", c->imag()}};
        } else if (t.coeff.is_series()) {
            coeff = {{"kind", "series"}, {"terms", series_json(t.coeff.series())}};
        } else {
            const auto& s = t.coeff.sampled();
            coeff = samples_json(s.samples, {{"kind", "sampled"},
                                             {"vanishing_order", s.vanishing_order},
                                             {"sup_bound", s.sup_bound}});
        }
        terms.push_back({{"order", exact_complex(t.order.value())}, {"coeff", std::move(coeff)}});
    }
    doc["terms"] = std::move(terms);
    if (p.forcing.is_series()) {
        doc["forcing"] = p.forcing.series().empty() ? json{{"kind", "zero"}}
                                                    : json{{"kind", "series"}, {"terms", series_json(p.forcing.series())}};
    } else {
        doc["forcing"] = samples_json(p.forcing.sampled(), {{"kind", "sampled"}});
    }
    json initial = json::array();
    for (std::size_t k = 0; k < p.initial.size(); ++k)
        initial.push_back({{"k", k + 1}, {"re", p.initial[k].real()}, {"im", p.initial[k].imag()}});
    doc["initial"] = std::move(initial);

    const SolverConfig& s = file.solver;
    json solver = json::object();
    if (s.method) solver["method"] = *s.method;
    if (s.nodes) solver["nodes"] = *s.nodes;
    if (s.grading) solver["grading"] = *s.grading;
    if (s.tol) solver["tol"] = *s.tol;
    if (s.max_terms) solver["max_terms"] = *s.max_terms;
    if (s.exponent_cap) solver["exponent_cap"] = *s.exponent_cap;
    if (!solver.empty()) doc["solver"] = std::move(solver);
    return doc.dump(2) + "\n";
}

}  // namespace fractus
