#include "fractus/solvability.hpp"

#include <cassert>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "fractus/error.hpp"
#include "fractus/gamma.hpp"

namespace fractus {

const char* to_string(Integrability c) noexcept {
    switch (c) {
        case Integrability::Integrable: return "Integrable";
        case Integrability::ZeroByGammaPole: return "ZeroByGammaPole";
        case Integrability::NonIntegrable: return "NonIntegrable";
    }
    return "?";
}

namespace {

cplx gamma_argument(const CauchyProblem& p, std::size_t position, int k) {
    return p.alpha.value() - p.terms[position].order.value() - static_cast<double>(k) + 1.0;
}

std::string format_real(double v) {
    if (std::abs(v) < 1e-12) v = 0.0;
    // shortest form that survives 1e-12 snapping, e.g. 2.2 rather than 2.2000000000000002
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string format_number(cplx z) {
    if (std::abs(z.imag()) < kPoleSnap) return format_real(z.real());
    return format_real(z.real()) + (z.imag() < 0 ? "-" : "+") + format_real(std::abs(z.imag())) + "i";
}

}  // namespace

Integrability term_integrability(const CauchyProblem& p, std::size_t position, int k) {
    if (position >= p.terms.size() || k < 1 || k > p.n())
        throw Error(Errc::InvalidOperand, "term_integrability index out of range");
    const cplx arg = gamma_argument(p, position, k);
    if (is_gamma_pole(arg) || p.terms[position].coeff.is_zero()) return Integrability::ZeroByGammaPole;
    // exponent of the product is nu_j + (arg - 1); only the real part matters
    const double nu = p.terms[position].coeff.vanishing_order();
    return nu + arg.real() - 1.0 > -1.0 ? Integrability::Integrable : Integrability::NonIntegrable;
}

int compute_k0(const CauchyProblem& p) {
    int k0 = 0;
    for (int k = 1; k <= p.n(); ++k) {
        bool good = true;
        for (std::size_t j = 0; j < p.terms.size(); ++j)
            good = good && term_integrability(p, j, k) != Integrability::NonIntegrable;
        if (!good) break;
        k0 = k;
    }
    assert(k0 >= 1 && "column k = 1 is integrable for every valid problem");
    return k0;
}

SolvabilityReport classify_initial_data(const CauchyProblem& p, bool project) {
    SolvabilityReport r;
    r.n = p.n();
    r.k0 = compute_k0(p);
    for (std::size_t j = 0; j < p.terms.size(); ++j) {
        std::vector<Integrability> row;
        std::vector<cplx> args;
        for (int k = 1; k <= r.n; ++k) {
            row.push_back(term_integrability(p, j, k));
            args.push_back(gamma_argument(p, j, k));
        }
        r.cells.push_back(std::move(row));
        r.gamma_arguments.push_back(std::move(args));
        if (!p.terms[j].coeff.is_series())
            r.assumptions.push_back("a_" + std::to_string(p.term_label(j)) + " declared vanishing order " +
                                    format_real(p.terms[j].coeff.vanishing_order()) + " (not verified)");
    }
    for (int k = r.k0 + 1; k <= r.n; ++k)
        if (p.initial.at(static_cast<std::size_t>(k - 1)) != cplx{0.0, 0.0}) r.indices.push_back(k);
    if (r.indices.empty())
        r.verdict = Verdict::SolvableAsGiven;
    else
        r.verdict = project ? Verdict::SolvableIfTailZeroed : Verdict::NoSolution;
    return r;
}

CauchyProblem project_initial_data(const CauchyProblem& p, int k0) {
    CauchyProblem out = p;
    for (std::size_t i = 0; i < out.initial.size(); ++i)
        out.initial[i] *= static_cast<double>(step_H(k0 - static_cast<int>(i + 1)));
    return out;
}

std::string render_report(const CauchyProblem& p, const SolvabilityReport& report) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"k"};
    for (std::size_t c = p.terms.size(); c-- > 0;) {
        const auto v = p.terms[c].coeff.constant_value();
        std::string name = "a_" + std::to_string(p.term_label(c));
        if (v) name += " = " + format_number(*v);
        header.push_back(name);
    }
    header.push_back("a_j (x-a)^(alpha-alpha_j-k) / Gamma(alpha-alpha_j-k+1)");
    rows.push_back(header);

    std::vector<std::string> sub{""};
    for (std::size_t c = p.terms.size(); c-- > 0;)
        sub.push_back("alpha-alpha_" + std::to_string(p.term_label(c)) + "-k+1");
    sub.push_back("");
    rows.push_back(sub);

    for (int k = 1; k <= report.n; ++k) {
        std::vector<std::string> row{std::to_string(k)};
        bool column_ok = true;
        for (std::size_t c = p.terms.size(); c-- > 0;) {
            const cplx arg = report.gamma_arguments[c][static_cast<std::size_t>(k - 1)];
            row.push_back(is_gamma_pole(arg) ? format_real(std::round(arg.real())) : format_number(arg));
            column_ok = column_ok && report.cells[c][static_cast<std::size_t>(k - 1)] != Integrability::NonIntegrable;
        }
        row.push_back(column_ok ? "∈ L(a,b)" : "∉ L(a,b)");
        rows.push_back(row);
    }

    // display width: count UTF-8 code points
    auto width = [](const std::string& s) {
        std::size_t w = 0;
        for (unsigned char ch : s) w += (ch & 0xC0) != 0x80;
        return w;
    };
    std::vector<std::size_t> widths(header.size(), 0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], width(row[i]));

    std::ostringstream os;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line += row[i];
            if (i + 1 < row.size()) line += std::string(widths[i] - width(row[i]) + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    }
    os << "n = " << report.n << ", k0 = " << report.k0 << '\n';
    for (const auto& a : report.assumptions) os << "assumption: " << a << '\n';
    auto list = [](const std::vector<int>& ks) {
        std::string s;
        for (int k : ks) s += (s.empty() ? "" : ", ") + std::to_string(k);
        return s;
    };
    switch (report.verdict) {
        case Verdict::SolvableAsGiven: os << "verdict: solvable as given\n"; break;
        case Verdict::SolvableIfTailZeroed:
            os << "verdict: solvable after zeroing b_k for k = " << list(report.indices) << '\n';
            break;
        case Verdict::NoSolution:
            os << "verdict: no solution; b_k must vanish for k = " << list(report.indices) << " (k > k0 = "
               << report.k0 << ")\n";
            for (int k : report.indices)
                for (std::size_t c = 0; c < p.terms.size(); ++c)
                    if (report.cells[c][static_cast<std::size_t>(k - 1)] == Integrability::NonIntegrable)
                        os << "  cell (j = " << p.term_label(c) << ", k = " << k << ") is not in L(a,b)\n";
            break;
    }
    return os.str();
}

}  // namespace fractus
