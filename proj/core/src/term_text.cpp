#include "blochlab/manybody.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace blochlab {

// Canonical text form of a LocalTerm. Grammar:
//   term     := monomial (' + ' monomial)*  |  '0'
//   monomial := coeff [' * ' factor (' ' factor)*]
//   coeff    := real  |  '(' real ',' real ')'
//   factor   := 'c(' site ')'  |  'a(' site ')'
// Factors are listed left to right as written, and act right to left.

static std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string to_text(const LocalTerm& term) {
    if (term.monomials.empty()) return "0";
    std::ostringstream out2;
    bool first = true;
    for (const auto& m : term.monomials) {
        if (!first) out2 << " + ";
        first = false;
        if (m.coeff.imag() == 0.0)
            out2 << format_real(m.coeff.real());
        else
            out2 << '(' << format_real(m.coeff.real()) << ',' << format_real(m.coeff.imag()) << ')';
        if (!m.factors.empty()) {
            out2 << " *";
            for (const auto& f : m.factors)
                out2 << ' ' << (f.create ? 'c' : 'a') << '(' << f.site << ')';
        }
    }
    return out2.str();
}

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() { return i < s.size() ? s[i] : '\0'; }
    void expect(char c) {
        if (i >= s.size() || s[i] != c)
            throw std::invalid_argument("term_from_text: expected '" + std::string(1, c) +
                                        "' at position " + std::to_string(i) + " in \"" + s + "\"");
        ++i;
    }
    double read_real() {
        skip_ws();
        size_t end = 0;
        double v;
        try {
            v = std::stod(s.substr(i), &end);
        } catch (const std::exception&) {
            throw std::invalid_argument("term_from_text: bad number at position " +
                                        std::to_string(i) + " in \"" + s + "\"");
        }
        i += end;
        return v;
    }
    int read_int() {
        double v = read_real();
        return static_cast<int>(v);
    }
};

} // namespace

LocalTerm term_from_text(const std::string& text) {
    LocalTerm term;
    Cursor c{text};
    if (c.done()) throw std::invalid_argument("term_from_text: empty input");
    c.skip_ws();
    if (text.substr(c.i) == "0") return term;
    while (true) {
        Monomial m;
        c.skip_ws();
        if (c.peek() == '(') {
            c.expect('(');
            double re = c.read_real();
            c.skip_ws();
            c.expect(',');
            double im = c.read_real();
            c.skip_ws();
            c.expect(')');
            m.coeff = cplx(re, im);
        } else {
            m.coeff = cplx(c.read_real(), 0.0);
        }
        c.skip_ws();
        if (c.peek() == '*') {
            c.expect('*');
            while (true) {
                c.skip_ws();
                char k = c.peek();
                if (k != 'c' && k != 'a') break;
                ++c.i;
                c.expect('(');
                int site = c.read_int();
                c.skip_ws();
                c.expect(')');
                m.factors.push_back({site, k == 'c'});
            }
        }
        term.monomials.push_back(std::move(m));
        if (c.done()) break;
        c.skip_ws();
        c.expect('+');
    }
    return term;
}

} // namespace blochlab
