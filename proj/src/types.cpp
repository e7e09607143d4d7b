#include "kms/types.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace kms {

std::string format_double(double x) {
    if (x == 0.0) x = 0.0; // normalize -0
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, p);
}

std::string format_complex(cplx z) {
    double re = z.real(), im = z.imag();
    if (im == 0.0) return format_double(re);
    std::string imag = format_double(im) + "i";
    if (re == 0.0) return imag;
    return format_double(re) + (im > 0.0 ? "+" : "") + imag;
}

namespace {

double parse_double_exact(std::string_view s) {
    if (s.empty()) throw parse_error("empty number");
    bool neg = false;
    if (s.front() == '+' || s.front() == '-') { // from_chars rejects leading '+'
        neg = s.front() == '-';
        s.remove_prefix(1);
        if (s.empty()) throw parse_error("sign without digits");
    }
    double v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw parse_error("bad number: '" + std::string(s) + "'");
    if (!std::isfinite(v)) throw parse_error("non-finite number");
    return neg ? -v : v;
}

// "" -> 1, "+" -> 1, "-" -> -1 (for bare "i", "+i", "-i"), otherwise a number.
double parse_imag_magnitude(std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double_exact(s);
}

} // namespace

cplx parse_complex(const std::string& text) {
    std::string_view s(text);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) throw parse_error("empty complex literal");

    if (s.back() != 'i' && s.back() != 'I')
        return cplx(parse_double_exact(s), 0.0);

    s.remove_suffix(1);
    // Split at the last '+'/'-' that is not an exponent sign and not leading.
    size_t split = std::string_view::npos;
    for (size_t k = s.size(); k-- > 1;) {
        char c = s[k];
        if ((c == '+' || c == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos)
        return cplx(0.0, parse_imag_magnitude(s));
    double re = parse_double_exact(s.substr(0, split));
    double im = parse_imag_magnitude(s.substr(split));
    return cplx(re, im);
}

} // namespace kms
