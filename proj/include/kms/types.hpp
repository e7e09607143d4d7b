#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace kms {

using cplx = std::complex<double>;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_dimension : error { using error::error; };
struct parse_error : error { using error::error; };
struct pole_error : error { using error::error; };
struct excluded_rho : error { using error::error; };
struct domain_error : error { using error::error; };
struct on_curve_error : error { using error::error; };
struct empty_pair_error : error { using error::error; };
struct insufficient_samples : error { using error::error; };
struct ambiguous_region : error { using error::error; };
struct ambiguous_type : error { using error::error; };
struct non_convergence : error { using error::error; };
struct overflow_limit : error { using error::error; };

// Matrix dimension, n >= 2 everywhere in this library.
class Dimension {
public:
    Dimension(int n) : n_(n) {
        if (n < 2) throw invalid_dimension("dimension must be at least 2, got " + std::to_string(n));
    }
    int value() const { return n_; }
    operator int() const { return n_; }

private:
    int n_;
};

enum class EigType : int { Type1 = 1, Type2 = 2 };

inline int type_index(EigType t) { return t == EigType::Type1 ? 0 : 1; }

// Position of an eigenvalue relative to the circle |lambda| = n.
enum class EigClass { Ordinary, Borderline, Extraordinary };

// Shortest decimal form that parses back to the identical double.
std::string format_double(double x);

// "a+bi" / "a-bi"; pure real prints as "a", pure imaginary as "bi".
std::string format_complex(cplx z);

// Accepts "a", "bi", "a+bi", "a-bi", bare "i"/"-i", scientific notation in
// either part. Throws parse_error on anything else (including non-finite).
cplx parse_complex(const std::string& text);

} // namespace kms
