#pragma once

#include "kms/types.hpp"

#include <iosfwd>
#include <string>

namespace kms {

// id: "curves"  — both borderline curves with region labels
//     "phase"   — arg(b(u)) over u with discontinuity markers
//     "parabola"— curve near its real-axis vertex with the local parabola
//     "bifurcation" — |lambda| pair along the outward cusp ray
struct FigureSpec {
    std::string id;
    int n = 0;
    EigType type = EigType::Type1;
};

void emit_figure(const FigureSpec& spec, std::ostream& out);

} // namespace kms
