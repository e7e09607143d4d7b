#include "kms/cli.hpp"

#include "kms/borderline.hpp"
#include "kms/classification.hpp"
#include "kms/core.hpp"
#include "kms/figures.hpp"
#include "kms/oracle.hpp"
#include "kms/singularities.hpp"
#include "kms/spectral.hpp"
#include "kms/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace kms::cli {

namespace {

using ojson = nlohmann::ordered_json;

EigType to_type(int t) { return t == 1 ? EigType::Type1 : EigType::Type2; }

// Bind the output stream: --out path when given, otherwise the default.
std::ostream& sink(std::ofstream& file, const std::string& path, std::ostream& fallback) {
    if (path.empty()) return fallback;
    file.open(path, std::ios::binary);
    if (!file) throw domain_error("cannot open output file: " + path);
    return file;
}

void emit_curve_csv(const TracedCurve& c, std::ostream& os) {
    if (c.samples.empty()) throw domain_error("refusing to emit an empty trace");
    os << "u,v,re_rho,im_rho,re_lambda,im_lambda,re_drho,im_drho\n";
    for (const auto& s : c.samples)
        os << format_double(s.u) << ',' << format_double(s.v) << ','
           << format_double(s.rho.real()) << ',' << format_double(s.rho.imag()) << ','
           << format_double(s.lambda.real()) << ',' << format_double(s.lambda.imag()) << ','
           << format_double(s.drho_du.real()) << ',' << format_double(s.drho_du.imag()) << '\n';
}

const char* class_name(EigClass c) {
    switch (c) {
    case EigClass::Ordinary: return "ordinary";
    case EigClass::Borderline: return "borderline";
    default: return "extraordinary";
    }
}

ojson cusp_json(const CuspReport& c) {
    ojson j;
    j["u0"] = c.u0;
    j["rho0"] = format_complex(c.rho0);
    j["lambda0"] = format_complex(c.lambda0);
    j["eta_abs"] = c.eta_abs;
    j["psi"] = c.psi;
    j["bisector_angle"] = c.bisector_angle;
    j["outward_angle"] = outward_bisector_angle(c);
    j["residuals"] = {{"drho", c.residuals.curve_derivative},
                      {"pair_condition", c.residuals.double_condition},
                      {"oracle", c.residuals.oracle_double}};
    return j;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eigenvalue geometry of the matrices [rho^|j-k|]", "kms"};
    app.require_subcommand(1);
    int exit_code = 0;

    // trace
    auto* trace = app.add_subcommand("trace", "Sample a borderline curve as CSV");
    int tr_n = 0, tr_type = 1, tr_samples = 2048;
    std::string tr_out;
    trace->add_option("--n", tr_n, "matrix dimension")->required();
    trace->add_option("--type", tr_type, "eigenvalue family")->required()->check(CLI::Range(1, 2));
    trace->add_option("--samples", tr_samples, "base grid size");
    trace->add_option("--out", tr_out, "output file (default stdout)");
    trace->callback([&] {
        TracedCurve c = trace_curve(tr_n, to_type(tr_type), tr_samples);
        std::ofstream f;
        emit_curve_csv(c, sink(f, tr_out, out));
    });

    // cusps
    auto* cusps = app.add_subcommand("cusps", "Locate the cusps of a borderline curve");
    int cu_n = 0, cu_type = 1;
    bool cu_json = false;
    cusps->add_option("--n", cu_n, "matrix dimension")->required();
    cusps->add_option("--type", cu_type, "eigenvalue family")->required()->check(CLI::Range(1, 2));
    cusps->add_flag("--json", cu_json, "emit a JSON array");
    cusps->callback([&] {
        auto reports = find_cusps(cu_n, to_type(cu_type));
        if (cu_json) {
            ojson arr = ojson::array();
            for (const auto& c : reports) arr.push_back(cusp_json(c));
            out << arr.dump() << '\n';
        } else {
            for (const auto& c : reports)
                out << "u0=" << format_double(c.u0) << " rho0=" << format_complex(c.rho0)
                    << " lambda0=" << format_complex(c.lambda0)
                    << " |eta0|=" << format_double(c.eta_abs)
                    << " psi=" << format_double(c.psi)
                    << " bisector=" << format_double(c.bisector_angle) << '\n';
        }
    });

    // classify
    auto* classify = app.add_subcommand("classify", "Count extraordinary eigenvalues per type");
    int cl_n = 0;
    std::string cl_rho;
    double cl_tol = 1e-6;
    classify->add_option("--n", cl_n, "matrix dimension")->required();
    classify->add_option("--rho", cl_rho, "complex parameter, e.g. 1.2 or 0.5-2i")->required();
    classify->add_option("--tol", cl_tol, "on-curve band half-width");
    classify->callback([&] {
        cplx rho = parse_complex(cl_rho);
        TracedCurve c1 = trace_curve(cl_n, EigType::Type1);
        TracedCurve c2 = trace_curve(cl_n, EigType::Type2);
        auto label = count_extraordinary(rho, c1, c2, cl_tol);
        bool onc = membership(rho, c1, cl_tol) == Membership::OnCurve ||
                   membership(rho, c2, cl_tol) == Membership::OnCurve;
        out << "{\"j1\":" << label[0] << ",\"j2\":" << label[1]
            << (onc ? ",\"on_curve\":true" : "") << "}\n";
    });

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Typed, classified spectrum report");
    int sp_n = 0;
    std::string sp_rho;
    bool sp_raw = false;
    spectrum->add_option("--n", sp_n, "matrix dimension")->required();
    spectrum->add_option("--rho", sp_rho, "complex parameter")->required();
    spectrum->add_flag("--raw-roots", sp_raw, "include unclustered eigenvalues");
    spectrum->callback([&] {
        cplx rho = parse_complex(sp_rho);
        SpectrumReport rep = full_spectrum(sp_n, rho);
        ojson j;
        j["n"] = rep.n;
        j["rho"] = format_complex(rep.rho);
        j["entries"] = ojson::array();
        for (const auto& e : rep.entries)
            j["entries"].push_back({{"value", format_complex(e.value)},
                                    {"multiplicity", e.multiplicity},
                                    {"type", type_index(e.type) + 1},
                                    {"class", class_name(e.cls)}});
        if (sp_raw) {
            auto raw = dense_eigs(build_kms(sp_n, rho));
            std::sort(raw.begin(), raw.end(), [](cplx a, cplx b) {
                return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
            j["raw_roots"] = ojson::array();
            for (cplx z : raw) j["raw_roots"].push_back(format_complex(z));
        }
        out << j.dump() << '\n';
    });

    // scan
    auto* scan = app.add_subcommand("scan", "March a path and track the near-borderline pair");
    int sc_n = 0, sc_type = 1, sc_steps = 0;
    std::string sc_start, sc_dir, sc_out;
    double sc_from = 0.0, sc_to = 0.0;
    scan->add_option("--n", sc_n, "matrix dimension")->required();
    scan->add_option("--type", sc_type, "eigenvalue family")->required()->check(CLI::Range(1, 2));
    scan->add_option("--start", sc_start, "path origin (complex)")->required();
    scan->add_option("--dir", sc_dir, "complex direction, or 'bisector' for the nearest cusp ray")
        ->required();
    scan->add_option("--from", sc_from, "lower offset")->required();
    scan->add_option("--to", sc_to, "upper offset")->required();
    scan->add_option("--steps", sc_steps, "sample count")->required();
    scan->add_option("--out", sc_out, "output file (default stdout)");
    scan->callback([&] {
        cplx start = parse_complex(sc_start);
        cplx dir;
        if (sc_dir == "bisector") {
            auto reports = find_cusps(sc_n, to_type(sc_type));
            if (reports.empty())
                throw domain_error("no cusp available to orient the scan direction");
            const CuspReport* best = &reports.front();
            for (const auto& c : reports)
                if (std::abs(c.rho0 - start) < std::abs(best->rho0 - start)) best = &c;
            dir = std::polar(1.0, outward_bisector_angle(*best));
        } else {
            dir = parse_complex(sc_dir);
        }
        ScanResult r = scan_path(sc_n, to_type(sc_type), start, dir, sc_from, sc_to, sc_steps);
        std::ofstream f;
        std::ostream& os = sink(f, sc_out, out);
        os << "d,mag_a,mag_b,re_a,im_a,re_b,im_b\n";
        for (size_t k = 0; k < r.distances.size(); ++k)
            os << format_double(r.distances[k]) << ',' << format_double(r.pair_magnitudes[k][0])
               << ',' << format_double(r.pair_magnitudes[k][1]) << ','
               << format_double(r.pair_values[k][0].real()) << ','
               << format_double(r.pair_values[k][0].imag()) << ','
               << format_double(r.pair_values[k][1].real()) << ','
               << format_double(r.pair_values[k][1].imag()) << '\n';
    });

    // regions
    auto* regions = app.add_subcommand("regions", "Label the connected components off the curves");
    int rg_n = 0, rg_res = 128;
    regions->add_option("--n", rg_n, "matrix dimension")->required();
    regions->add_option("--resolution", rg_res, "grid cells per axis");
    regions->callback([&] {
        ojson arr = ojson::array();
        for (const auto& r : region_labels(rg_n, rg_res))
            arr.push_back({{"representative", format_complex(r.representative)},
                           {"j1", r.label[0]},
                           {"j2", r.label[1]}});
        out << arr.dump() << '\n';
    });

    // verify
    auto* verify = app.add_subcommand("verify", "Run the built-in invariant suites");
    std::string vf_suite;
    verify->add_option("--suite", vf_suite, "core|curves|cusps|classify|oracle|all")
        ->required()
        ->check(CLI::IsMember({"core", "curves", "cusps", "classify", "oracle", "all"}));
    verify->callback([&] {
        auto results = run_suite(vf_suite);
        int failed = 0;
        for (const auto& r : results) {
            if (r.pass) {
                out << "ok   " << r.name << '\n';
            } else {
                ++failed;
                out << "FAIL " << r.name << ": " << r.detail << '\n';
            }
        }
        out << results.size() << " checks, " << failed << " failed\n";
        if (failed > 0) exit_code = 1;
    });

    // figure
    auto* figure = app.add_subcommand("figure", "Emit a deterministic SVG plot");
    std::string fg_id, fg_out;
    int fg_n = 0, fg_type = 1;
    figure->add_option("--id", fg_id, "curves|phase|parabola|bifurcation")
        ->required()
        ->check(CLI::IsMember({"curves", "phase", "parabola", "bifurcation"}));
    figure->add_option("--n", fg_n, "matrix dimension")->required();
    figure->add_option("--type", fg_type, "eigenvalue family")->check(CLI::Range(1, 2));
    figure->add_option("--out", fg_out, "output file (default stdout)");
    figure->callback([&] {
        std::ofstream f;
        emit_figure(FigureSpec{fg_id, fg_n, to_type(fg_type)}, sink(f, fg_out, out));
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}

} // namespace kms::cli
