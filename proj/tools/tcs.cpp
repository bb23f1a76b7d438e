// Command-line front end: exact lattice arithmetic, Chern-class computation,
// the Fano class database, K3 matching certificates, and the topology of the
// glued 7-manifolds.
//
// Exit codes: 0 success, 2 usage, 3 validation/input, 4 search exhausted,
// 5 certificate/check failure, 1 unexpected error.

#include "tcs/chern.hpp"
#include "tcs/fano.hpp"
#include "tcs/g2.hpp"
#include "tcs/lattice.hpp"
#include "tcs/matching.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using tcs::Int;
using json = tcs::json;

constexpr int kExitValidation = 3;
constexpr int kExitSearch = 4;
constexpr int kExitCheck = 5;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tcs::validation_error("cannot open '" + path + "'");
    json j;
    in >> j;
    return j;
}

std::vector<tcs::PolarizedFanoClass> load_db(const std::string& db_path) {
    if (db_path.empty()) return tcs::builtin_fano_classes();
    return tcs::load_fano_classes(read_json_file(db_path));
}

std::vector<Int> parse_degrees(const std::string& csv) {
    std::vector<Int> out;
    if (csv.empty()) return out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

struct HintEntry {
    std::string fano1, fano2;
    std::optional<Int> span_rank;
    tcs::EmbeddingHint hint1, hint2;
};

std::vector<HintEntry> load_hints(const std::string& path) {
    const json doc = read_json_file(path);
    std::vector<HintEntry> out;
    for (const auto& e : doc.at("entries")) {
        HintEntry h;
        h.fano1 = e.at("fano1").get<std::string>();
        h.fano2 = e.at("fano2").get<std::string>();
        if (e.contains("span_rank")) h.span_rank = e.at("span_rank").get<Int>();
        h.hint1.images = e.at("emb1_images").get<std::vector<std::vector<Int>>>();
        h.hint2.images = e.at("emb2_images").get<std::vector<std::vector<Int>>>();
        out.push_back(std::move(h));
    }
    return out;
}

std::string signature_text(const tcs::Signature& s) {
    std::string out = "(" + std::to_string(s.p) + "," + std::to_string(s.q);
    if (s.z != 0) out += "," + std::to_string(s.z);
    return out + ")";
}

void print_invariants(const tcs::G2Invariants& inv, bool as_json) {
    if (as_json) {
        std::cout << tcs::invariants_to_json(inv).dump(2) << "\n";
        return;
    }
    std::cout << "b1 = " << inv.b1 << "\n"
              << "b2 = " << inv.b2 << "\n"
              << "b3 = " << inv.b3 << "\n"
              << "pi1 trivial: " << (inv.pi1_trivial ? "yes" : "no") << "\n"
              << "H2 torsion-free: " << (inv.torsion_free_H2_known ? "yes" : "unknown") << "\n"
              << "span rank used: " << inv.span_rank_used << "\n"
              << "holonomy exactly G2: " << (inv.holonomy_exactly_g2 ? "yes" : "no") << "\n"
              << "note: " << inv.b2_rule << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-arithmetic toolkit: K3 lattice matching for twisted connected sums "
                 "and the topology of the resulting G2-manifolds"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    // lattice
    auto* lattice = app.add_subcommand("lattice", "Standard lattices and exact signatures");
    lattice->require_subcommand(1);
    std::string lat_name, lat_gram;
    auto* lat_show = lattice->add_subcommand("show", "Print a standard lattice");
    lat_show->add_option("--name", lat_name, "H, E8, minusE8, K3 or L0")->required();
    auto* lat_sig = lattice->add_subcommand("signature", "Exact signature (p,q[,z])");
    lat_sig->add_option("--name", lat_name, "standard lattice name");
    lat_sig->add_option("--gram", lat_gram, "inline Gram matrix, e.g. [[0,3],[3,2]]");

    // fano
    auto* fano = app.add_subcommand("fano", "Fano 3-fold class database");
    fano->require_subcommand(1);
    std::string db_path, fano_name;
    fano->add_option("--db", db_path, "database JSON (defaults to the built-in classes)");
    auto* fano_list = fano->add_subcommand("list", "List classes");
    auto* fano_show = fano->add_subcommand("show", "Show one class");
    fano_show->add_option("name", fano_name, "class name")->required();
    auto* fano_validate = fano->add_subcommand("validate", "Validate classes");
    fano_validate->add_option("name", fano_name, "class name (default: all)");

    // chern
    auto* chern = app.add_subcommand("chern", "Chern class of a complete intersection");
    Int ambient = 0;
    std::string degrees_csv;
    Int chern_b2 = 1;
    bool curve_mode = false;
    chern->add_option("--ambient", ambient, "projective ambient dimension n")->required();
    chern->add_option("--degrees", degrees_csv, "hypersurface degrees, comma separated");
    chern->add_option("--b2", chern_b2, "second Betti number (default 1, by Lefschetz)");
    chern->add_flag("--curve", curve_mode, "treat the intersection as a curve");

    // match
    auto* match = app.add_subcommand("match", "Build / verify matching certificates");
    match->require_subcommand(1);
    auto* match_build = match->add_subcommand("build", "Construct a certificate");
    std::string fano1, fano2, hints_path, out_path = "out.json";
    Int radius = 8;
    std::optional<Int> span_rank;
    match_build->add_option("--fano1", fano1, "first class name")->required();
    match_build->add_option("--fano2", fano2, "second class name")->required();
    match_build->add_option("--span-rank", span_rank, "required span rank");
    match_build->add_option("--radius", radius, "search radius (default 8)");
    match_build->add_option("--hints", hints_path, "embedding hints JSON");
    match_build->add_option("--db", db_path, "database JSON");
    match_build->add_option("--out", out_path, "certificate output path (default out.json)");
    auto* match_verify = match->add_subcommand("verify", "Re-check a certificate");
    std::string cert_path;
    match_verify->add_option("cert", cert_path, "certificate JSON")->required();
    match_verify->add_option("--db", db_path, "database JSON");

    // invariants
    auto* invariants = app.add_subcommand("invariants", "Topology of the glued 7-manifold");
    invariants->add_option("--cert", cert_path, "certificate JSON")->required();
    invariants->add_option("--db", db_path, "database JSON");

    // geography
    auto* geography = app.add_subcommand("geography", "Sweep all pairs and tabulate (b2, b3)");
    std::string geo_out, cert_dir;
    geography->add_option("--db", db_path, "database JSON");
    geography->add_option("--radius", radius, "search radius (default 8)");
    geography->add_option("--hints", hints_path, "embedding hints JSON");
    geography->add_option("--cert-dir", cert_dir, "directory for certificate files");
    geography->add_option("--out", geo_out, "CSV output path (default stdout)");

    // let a trailing --format reach the top-level option from any subcommand
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 2;
    }
    const bool as_json = format == "json";

    try {
        if (lat_show->parsed()) {
            auto l = tcs::standard_lattice(lat_name);
            if (as_json) {
                std::cout << tcs::lattice_to_json(*l).dump(2) << "\n";
            } else {
                std::cout << l->label << ": rank " << l->rank() << ", signature "
                          << signature_text(tcs::signature(*l)) << ", "
                          << (l->is_even() ? "even" : "odd") << ", det "
                          << tcs::gram_determinant(*l) << "\n";
                for (std::size_t i = 0; i < l->rank(); ++i) {
                    for (std::size_t j = 0; j < l->rank(); ++j)
                        std::cout << (j ? " " : "") << l->gram(i, j);
                    std::cout << "\n";
                }
            }
        } else if (lat_sig->parsed()) {
            tcs::Signature sig;
            if (!lat_name.empty()) {
                sig = tcs::signature(*tcs::standard_lattice(lat_name));
            } else if (!lat_gram.empty()) {
                auto g = tcs::lattice_from_json(
                    json{{"label", "inline"}, {"gram", json::parse(lat_gram)}});
                sig = tcs::signature(g);
            } else {
                std::cerr << "signature needs --name or --gram\n";
                return 2;
            }
            if (as_json)
                std::cout << json{{"p", sig.p}, {"q", sig.q}, {"z", sig.z}}.dump() << "\n";
            else
                std::cout << signature_text(sig) << "\n";
        } else if (fano_list->parsed()) {
            auto db = load_db(db_path);
            if (as_json) {
                json arr = json::array();
                for (const auto& rec : db) arr.push_back(tcs::fano_class_to_json(rec));
                std::cout << arr.dump(2) << "\n";
            } else {
                std::cout << "name      b2  b3   -K^3  genus  kahler^2\n";
                for (const auto& rec : db) {
                    std::ostringstream os;
                    os << rec.name;
                    std::cout << os.str() << std::string(10 - std::min<std::size_t>(10, os.str().size()), ' ')
                              << rec.b2 << "   " << rec.b3 << "   " << rec.minus_K_cubed << "   "
                              << rec.genus << "   " << rec.kahler_square << "\n";
                }
            }
        } else if (fano_show->parsed()) {
            auto db = load_db(db_path);
            const auto& rec = tcs::find_fano_class(db, fano_name);
            if (as_json) {
                std::cout << tcs::fano_class_to_json(rec).dump(2) << "\n";
            } else {
                std::cout << rec.name << ": b2 " << rec.b2 << ", b3 " << rec.b3 << ", -K^3 "
                          << rec.minus_K_cubed << ", genus " << rec.genus << ", kahler^2 "
                          << rec.kahler_square << "\n"
                          << "H^3 vanishes: " << (rec.torsion_free_H3 ? "yes" : "no") << "\n"
                          << "polarization Gram:\n";
                for (std::size_t i = 0; i < rec.polarization.rows; ++i) {
                    for (std::size_t j = 0; j < rec.polarization.cols; ++j)
                        std::cout << (j ? " " : "  ") << rec.polarization(i, j);
                    std::cout << "\n";
                }
                std::cout << "notes: " << rec.provenance.notes << "\n";
            }
        } else if (fano_validate->parsed()) {
            auto db = load_db(db_path);
            bool all_ok = true;
            for (const auto& rec : db) {
                if (!fano_name.empty() && rec.name != fano_name) continue;
                auto rep = tcs::validate_fano_class(rec);
                all_ok = all_ok && rep.ok();
                std::cout << rep.to_string();
            }
            if (!all_ok) return kExitValidation;
        } else if (chern->parsed()) {
            const auto degrees = parse_degrees(degrees_csv);
            if (curve_mode) {
                auto c = tcs::curve_euler(ambient, degrees);
                if (as_json) {
                    std::cout << json{{"c", c.series.coefficients()},
                                      {"degree", c.degree},
                                      {"chi", c.chi}}
                                     .dump(2)
                              << "\n";
                } else {
                    std::cout << "c = " << c.series.to_string() << "\n"
                              << "degree = " << c.degree << "\n"
                              << "chi = " << c.chi << "\n";
                }
            } else {
                auto c = tcs::chern_complete_intersection(ambient, degrees);
                auto inv = tcs::euler_and_betti(c.series, c.degree, chern_b2);
                if (as_json) {
                    std::cout << json{{"c", c.series.coefficients()}, {"degree", c.degree},
                                      {"chi", inv.chi},          {"b2", inv.b2},
                                      {"b3", inv.b3},            {"minus_K_cubed", inv.minus_K_cubed},
                                      {"genus", inv.genus}}
                                     .dump(2)
                              << "\n";
                } else {
                    std::cout << "c = " << c.series.to_string() << "\n"
                              << "degree = " << c.degree << "\n"
                              << "chi = " << inv.chi << "\n"
                              << "b2 = " << inv.b2 << " (supplied)\n"
                              << "b3 = " << inv.b3 << "\n"
                              << "-K^3 = " << inv.minus_K_cubed << "\n"
                              << "genus = " << inv.genus << "\n";
                }
            }
        } else if (match_build->parsed()) {
            auto db = load_db(db_path);
            const auto& rec1 = tcs::find_fano_class(db, fano1);
            const auto& rec2 = tcs::find_fano_class(db, fano2);
            tcs::MatchConfig mc;
            mc.radius = radius;
            mc.target_span_rank = span_rank;
            if (!hints_path.empty()) {
                for (const auto& h : load_hints(hints_path)) {
                    if (h.fano1 != fano1 || h.fano2 != fano2) continue;
                    if (span_rank && h.span_rank && *h.span_rank != *span_rank) continue;
                    mc.hint1 = h.hint1;
                    mc.hint2 = h.hint2;
                    break;
                }
            }
            auto cert = tcs::build_matching(rec1, rec2, mc);
            const json cj = tcs::certificate_to_json(cert);
            std::ofstream out(out_path);
            if (!out) throw tcs::validation_error("cannot write '" + out_path + "'");
            out << cj.dump(2) << "\n";
            if (as_json) {
                std::cout << cj.dump(2) << "\n";
            } else {
                std::cout << "certificate written to " << out_path << "\n"
                          << "span rank: " << cert.span_rank << "\n"
                          << "kappa squares: " << cert.kappa1_square << ", " << cert.kappa2_square
                          << ", kappaK " << cert.kappaK_square << "\n"
                          << "strict cross-orthogonality: "
                          << (cert.strict_orthogonality ? "yes" : "no") << "\n";
            }
        } else if (match_verify->parsed()) {
            auto db = load_db(db_path);
            const json cj = read_json_file(cert_path);
            const auto& rec1 = tcs::find_fano_class(db, cj.at("fano1").get<std::string>());
            const auto& rec2 = tcs::find_fano_class(db, cj.at("fano2").get<std::string>());
            auto cert = tcs::certificate_from_json(cj, rec1, rec2);
            auto rep = tcs::verify_certificate(cert, rec1, rec2);
            std::cout << rep.to_string();
            if (!rep.ok) return kExitCheck;
        } else if (invariants->parsed()) {
            auto db = load_db(db_path);
            const json cj = read_json_file(cert_path);
            const auto& rec1 = tcs::find_fano_class(db, cj.at("fano1").get<std::string>());
            const auto& rec2 = tcs::find_fano_class(db, cj.at("fano2").get<std::string>());
            auto cert = tcs::certificate_from_json(cj, rec1, rec2);
            auto rep = tcs::verify_certificate(cert, rec1, rec2);
            if (!rep.ok) {
                std::cerr << "certificate failed verification:\n" << rep.to_string();
                return kExitCheck;
            }
            auto inv = tcs::invariants_of_M(cert, rec1, rec2);
            print_invariants(inv, as_json);
            if (!as_json && (rec1.b2 == 1 || rec2.b2 == 1)) {
                const Int predicted = rec1.b2 == 1 ? tcs::theorem_b3_check(rec1, rec2)
                                                   : tcs::theorem_b3_check(rec2, rec1);
                std::cout << "closed-form b3 cross-check: " << predicted << "\n";
            }
        } else if (geography->parsed()) {
            auto db = load_db(db_path);
            tcs::GeographyConfig gc;
            gc.radius = radius;
            if (!cert_dir.empty()) gc.certificate_dir = cert_dir;
            if (!hints_path.empty()) {
                for (const auto& h : load_hints(hints_path)) {
                    if (!h.span_rank) continue;
                    gc.hints[{h.fano1, h.fano2, *h.span_rank}] = {h.hint1, h.hint2};
                }
            }
            const auto rows = tcs::geography(db, gc);
            const std::string csv = tcs::geography_csv(rows);
            if (geo_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(geo_out);
                if (!out) throw tcs::validation_error("cannot write '" + geo_out + "'");
                out << csv;
                std::cout << "wrote " << rows.size() << " rows to " << geo_out << "\n";
            }
        }
    } catch (const tcs::search_exhausted& e) {
        std::cerr << "search exhausted: " << e.what() << "\n";
        return kExitSearch;
    } catch (const tcs::match_error& e) {
        std::cerr << "matching failed: " << e.what() << "\n";
        return e.step == "verification" ? kExitCheck : kExitSearch;
    } catch (const tcs::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
