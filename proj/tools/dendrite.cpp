// Command line for polygonal tree systems: validation, refinement renders,
// main-tree exports, metric and order reports, morphism checks.
//
// Exit codes: 0 success, 1 domain failure (rejected system, non-equivalent
// pair, point off the attractor), 2 usage / IO / parse errors.

#include <dendrite/io.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw dendrite::ParseError("cannot write " + out_path);
    out << text;
}

struct CommonArgs {
    int depth = 6;
    int samples = 1000;
    uint64_t seed = 1;
    int threads = 1;
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--depth", args.depth, "refinement depth")->check(CLI::NonNegativeNumber);
    cmd->add_option("--samples", args.samples, "sample count for empirical checks")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args.seed, "seed for sampled checks");
    cmd->add_option("--threads", args.threads, "max worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-similar dendrites from polygonal tree systems"};
    app.require_subcommand(1);

    std::string spec_path, spec_path2, point_arg;
    CommonArgs args;
    dendrite::RenderOptions ropt;
    std::string csv_path;
    bool search_perms = false;

    CLI::App* c_validate = app.add_subcommand("validate", "check the axioms of a spec file");
    c_validate->add_option("spec", spec_path, "system spec file")->required();
    add_common(c_validate, args);

    CLI::App* c_render = app.add_subcommand("render", "render the refinement as SVG");
    c_render->add_option("spec", spec_path, "system spec file")->required();
    add_common(c_render, args);
    c_render->add_option("--width", ropt.width, "SVG width in pixels");
    c_render->add_option("--height", ropt.height, "SVG height in pixels");
    c_render->add_flag("--tree", ropt.tree, "overlay the main tree");
    c_render->add_flag("--marks", ropt.marks, "mark ramification points");
    c_render->add_flag("--cells,!--no-cells", ropt.cells, "draw refinement cells");
    c_render->add_option("--csv", csv_path, "also dump the cells as CSV here");

    CLI::App* c_tree = app.add_subcommand("tree", "export the main-tree skeleton as JSON");
    c_tree->add_option("spec", spec_path, "system spec file")->required();
    add_common(c_tree, args);

    CLI::App* c_orders = app.add_subcommand("orders", "vertex fibers, branch degrees and caps");
    c_orders->add_option("spec", spec_path, "system spec file")->required();
    add_common(c_orders, args);

    CLI::App* c_metrics = app.add_subcommand("metrics", "metric constants and bounded turning");
    c_metrics->add_option("spec", spec_path, "system spec file")->required();
    add_common(c_metrics, args);

    CLI::App* c_morphism = app.add_subcommand("morphism", "combinatorial equivalence of two systems");
    c_morphism->add_option("spec", spec_path, "first system")->required();
    c_morphism->add_option("spec2", spec_path2, "second system")->required();
    add_common(c_morphism, args);
    c_morphism->add_flag("--search-permutations", search_perms,
                         "try all vertex relabelings of the second system");

    CLI::App* c_map = app.add_subcommand("map-point", "carry a point through the conjugacy");
    c_map->add_option("spec", spec_path, "first system")->required();
    c_map->add_option("spec2", spec_path2, "second system")->required();
    c_map->add_option("--point", point_arg, "point as x,y")->required();
    add_common(c_map, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_validate->parsed()) {
            dendrite::PolygonalTreeSystem sys = dendrite::load_system(spec_path);
            dendrite::ValidationReport rep = dendrite::validate(sys);
            write_output(dendrite::dump_json(dendrite::validation_json(sys, rep)), args.out);
            return rep.accepted() ? kExitOk : kExitDomain;
        }
        if (c_render->parsed()) {
            dendrite::PolygonalTreeSystem sys = dendrite::load_system(spec_path);
            ropt.depth = args.depth;
            if (!csv_path.empty()) {
                std::vector<dendrite::Cell> cells = dendrite::refine(sys, ropt.depth);
                write_output(dendrite::cells_csv(cells, sys.map_count()), csv_path);
            }
            write_output(dendrite::render_svg(sys, ropt), args.out);
            return kExitOk;
        }
        if (c_tree->parsed()) {
            dendrite::PolygonalTreeSystem sys = dendrite::load_system(spec_path);
            dendrite::Multizipper mz = dendrite::build_multizipper(sys);
            dendrite::SkeletonTree sk = dendrite::skeleton_tree(mz, args.depth);
            dendrite::SkeletonTree finer = dendrite::skeleton_tree(mz, args.depth + 1);
            auto rams = dendrite::main_ramification_points(mz, std::max(1, args.depth));
            write_output(dendrite::dump_json(dendrite::tree_json(sys, sk, finer, rams)), args.out);
            return kExitOk;
        }
        if (c_orders->parsed()) {
            dendrite::PolygonalTreeSystem sys = dendrite::load_system(spec_path);
            dendrite::Multizipper mz = dendrite::build_multizipper(sys);
            dendrite::OrderReport rep = dendrite::order_bounds(sys, mz, args.depth);
            write_output(dendrite::dump_json(dendrite::orders_json(sys, rep)), args.out);
            return kExitOk;
        }
        if (c_metrics->parsed()) {
            dendrite::PolygonalTreeSystem sys = dendrite::load_system(spec_path);
            dendrite::MetricConstants mc = dendrite::metric_constants(sys);
            dendrite::OrderCaps caps =
                dendrite::order_caps(sys.vertex_count(), mc.theta_min, mc.theta_max);
            dendrite::Multizipper mz = dendrite::build_multizipper(sys);
            dendrite::SkeletonTree sk = dendrite::skeleton_tree(mz, args.depth);
            dendrite::BtSample bt = dendrite::empirical_bt(sk, args.samples, args.seed, sys.eps());
            write_output(dendrite::dump_json(dendrite::metrics_json(sys, mc, caps, &bt, args.depth,
                                                                    args.samples, args.seed)),
                         args.out);
            return kExitOk;
        }
        if (c_morphism->parsed()) {
            dendrite::PolygonalTreeSystem a = dendrite::load_system(spec_path);
            dendrite::PolygonalTreeSystem b = dendrite::load_system(spec_path2);
            dendrite::EquivalenceResult eq = search_perms
                                                 ? dendrite::check_equivalence_permuted(a, b)
                                                 : dendrite::check_equivalence(a, b);
            nlohmann::json out;
            if (eq.equivalent && !eq.permutation) {
                dendrite::HolderCertificate h = dendrite::holder_certificate(a, b);
                // Sampled conjugacy residuals over skeleton points of `a`.
                dendrite::Multizipper mz = dendrite::build_multizipper(a);
                dendrite::SkeletonTree sk =
                    dendrite::skeleton_tree(mz, std::max(1, std::min(args.depth, 8)));
                std::vector<dendrite::Point> pool;
                for (const auto& nd : sk.nodes)
                    if (nd.kind != dendrite::SkeletonTree::NodeKind::CellHub)
                        pool.push_back(nd.pos);
                std::mt19937_64 rng(args.seed);
                double bound = std::pow(b.max_ratio(), args.depth) * b.diameter();
                double worst = 0.0;
                int n_res = std::min<int>(args.samples, 200);
                for (int s = 0; s < n_res; ++s) {
                    dendrite::Point p = pool[static_cast<size_t>(rng() % pool.size())];
                    for (int k = 0; k < a.map_count(); ++k) {
                        dendrite::Point lhs =
                            dendrite::conjugate_point(a, b, a.maps[static_cast<size_t>(k)](p),
                                                      args.depth)
                                .image;
                        dendrite::Point rhs = b.maps[static_cast<size_t>(k)](
                            dendrite::conjugate_point(a, b, p, args.depth).image);
                        worst = std::max(worst, dendrite::dist(lhs, rhs));
                    }
                }
                nlohmann::json residuals = {{"depth", args.depth},
                                            {"samples", n_res},
                                            {"seed", args.seed},
                                            {"max_residual", worst},
                                            {"bound", 2.0 * bound}};
                out = dendrite::morphism_json(eq, &h, &residuals);
            } else if (eq.equivalent) {
                dendrite::HolderCertificate h = dendrite::holder_certificate(a, b);
                out = dendrite::morphism_json(eq, &h, nullptr);
            } else {
                out = dendrite::morphism_json(eq, nullptr, nullptr);
            }
            write_output(dendrite::dump_json(out), args.out);
            return eq.equivalent ? kExitOk : kExitDomain;
        }
        if (c_map->parsed()) {
            dendrite::PolygonalTreeSystem a = dendrite::load_system(spec_path);
            dendrite::PolygonalTreeSystem b = dendrite::load_system(spec_path2);
            size_t comma = point_arg.find(',');
            if (comma == std::string::npos)
                throw dendrite::ParseError("--point: expected x,y");
            dendrite::Point p{std::stod(point_arg.substr(0, comma)),
                              std::stod(point_arg.substr(comma + 1))};
            dendrite::EquivalenceResult eq = dendrite::check_equivalence(a, b);
            if (!eq.equivalent)
                throw dendrite::Error("map-point: systems are not combinatorially equivalent (" +
                                      eq.diagnostic + ")");
            dendrite::ConjugatePoint cp = dendrite::conjugate_point(a, b, p, args.depth);
            nlohmann::json j;
            j["point"] = dendrite::json_point(p);
            j["image"] = dendrite::json_point(cp.image);
            j["error_bound"] = cp.error_bound;
            j["address"] = dendrite::address_string(cp.address, a.map_count());
            write_output(dendrite::dump_json(j), args.out);
            return kExitOk;
        }
    } catch (const dendrite::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const dendrite::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
