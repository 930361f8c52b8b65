// Command-line driver: generate, analyze, bench, solve-poisson, spectrum.
// Exit codes: 0 success, 2 usage or constraint error, 3 numerical failure.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "nodegen/bench.hpp"
#include "nodegen/config.hpp"
#include "nodegen/nodefile.hpp"
#include "nodegen/quality.hpp"
#include "nodegen/rbffd.hpp"
#include "nodegen/runner.hpp"

using nlohmann::json;
using namespace nodegen;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct GenerateArgs {
    std::string alg = "pnp";
    std::string domain;
    std::string h;
    int dim = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string strategy = "randomized-pattern";
    int n = 0;
    int k = 0;
    std::size_t nmax = 10'000'000;
    double eps = 1e-10;
    int ff_n = 5;
    int skf_n = 15;
    std::string seeds = "boundary";  // boundary | random
    std::string output = "nodes.csv";
};

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Relative outputs land in $NODEGEN_OUT when it is set.
std::string resolve_output(const std::string& path) {
    const char* base = std::getenv("NODEGEN_OUT");
    if (!base || !*base) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base) / p).string();
}

template <std::size_t d>
int do_generate(const GenerateArgs& args, const DomainSpec& dspec, const SpacingSpec& hspec,
                std::uint64_t seed) {
    Domain<d> domain = dspec.build<d>();
    SpacingField<d> h = hspec.build<d>();

    RunParams params;
    params.pnp.strategy = strategy_for(d, args.strategy, args.n, args.k);
    params.pnp.max_nodes = args.nmax;
    params.pnp.proximity_tolerance = args.eps;
    params.ff_n = args.ff_n;
    params.skf_n = args.skf_n;
    params.pnp_random_seed_node = args.seeds == "random";

    BoundaryDiscretization<d> boundary;
    if (!params.pnp_random_seed_node || args.alg == "ff" || args.alg == "skf")
        boundary = discretize_boundary(domain, h);

    RunOutput<d> run = run_algorithm<d>(args.alg, domain, h, boundary, params, seed);

    NodeFile file;
    file.set_points<d>(run.nodes);
    file.algorithm = args.alg;
    file.h_spec = hspec.to_string();
    file.domain_spec = dspec.to_string();
    file.seed = seed;
    file.seed_count = run.seed_count;
    if (run.has_fill_result) {
        file.truncated = run.fill.truncated;
        file.has_beta = true;
        file.beta = run.fill.predecessor;
        file.terminal = run.fill.terminal;
    }
    std::string out_path = resolve_output(args.output);
    write_node_file(out_path, file);

    json summary{{"N", run.nodes.size()},
                 {"time", run.seconds},
                 {"seed", seed},
                 {"seed_count", run.seed_count},
                 {"output", out_path}};
    if (run.nodes.size() >= 2)
        summary["min_spacing"] = min_pairwise_distance<d>(run.nodes).distance;
    if (run.has_fill_result) summary["truncated"] = run.fill.truncated;
    std::cout << summary.dump() << "\n";
    return 0;
}

struct AnalyzeArgs {
    std::string file;
    int c = 3;
    std::string margin = "2h";
    int bins = 40;
    std::string hist_out;
};

double parse_margin(const std::string& text, const SpacingSpec& hspec) {
    if (!text.empty() && text.back() == 'h') {
        double mult = text.size() == 1 ? 1.0 : std::stod(text.substr(0, text.size() - 1));
        if (!hspec.is_constant())
            throw std::invalid_argument("margin in units of h requires a constant-h node file");
        return mult * hspec.value;
    }
    return std::stod(text);
}

template <std::size_t d>
int do_analyze(const AnalyzeArgs& args, const NodeFile& file) {
    std::vector<Vec<d>> nodes = file.points<d>();
    std::vector<Vec<d>> boundary(nodes.begin(), nodes.begin() + static_cast<long>(file.seed_count));
    SpacingSpec hspec = SpacingSpec::parse(file.h_spec);
    double margin = parse_margin(args.margin, hspec);

    json report{{"file", args.file}, {"N", nodes.size()},       {"dim", d},
                {"algorithm", file.algorithm}, {"seed_count", file.seed_count}, {"margin", margin},
                {"c", args.c}};

    NeighborStats stats = neighbor_stats<d>(nodes, args.c, boundary, margin);
    report["interior"] = stats.node_index.size();
    report["mean_neighbor_distance"] = stats.mean;
    report["std_neighbor_distance"] = stats.stddev;
    report["mean_spread"] = stats.mean_spread;

    MinSpacingReport min_spacing = min_pairwise_distance<d>(nodes);
    report["min_spacing"] = min_spacing.distance;

    if constexpr (d == 2) {
        if (!file.domain_spec.empty()) {
            Domain<2> domain = DomainSpec::parse(file.domain_spec, 2).build<2>();
            HoleReport holes = hole_sizes_2d(nodes, domain);
            report["holes"] = {{"count", holes.diameters.size()},
                               {"min", holes.min},
                               {"mean", holes.mean},
                               {"max", holes.max}};
        }
    }

    if (!args.hist_out.empty()) {
        Histogram hist = distance_histogram<d>(nodes, args.c, args.bins, 0, 0, boundary, margin);
        std::ofstream f(resolve_output(args.hist_out));
        if (!f) throw std::runtime_error("cannot open histogram output");
        f << "bin_lo,bin_hi,count\n";
        for (std::size_t b = 0; b < hist.counts.size(); ++b)
            f << hist.edges[b] << ',' << hist.edges[b + 1] << ',' << hist.counts[b] << "\n";
        report["histogram"] = resolve_output(args.hist_out);
    }

    std::cout << report.dump() << "\n";
    return 0;
}

struct SolveArgs {
    std::string alg = "pnp";
    int dim = 2;
    double h = 0.05;
    std::uint64_t seed = 1;
    int nn = 0;
    int phs_k = 3;
    int order = 2;
    int grid_factor = 3;
    double tol = 1e-10;
};

template <std::size_t d>
int do_solve(const SolveArgs& args, bool spectrum_mode, const std::string& spectrum_out) {
    Domain<d> cube = make_box<d>(zero_vec<d>(), [] {
        Vec<d> one;
        one.fill(1.0);
        return one;
    }());
    SpacingField<d> h = constant_spacing<d>(args.h);
    BoundaryDiscretization<d> boundary = discretize_boundary(cube, h);

    RunParams params;
    params.pnp.strategy = CandidateStrategy::defaults_for(d);
    RunOutput<d> run = run_algorithm<d>(args.alg, cube, h, boundary, params, args.seed);

    std::vector<char> mask(run.nodes.size(), 0);
    for (std::size_t i = 0; i < run.seed_count; ++i) mask[i] = 1;

    PhsConfig cfg;
    cfg.k = args.phs_k;
    cfg.m = args.order;
    cfg.nn = args.nn > 0 ? args.nn : (d == 2 ? 15 : 42);

    auto exact = [](const Vec<d>& p) {
        double u = 1;
        for (std::size_t i = 0; i < d; ++i) u *= std::sin(M_PI * p[i]);
        return u;
    };
    auto f = [&](const Vec<d>& p) { return -static_cast<double>(d) * M_PI * M_PI * exact(p); };
    auto g = [](const Vec<d>&) { return 0.0; };

    auto t0 = std::chrono::steady_clock::now();
    OperatorDiscretization op = assemble_poisson<d>(run.nodes, mask, cfg, f, g);

    if (spectrum_mode) {
        std::vector<std::complex<double>> eig = laplacian_spectrum(op);
        std::sort(eig.begin(), eig.end(),
                  [](const std::complex<double>& a, const std::complex<double>& b) {
                      return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
                  });
        if (!spectrum_out.empty()) {
            std::ofstream out(resolve_output(spectrum_out));
            if (!out) throw std::runtime_error("cannot open spectrum output");
            out << "re,im\n";
            out.precision(17);
            for (const auto& z : eig) out << z.real() << ',' << z.imag() << "\n";
        }
        json top5 = json::array();
        for (std::size_t i = 0; i < std::min<std::size_t>(5, eig.size()); ++i)
            top5.push_back({eig[i].real(), eig[i].imag()});
        json report{{"N", run.nodes.size()},
                    {"interior", op.interior_count},
                    {"max_real", eig.empty() ? 0.0 : eig.front().real()},
                    {"top5", top5}};
        if (!spectrum_out.empty()) report["output"] = resolve_output(spectrum_out);
        std::cout << report.dump() << "\n";
        return 0;
    }

    Eigen::VectorXd u = solve(op, args.tol);
    int per_axis = args.grid_factor * static_cast<int>(std::round(1.0 / args.h)) + 1;
    double l1 = l1_error<d>(run.nodes, u, exact, cube.lo, cube.hi, per_axis, cfg);
    double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json report{{"N", run.nodes.size()}, {"L1", l1}, {"runtime", runtime}, {"h", args.h},
                {"nn", cfg.nn},          {"seed", args.seed}};
    std::cout << report.dump() << "\n";
    return 0;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << "algorithm,h,alpha,N,t_median";
    std::size_t reps = records.empty() ? 0 : records.front().seconds.size();
    for (std::size_t r = 0; r < reps; ++r) out << ",t" << r;
    out << "\n";
    out.precision(17);
    for (const BenchRecord& rec : records) {
        out << rec.algorithm << ',' << rec.h << ',' << rec.alpha << ',' << rec.nodes << ','
            << rec.median_seconds;
        for (double s : rec.seconds) out << ',' << s;
        out << "\n";
        if (rec.timer_warning)
            std::cerr << "warning: " << rec.algorithm << " at h=" << rec.h
                      << " ran under 1 ms; increase N for stable timings\n";
    }
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Node generation toolkit for meshless discretizations"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Generate a node set and write it to disk");
    generate->set_help_flag("--help", "print help");
    generate->add_option("--alg", gen.alg, "pnp | pnp-grid | ff | skf");
    generate->add_option("--domain", gen.domain, "domain spec, e.g. \"box 0 0 1 1\"")->required();
    generate->add_option("--h", gen.h, "spacing: number, expression, or img:<pgm>:<h0>")->required();
    generate->add_option("--dim", gen.dim, "space dimension (inferred when omitted)");
    auto* seed_opt = generate->add_option("--seed", gen.seed, "rng seed (drawn and printed when omitted)");
    generate->add_option("--strategy", gen.strategy, "random | fixed-pattern | randomized-pattern");
    generate->add_option("--n", gen.n, "candidate count for the random strategy");
    generate->add_option("--k", gen.k, "pattern parameter for the pattern strategies");
    generate->add_option("--nmax", gen.nmax, "node count safeguard");
    generate->add_option("--eps", gen.eps, "proximity tolerance");
    generate->add_option("--ff-n", gen.ff_n, "FF arc candidate count");
    generate->add_option("--skf-n", gen.skf_n, "SKF candidate count");
    generate->add_option("--seeds", gen.seeds, "pnp seeding: boundary | random");
    generate->add_option("-o,--output", gen.output, "output node file");

    AnalyzeArgs ana;
    CLI::App* analyze = app.add_subcommand("analyze", "Quality report for a node file");
    analyze->set_help_flag("--help", "print help");
    analyze->add_option("file", ana.file, "node file")->required();
    analyze->add_option("--c", ana.c, "neighbor count");
    analyze->add_option("--margin", ana.margin, "interior margin (absolute, or e.g. 2h)");
    analyze->add_option("--bins", ana.bins, "histogram bins");
    analyze->add_option("--hist-out", ana.hist_out, "write histogram CSV here");

    std::string bench_algs = "pnp,pnp-grid,ff,skf";
    std::string bench_mode = "sweep";
    std::string bench_targets = "1e4,2.2e4,4.6e4,1e5";
    std::string bench_alphas = "0.05,0.15,0.25,0.35,0.45";
    double bench_h = 0.01;
    int bench_repeats = 3;
    std::uint64_t bench_seed = 1;
    std::string bench_out;
    CLI::App* bench = app.add_subcommand("bench", "Timing sweeps (CSV)");
    bench->set_help_flag("--help", "print help");
    bench->add_option("--alg", bench_algs, "comma-separated algorithms");
    bench->add_option("--mode", bench_mode, "sweep | shrink");
    bench->add_option("--target-n", bench_targets, "sweep: comma-separated target node counts");
    bench->add_option("--alphas", bench_alphas, "shrink: comma-separated alpha values");
    bench->add_option("--h", bench_h, "shrink: spacing");
    bench->add_option("--repeats", bench_repeats, "timed repeats per point (median reported)");
    bench->add_option("--seed", bench_seed, "rng seed");
    bench->add_option("-o,--output", bench_out, "CSV output (stdout when omitted)");

    SolveArgs sol;
    CLI::App* solve_cmd = app.add_subcommand("solve-poisson", "RBF-FD Poisson solve on generated nodes");
    solve_cmd->set_help_flag("--help", "print help");
    solve_cmd->add_option("--alg", sol.alg, "pnp | pnp-grid | ff | skf");
    solve_cmd->add_option("--dim", sol.dim, "2 or 3")->check(CLI::Range(1, 3));
    solve_cmd->add_option("--h", sol.h, "spacing");
    solve_cmd->add_option("--seed", sol.seed, "rng seed");
    solve_cmd->add_option("--nn", sol.nn, "stencil size (default 15 in 2-D, 42 in 3-D)");
    solve_cmd->add_option("--k", sol.phs_k, "PHS exponent");
    solve_cmd->add_option("--m", sol.order, "monomial order");
    solve_cmd->add_option("--grid-factor", sol.grid_factor, "L1 grid density factor");
    solve_cmd->add_option("--tol", sol.tol, "solver residual tolerance");

    SolveArgs spec_args;
    std::string spectrum_out;
    CLI::App* spectrum = app.add_subcommand("spectrum", "Laplacian spectrum on generated nodes");
    spectrum->set_help_flag("--help", "print help");
    spectrum->add_option("--alg", spec_args.alg, "pnp | pnp-grid | ff | skf");
    spectrum->add_option("--dim", spec_args.dim, "2 or 3")->check(CLI::Range(1, 3));
    spectrum->add_option("--h", spec_args.h, "spacing");
    spectrum->add_option("--seed", spec_args.seed, "rng seed");
    spectrum->add_option("--nn", spec_args.nn, "stencil size");
    spectrum->add_option("--k", spec_args.phs_k, "PHS exponent");
    spectrum->add_option("--m", spec_args.order, "monomial order");
    spectrum->add_option("-o,--output", spectrum_out, "eigenvalue CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (generate->parsed()) {
            std::uint64_t seed = *seed_opt ? gen.seed : entropy_seed();
            DomainSpec dspec = DomainSpec::parse(gen.domain, gen.dim);
            if (gen.dim > 0 && dspec.dim != gen.dim)
                throw std::invalid_argument("--dim does not match the domain description");
            SpacingSpec hspec = SpacingSpec::parse(gen.h);
            switch (dspec.dim) {
                case 1: return do_generate<1>(gen, dspec, hspec, seed);
                case 2: return do_generate<2>(gen, dspec, hspec, seed);
                case 3: return do_generate<3>(gen, dspec, hspec, seed);
                default: throw std::invalid_argument("unsupported dimension");
            }
        }
        if (analyze->parsed()) {
            NodeFile file = read_node_file(ana.file);
            switch (file.dim) {
                case 1: return do_analyze<1>(ana, file);
                case 2: return do_analyze<2>(ana, file);
                case 3: return do_analyze<3>(ana, file);
                default: throw std::invalid_argument("unsupported dimension in node file");
            }
        }
        if (bench->parsed()) {
            std::vector<std::string> algs = split_csv(bench_algs);
            std::vector<BenchRecord> records;
            if (bench_mode == "sweep") {
                std::vector<double> targets;
                for (const std::string& t : split_csv(bench_targets)) targets.push_back(std::stod(t));
                records = sweep_unit_square(algs, h_for_targets(targets), bench_repeats, bench_seed);
            } else if (bench_mode == "shrink") {
                std::vector<double> alphas;
                for (const std::string& a : split_csv(bench_alphas)) alphas.push_back(std::stod(a));
                records = shrinking_domain(algs, alphas, bench_h, bench_repeats, bench_seed);
            } else {
                throw std::invalid_argument("bench --mode must be sweep or shrink");
            }
            if (bench_out.empty()) {
                write_bench_csv(std::cout, records);
            } else {
                std::ofstream f(resolve_output(bench_out));
                if (!f) throw std::runtime_error("cannot open bench output");
                write_bench_csv(f, records);
            }
            return 0;
        }
        if (solve_cmd->parsed()) {
            switch (sol.dim) {
                case 1: return do_solve<1>(sol, false, "");
                case 2: return do_solve<2>(sol, false, "");
                case 3: return do_solve<3>(sol, false, "");
            }
        }
        if (spectrum->parsed()) {
            switch (spec_args.dim) {
                case 1: return do_solve<1>(spec_args, true, spectrum_out);
                case 2: return do_solve<2>(spec_args, true, spectrum_out);
                case 3: return do_solve<3>(spec_args, true, spectrum_out);
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
