// prdim: participation-ratio dimensionality estimation from matrix files
// or synthetic generators, with subsampling sweeps, local dimensionality,
// alignment decomposition, and bias prediction.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prdim/analysis.hpp"
#include "prdim/estimator.hpp"
#include "prdim/io.hpp"
#include "prdim/local_dim.hpp"
#include "prdim/oracle.hpp"
#include "prdim/svg.hpp"
#include "prdim/sweep.hpp"
#include "prdim/synth.hpp"
#include "prdim/version.hpp"

namespace {

using namespace prdim;

struct CommonOpts {
    std::string input;
    std::string trial2;
    std::string format;  // "", "csv", "npy"
    std::string variant = "all";
    std::string centering = "task";
    std::string weights_path;
    bool symmetrize = false;
    std::string out;
    std::string plot;
    int threads = 0;
    std::uint64_t seed = 0;
};

std::optional<FileFormat> parse_format(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "csv") return FileFormat::csv;
    if (s == "npy") return FileFormat::npy;
    throw ParseError("unknown format: " + s);
}

std::vector<Correction> parse_corrections(const std::string& s) {
    if (s == "all") {
        return {Correction::naive, Correction::row, Correction::col, Correction::both};
    }
    return {correction_from_string(s)};
}

std::optional<WeightVector> load_weights(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return WeightVector(ingest_weights(path));
}

CsvMeta make_meta(int argc, char** argv) {
    CsvMeta meta;
    meta.tool = std::string("prdim ") + kVersion;
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) cmd << (i > 0 ? " " : "") << argv[i];
    meta.command = cmd.str();
    std::ostringstream hash;
    hash << std::hex << fnv1a_hash(meta.command);
    meta.config_hash = hash.str();
    return meta;
}

void print_estimate(const std::string& label, const DimEstimate& e) {
    std::cout << label << ": ";
    if (e.valid) {
        std::cout << format_double(e.value);
    } else {
        std::cout << "invalid (" << e.diagnostics << ")";
    }
    std::cout << "  [A=" << format_double(e.terms.a) << " B=" << format_double(e.terms.b) << "]\n";
}

// ---------------------------------------------------------------- estimate
int run_estimate(const CommonOpts& opt, const CsvMeta& meta) {
    const SampleMatrix m1 = ingest(opt.input, parse_format(opt.format));
    const auto weights = load_weights(opt.weights_path);
    const Centering centering = centering_from_string(opt.centering);
    const std::vector<Correction> corrections = parse_corrections(opt.variant);

    std::vector<SweepRecord> records;
    if (!opt.trial2.empty()) {
        const TrialPair pair(m1, ingest(opt.trial2, parse_format(opt.format)));
        EstimatorVariant v;
        v.centering = centering;
        v.symmetrize_trials = opt.symmetrize;
        const TermEngine engine(pair, v, weights);
        for (const Correction c : corrections) {
            records.push_back({pair.rows(), pair.cols(), 0, opt.seed, engine.estimate(c), 0.0});
        }
    } else {
        EstimatorVariant v;
        v.centering = centering;
        const TermEngine engine(m1, v, weights);
        for (const Correction c : corrections) {
            records.push_back({m1.rows(), m1.cols(), 0, opt.seed, engine.estimate(c), 0.0});
        }
    }

    for (const auto& r : records) {
        print_estimate(std::string("gamma_") + to_string(r.estimate.variant.correction),
                       r.estimate);
    }
    if (!opt.out.empty()) {
        SweepResult res;
        res.grid.p_values = {records.front().p};
        res.grid.q_values = {records.front().q};
        res.grid.base_seed = opt.seed;
        res.corrections = corrections;
        res.centering = centering;
        res.noise_corrected = !opt.trial2.empty();
        res.records = records;
        emit_csv(res, opt.out, meta);
    }
    return 0;
}

// ------------------------------------------------------------------- sweep
int run_sweep(const CommonOpts& opt, const std::vector<Index>& grid_p,
              const std::vector<Index>& grid_q, int reps, const CsvMeta& meta) {
    const SampleMatrix m1 = ingest(opt.input, parse_format(opt.format));
    SweepGrid grid;
    grid.p_values = grid_p.empty() ? std::vector<Index>{m1.rows()} : grid_p;
    grid.q_values = grid_q.empty() ? std::vector<Index>{m1.cols()} : grid_q;
    grid.repetitions = reps;
    grid.base_seed = opt.seed;
    const Centering centering = centering_from_string(opt.centering);
    const std::vector<Correction> corrections = parse_corrections(opt.variant);

    SweepResult result;
    if (!opt.trial2.empty()) {
        const TrialPair pair(m1, ingest(opt.trial2, parse_format(opt.format)));
        result = subsample_sweep(pair, grid, corrections, centering, opt.threads);
    } else {
        result = subsample_sweep(m1, grid, corrections, centering, opt.threads);
    }

    std::size_t valid = 0;
    for (const auto& r : result.records) valid += r.estimate.valid ? 1 : 0;
    std::cout << "sweep: " << result.records.size() << " records (" << valid << " valid)\n";
    if (!opt.out.empty()) emit_csv(result, opt.out, meta);
    if (!opt.plot.empty()) emit_plot(result, opt.plot);
    return 0;
}

// ------------------------------------------------------------------- local
int run_local(const CommonOpts& opt, std::vector<double> radii, const std::string& metric,
              int k_neighbors, const CsvMeta& meta) {
    const SampleMatrix m1 = ingest(opt.input, parse_format(opt.format));
    BallSpec ball;
    ball.metric = metric == "mahalanobis" ? LocalMetric::local_mahalanobis
                                          : LocalMetric::euclidean;
    if (metric != "euclidean" && metric != "mahalanobis") {
        throw ParseError("unknown metric: " + metric);
    }
    ball.k_neighbors = k_neighbors;
    if (radii.empty()) throw PreconditionError("--radii is required");

    EstimatorVariant variant;
    variant.correction = opt.variant == "all" ? Correction::both
                                              : correction_from_string(opt.variant);
    variant.centering = centering_from_string(opt.centering);
    variant.symmetrize_trials = opt.symmetrize;

    std::vector<LocalDimResult> results;
    if (!opt.trial2.empty()) {
        const TrialPair pair(m1, ingest(opt.trial2, parse_format(opt.format)));
        results = radius_sweep(pair, ball, radii, variant, opt.threads);
    } else {
        results = radius_sweep(m1, ball, radii, variant, opt.threads);
    }

    for (const auto& res : results) {
        std::cout << "r=" << format_double(res.radius) << " mean_gamma=";
        std::cout << (res.valid_centers > 0 ? format_double(res.mean_gamma) : "n/a");
        std::cout << " valid=" << res.valid_centers << " skipped=" << res.skipped_centers << "\n";
    }
    if (!opt.out.empty()) emit_csv(results, opt.out, meta);
    if (!opt.plot.empty()) emit_plot(results, opt.plot);
    return 0;
}

// ------------------------------------------------------------------- synth
int run_synth(const CommonOpts& opt, const std::string& model, int d, double sigma_x,
              double sigma_eps, const std::string& noise_mode, Index p, Index q, bool pair,
              const std::string& out2, const CsvMeta& meta) {
    PopulationSpec spec;
    spec.kind = model_kind_from_string(model);
    spec.latent_dim = d;
    spec.input_scale = sigma_x;
    spec.noise_std = sigma_eps;
    if (noise_mode == "multiplicative") {
        spec.noise_mode = NoiseMode::multiplicative;
    } else if (noise_mode != "additive") {
        throw ParseError("unknown noise mode: " + noise_mode);
    }
    if (opt.out.empty()) throw PreconditionError("synth requires --out");

    if (pair) {
        const TrialPair tp = generate_trial_pair(spec, p, q, opt.seed);
        write_matrix_csv(tp.trial1().values(), opt.out, meta);
        write_matrix_csv(tp.trial2().values(), out2.empty() ? opt.out + ".trial2.csv" : out2,
                         meta);
        std::cout << "wrote trial pair " << p << "x" << q << "\n";
    } else {
        const SampleMatrix m = generate(spec, p, q, opt.seed);
        write_matrix_csv(m.values(), opt.out, meta);
        std::cout << "wrote matrix " << p << "x" << q << "\n";
    }
    return 0;
}

// ------------------------------------------------------------------- align
int run_align(const CommonOpts& opt, const std::vector<std::string>& inputs, const CsvMeta& meta) {
    if (inputs.size() < 2) throw PreconditionError("align needs at least two --input files");
    std::vector<SampleMatrix> manifolds;
    manifolds.reserve(inputs.size());
    for (const auto& path : inputs) manifolds.push_back(ingest(path, parse_format(opt.format)));

    EstimatorVariant variant;
    variant.correction =
        opt.variant == "all" ? Correction::naive : correction_from_string(opt.variant);
    variant.centering = centering_from_string(opt.centering);

    const AlignmentReport rep = alignment_report(manifolds, variant);
    std::cout << "gamma_joint=" << format_double(rep.gamma_joint)
              << " gamma_align=" << format_double(rep.gamma_align)
              << " gamma_ortho=" << format_double(rep.gamma_ortho)
              << " exd=" << format_double(rep.exd)
              << " weighted_mean_cka=" << format_double(rep.weighted_mean_cka) << "\n";
    if (!opt.out.empty()) emit_csv(rep, opt.out, meta);
    return 0;
}

// ------------------------------------------------------------- bias-predict
int run_bias_predict(const CommonOpts& opt, Index p, Index q, const CsvMeta& meta) {
    const SampleMatrix ref = ingest(opt.input, parse_format(opt.format));
    const KernelMoments m = estimate_kernel_moments(ref);
    std::cout << "gamma_pop=" << format_double(m.gamma_pop) << " c=" << format_double(m.c)
              << " c'=" << format_double(m.c_prime) << " c~=" << format_double(m.c_tilde)
              << " c~'=" << format_double(m.c_tilde_prime) << " psi=" << format_double(m.psi)
              << " psi~=" << format_double(m.psi_tilde) << "\n";
    for (const Correction c : {Correction::naive, Correction::both}) {
        const BiasVariance bv = predict_bias_variance(m, p, q, c);
        std::cout << "gamma_" << to_string(c) << " @ P=" << p << " Q=" << q
                  << ": bias=" << format_double(bv.bias)
                  << " variance=" << format_double(bv.variance) << "\n";
    }
    if (!opt.out.empty()) {
        std::ofstream out(opt.out, std::ios::binary);
        if (!out) throw IoError("cannot write " + opt.out);
        out << "# tool: " << meta.tool << "\n";
        out << "record,value\n";
        out << "gamma_pop," << format_double(m.gamma_pop) << "\n";
        out << "c," << format_double(m.c) << "\nc_prime," << format_double(m.c_prime) << "\n";
        out << "c_tilde," << format_double(m.c_tilde) << "\nc_tilde_prime,"
            << format_double(m.c_tilde_prime) << "\n";
        out << "psi," << format_double(m.psi) << "\npsi_tilde," << format_double(m.psi_tilde)
            << "\n";
        for (const Correction c : {Correction::naive, Correction::both}) {
            const BiasVariance bv = predict_bias_variance(m, p, q, c);
            out << "bias_" << to_string(c) << ',' << format_double(bv.bias) << "\n";
            out << "variance_" << to_string(c) << ',' << format_double(bv.variance) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"participation-ratio dimensionality estimation"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "key=value configuration file (flags win on conflict)");
    app.require_subcommand(1);

    CommonOpts opt;
    std::vector<Index> grid_p, grid_q;
    int reps = 1;
    std::vector<double> radii;
    std::string metric = "euclidean";
    int k_neighbors = 0;
    std::string model = "linear";
    int latent_dim = 1;
    double sigma_x = 1.0, sigma_eps = 0.0;
    std::string noise_mode = "additive";
    Index synth_p = 100, synth_q = 100;
    bool pair = false;
    std::string out2;
    std::vector<std::string> align_inputs;
    Index predict_p = 100, predict_q = 100;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* in = cmd->add_option("--input", opt.input, "matrix file (csv or npy)");
        if (needs_input) in->required();
        cmd->add_option("--format", opt.format, "input format: csv|npy (default: by extension)");
        cmd->add_option("--trial2", opt.trial2, "second-trial matrix (enables noise correction)");
        cmd->add_option("--variant", opt.variant, "naive|row|col|both|all");
        cmd->add_option("--centering", opt.centering, "task|neuron|none");
        cmd->add_option("--weights", opt.weights_path, "per-row weights file");
        cmd->add_flag("--symmetrize-trials", opt.symmetrize,
                      "average the two trial orderings of the cross-trial product");
        cmd->add_option("--out", opt.out, "output CSV path");
        cmd->add_option("--plot", opt.plot, "output SVG path");
        cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
        cmd->add_option("--seed", opt.seed, "base seed");
    };

    CLI::App* c_est = app.add_subcommand("estimate", "estimate dimensionality of one matrix");
    add_common(c_est, true);

    CLI::App* c_sweep = app.add_subcommand("sweep", "subsampling sweep over P and Q");
    add_common(c_sweep, true);
    c_sweep->add_option("--grid-p", grid_p, "row counts to subsample");
    c_sweep->add_option("--grid-q", grid_q, "column counts to subsample");
    c_sweep->add_option("--reps", reps, "repetitions per grid cell");

    CLI::App* c_local = app.add_subcommand("local", "local dimensionality over ball radii");
    add_common(c_local, true);
    c_local->add_option("--radii", radii, "ball radii, ascending")->required();
    c_local->add_option("--metric", metric, "euclidean|mahalanobis");
    c_local->add_option("--k-neighbors", k_neighbors,
                        "neighbors for the local metric (0 = min(P-1, 20))");

    CLI::App* c_synth = app.add_subcommand("synth", "generate a synthetic matrix");
    add_common(c_synth, false);
    c_synth->add_option("--model", model, "linear|rff");
    c_synth->add_option("--d", latent_dim, "latent dimension");
    c_synth->add_option("--sigma-x", sigma_x, "input scale (rff)");
    c_synth->add_option("--sigma-eps", sigma_eps, "noise standard deviation");
    c_synth->add_option("--noise-mode", noise_mode, "additive|multiplicative");
    c_synth->add_option("--p", synth_p, "rows");
    c_synth->add_option("--q", synth_q, "columns");
    c_synth->add_flag("--pair", pair, "generate a two-trial pair");
    c_synth->add_option("--out2", out2, "second-trial output path");

    CLI::App* c_align = app.add_subcommand("align", "joint dimensionality of several manifolds");
    c_align->add_option("--input", align_inputs, "manifold matrices (two or more)")->required();
    c_align->add_option("--format", opt.format, "csv|npy");
    c_align->add_option("--variant", opt.variant, "naive|row|col|both");
    c_align->add_option("--centering", opt.centering, "task|neuron|none");
    c_align->add_option("--out", opt.out, "output CSV path");

    CLI::App* c_bias = app.add_subcommand("bias-predict",
                                          "predict estimator bias/variance from a reference");
    c_bias->add_option("--input", opt.input, "reference matrix")->required();
    c_bias->add_option("--format", opt.format, "csv|npy");
    c_bias->add_option("--p", predict_p, "target row count")->required();
    c_bias->add_option("--q", predict_q, "target column count")->required();
    c_bias->add_option("--out", opt.out, "output CSV path");

    // bias-predict and align default to the population conventions
    if (argc > 1 && std::string(argv[1]) == "align") opt.centering = "none";
    if (argc > 1 && std::string(argv[1]) == "align") opt.variant = "naive";

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const CsvMeta meta = make_meta(argc, argv);
    try {
        if (c_est->parsed()) return run_estimate(opt, meta);
        if (c_sweep->parsed()) return run_sweep(opt, grid_p, grid_q, reps, meta);
        if (c_local->parsed()) return run_local(opt, radii, metric, k_neighbors, meta);
        if (c_synth->parsed()) {
            return run_synth(opt, model, latent_dim, sigma_x, sigma_eps, noise_mode, synth_p,
                             synth_q, pair, out2, meta);
        }
        if (c_align->parsed()) return run_align(opt, align_inputs, meta);
        if (c_bias->parsed()) return run_bias_predict(opt, predict_p, predict_q, meta);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
