#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "seqstat/error.hpp"
#include "seqstat/parallel.hpp"

using namespace seqstat;
using namespace seqstat::cli;

namespace {

void add_sequence(CLI::App* cmd, SequenceOptions& s) {
    cmd->add_option("--family", s.family, "logpow, monomial, logbase or equi")
        ->check(CLI::IsMember({"logpow", "monomial", "logbase", "equi"}));
    cmd->add_option("--alpha", s.alpha, "scale alpha");
    cmd->add_option("--A", s.A, "exponent of log n");
    cmd->add_option("--theta", s.theta, "monomial exponent");
    cmd->add_option("--base", s.base, "logarithm base");
    cmd->add_option("--period", s.period, "equispaced period (default N)");
    cmd->add_option("--precision", s.precision, "double or compensated")
        ->check(CLI::IsMember({"double", "compensated"}));
}

}

int main(int argc, char** argv) {
    CLI::App app{"Local statistics of alpha (log n)^A mod 1 and the exponential-sum machinery behind them"};
    app.set_config("--config", "", "INI file with one [section] per command; flags override it");
    app.require_subcommand(1);
    std::string out_dir = ".";
    int threads = -1;
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (default: SEQSTAT_THREADS or all cores)");

    GenConfig gen;
    GapsConfig gaps;
    CorrConfig corr;
    MomentConfig moment;
    ExpsumConfig expsum;
    VdmConfig vdm;
    PlotConfig plot;

    auto* c_gen = app.add_subcommand("gen", "write omega(n) and its fractional part for n <= N");
    add_sequence(c_gen, gen.seq);
    c_gen->add_option("--N", gen.N, "number of terms");

    auto* c_gaps = app.add_subcommand("gaps", "gap histogram and KS distance to the exponential law");
    add_sequence(c_gaps, gaps.seq);
    c_gaps->add_option("--N", gaps.N, "number of points");
    c_gaps->add_option("--bins", gaps.bins, "histogram bins");
    c_gaps->add_option("--smax", gaps.smax, "histogram range [0, smax]");
    c_gaps->add_flag("--svg", gaps.svg, "also write gaps.svg and gaps.gp");

    auto* c_corr = app.add_subcommand("corr", "m-point correlation against its Poisson value");
    add_sequence(c_corr, corr.seq);
    c_corr->add_option("--N", corr.N, "number of points");
    c_corr->add_option("--m", corr.m, "correlation order, 2..5");
    c_corr->add_option("--f", corr.f, "bump:c,w,h or box:l,r,delta");
    c_corr->add_flag("--brute-force-check", corr.brute_force, "compare with the brute-force sum (N <= 2000)");

    auto* c_moment = app.add_subcommand("moment", "m-th moment of S_N, completed sum and partition targets");
    add_sequence(c_moment, moment.seq);
    c_moment->add_option("--N", moment.N, "number of points, at most 1e4");
    c_moment->add_option("--m", moment.m, "moment order, 1..4");
    c_moment->add_option("--f", moment.f, "bump:c,w,h or box:l,r,delta");

    auto* c_exp = app.add_subcommand("expsum", "smoothed exponential sum and both B-process transforms");
    add_sequence(c_exp, expsum.seq);
    c_exp->add_option("--q", expsum.q, "n window index");
    c_exp->add_option("--u", expsum.u, "k window index");
    c_exp->add_option("--logN", expsum.logN, "N = e^logN");
    c_exp->add_option("--N", expsum.N, "N directly (overrides --logN)");
    c_exp->add_option("--grid", expsum.grid, "number of s points on [0,1)");
    c_exp->add_option("--p", expsum.p, "norm exponent");
    c_exp->add_flag("--refine", expsum.refine, "repeat on a doubled grid and report the drift");
    c_exp->add_option("--budget", expsum.budget, "maximum (n,k) pairs for the exact sum");
    c_exp->add_option("--f", expsum.f, "bump:c,w,h or box:l,r,delta");

    auto* c_vdm = app.add_subcommand("vdm", "generalized Vandermonde sampling and det M trend");
    c_vdm->add_option("--A", vdm.A, "exponent A of the derivative system");
    c_vdm->add_option("--samples", vdm.samples, "samples per exponent box");
    c_vdm->add_option("--seed", vdm.seed, "sampling seed");
    c_vdm->add_option("--dnorm-samples", vdm.dnorm_samples, "random systems for the norm bound");

    auto* c_plot = app.add_subcommand("plot", "SVG and gnuplot script from a CSV written by another command");
    c_plot->add_option("--input", plot.input, "CSV file")->required();
    c_plot->add_option("--output", plot.output, "output stem (default: input stem)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (threads >= 0) {
        set_num_threads(threads);
    }
    try {
        std::filesystem::create_directories(out_dir);
        const std::string name = app.get_subcommands().front()->get_name();
        json config;
        auto t0 = std::chrono::steady_clock::now();
        RunResult r;
        if (name == "gen") {
            config = to_json(gen);
            r = cmd_gen(gen, out_dir);
        } else if (name == "gaps") {
            config = to_json(gaps);
            r = cmd_gaps(gaps, out_dir);
        } else if (name == "corr") {
            config = to_json(corr);
            r = cmd_corr(corr, out_dir);
        } else if (name == "moment") {
            config = to_json(moment);
            r = cmd_moment(moment, out_dir);
        } else if (name == "expsum") {
            config = to_json(expsum);
            r = cmd_expsum(expsum, out_dir);
        } else if (name == "vdm") {
            config = to_json(vdm);
            r = cmd_vdm(vdm, out_dir);
        } else {
            config = to_json(plot);
            r = cmd_plot(plot, out_dir);
        }
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(out_dir, name, config, r, wall);
        std::cout << r.summary.dump(2) << "\n";
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const PrecisionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
