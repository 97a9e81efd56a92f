#ifndef SEQSTAT_TOOLS_COMMANDS_HPP
#define SEQSTAT_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "output.hpp"
#include "seqstat/expsum.hpp"
#include "seqstat/sequences.hpp"

namespace seqstat::cli {

struct SequenceOptions {
    std::string family = "logpow"; // logpow | monomial | logbase | equi
    double alpha = 1.0;
    double A = 2.0;
    double theta = 0.5;
    double base = 2.0;
    double period = 0.0; // 0: use N
    std::string precision = "double";

    SequenceSpec spec(double N) const;
    json to_json() const;
};

struct GenConfig {
    SequenceOptions seq;
    std::uint64_t N = 1000;
};

struct GapsConfig {
    SequenceOptions seq;
    std::uint64_t N = 100000;
    int bins = 50;
    double smax = 5.0;
    bool svg = false;
};

struct CorrConfig {
    SequenceOptions seq;
    std::uint64_t N = 100000;
    int m = 2;
    std::string f = "bump:0,1,1";
    bool brute_force = false;
};

struct MomentConfig {
    SequenceOptions seq;
    std::uint64_t N = 200;
    int m = 2;
    std::string f = "bump:0,1,1";
};

struct ExpsumConfig {
    SequenceOptions seq;
    int q = 8;
    int u = 10;
    double logN = 10.0; // N = e^logN unless N is given
    double N = 0.0;
    int grid = 64;
    double p = 2.0;
    bool refine = false;
    double budget = kExactBudget;
    std::string f = "bump:0,1,1";
};

struct VdmConfig {
    double A = 2.0;
    int samples = 10000;
    std::uint64_t seed = 1;
    int dnorm_samples = 1000;
};

struct PlotConfig {
    std::string input;
    std::string output; // stem; defaults to the input stem
};

// Files written by one command, relative to the output directory, and the
// JSON summary also returned to the caller.
struct RunResult {
    std::vector<std::string> files;
    std::vector<std::string> schemas;
    json summary;
};

RunResult cmd_gen(const GenConfig& c, const std::string& out_dir);
RunResult cmd_gaps(const GapsConfig& c, const std::string& out_dir);
RunResult cmd_corr(const CorrConfig& c, const std::string& out_dir);
RunResult cmd_moment(const MomentConfig& c, const std::string& out_dir);
RunResult cmd_expsum(const ExpsumConfig& c, const std::string& out_dir);
RunResult cmd_vdm(const VdmConfig& c, const std::string& out_dir);
RunResult cmd_plot(const PlotConfig& c, const std::string& out_dir);

json to_json(const GenConfig& c);
json to_json(const GapsConfig& c);
json to_json(const CorrConfig& c);
json to_json(const MomentConfig& c);
json to_json(const ExpsumConfig& c);
json to_json(const VdmConfig& c);
json to_json(const PlotConfig& c);

// <command>_manifest.json: config echo, version, wall time, output checksums.
std::string write_manifest(const std::string& out_dir, const std::string& command, const json& config,
                           const RunResult& result, double wall_seconds);

inline constexpr const char* kToolVersion = "0.1.0";

}

#endif
