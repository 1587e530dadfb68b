// criterion.hpp — critical-distance search: g2 scans over the lattice
// constant, sign-change refinement, and stochastic ensembles

#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "sr/geometry.hpp"

namespace sr {

// Family of arrays parameterized by the lattice constant: a fixed unit-cell
// array (built at spacing 1) whose positions scale linearly with d. Filling
// masks and relative positional noise applied to the unit array therefore
// scale with d as well.
class ArrayFamily {
public:
    explicit ArrayFamily(EmitterArray unit_array);
    static ArrayFamily from_spec(LatticeSpec spec);

    EmitterArray at(double d) const;
    const EmitterArray& unit() const { return unit_; }
    LatticeKind kind() const { return kind_; }

    // Evaluates g2(0) at spacing d through the trace fast path.
    double g2_at(double d) const;

private:
    EmitterArray unit_;
    LatticeKind kind_ = LatticeKind::chain;
};

struct DRange {
    double min = 0.0;
    double max = 0.0;
};

struct ScanOptions {
    int grid = 400;
    // Extra resolution around geometric resonances; by default the loci
    // d = 1/2 and d = 1/sqrt(2) for 2D and 3D lattice families.
    std::vector<double> densify_at;
    double densify_radius = 0.05;
    int densify_factor = 4;
    double refine_tol = 1e-4;       // bisection width target on d
    double value_tol = 1e-6;        // |g2 - 1| target at reported crossings
    unsigned threads = 0;           // 0 = hardware concurrency

    static ScanOptions for_kind(LatticeKind kind);
};

struct G2Sample {
    double d = 0.0;
    double g2 = 0.0;
};

enum class CrossingDirection { upward, downward };

struct Crossing {
    double d = 0.0;
    // Direction of the g2(0) crossing through unity as d decreases:
    // upward means g2 rises above 1 just below this spacing.
    CrossingDirection direction = CrossingDirection::upward;
};

struct CrossingSet {
    std::vector<Crossing> crossings;  // sorted by d, directions alternating

    bool empty() const { return crossings.empty(); }
    // Largest spacing whose lower side has g2 > 1; throws when empty.
    double critical_distance() const;
};

using G2Evaluator = std::function<double(double)>;

// g2(0) sampled on the (optionally densified) grid, in ascending d.
std::vector<G2Sample> scan_g2(const G2Evaluator& g2_of_d, DRange range,
                              const ScanOptions& opts = {});
std::vector<G2Sample> scan_g2(const ArrayFamily& family, DRange range);

// Brackets every sign change of g2 - 1 on the scan grid and refines each by
// bisection until the bracket is narrower than refine_tol and the midpoint
// satisfies |g2 - 1| < value_tol. An empty result is a valid outcome.
CrossingSet find_crossings(const G2Evaluator& g2_of_d, DRange range,
                           const ScanOptions& opts = {});
CrossingSet find_critical_distance(const ArrayFamily& family, DRange range);
CrossingSet find_critical_distance(const ArrayFamily& family, DRange range,
                                   const ScanOptions& opts);

// Stochastic ensembles over filling or positional disorder.
struct FillingPerturbation {
    double eta = 1.0;
};
struct PositionNoisePerturbation {
    double sigma_rel = 0.0;
};
using Perturbation = std::variant<FillingPerturbation, PositionNoisePerturbation>;

enum class SampleStatus { ok, degenerate, no_crossing };

struct EnsembleSample {
    std::uint64_t seed = 0;
    SampleStatus status = SampleStatus::ok;
    double d_critical = 0.0;  // meaningful only when status == ok
};

struct EnsembleResult {
    std::vector<EnsembleSample> samples;  // one per requested sample, by index
    double mean = 0.0;                    // over samples with status == ok
    double stddev = 0.0;
    std::vector<double> histogram_edges;
    std::vector<int> histogram_counts;

    int valid_count() const;
    int failed_count() const;
};

struct EnsembleOptions {
    int histogram_bins = 40;
    ScanOptions scan;
};

// Draws `samples` perturbed realizations of the base lattice (child seeds
// derived from the master seed), finds each sample's largest crossing, and
// summarizes. Degenerate samples (fewer than 2 emitters after filling) are
// recorded and excluded, not resampled.
EnsembleResult ensemble_critical(const LatticeSpec& base, const Perturbation& perturbation,
                                 int samples, std::uint64_t master_seed, DRange range,
                                 const EnsembleOptions& opts = {});

}  // namespace sr
