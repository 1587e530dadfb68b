// criterion.cpp — scans, crossing refinement, ensembles

#include "sr/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sr/channels.hpp"
#include "sr/errors.hpp"
#include "sr/parallel.hpp"
#include "sr/rng.hpp"
#include "sr/statistics.hpp"

namespace sr {

namespace {

double g2_fast(const EmitterArray& array) {
    const InteractionMatrices m = interaction_matrices(array);
    const int n = m.size();
    if (n < 2) throw ValidationError("g2 needs at least 2 emitters");
    return 1.0 + (decay_rate_variance(m) - 1.0) / n;
}

}  // namespace

ArrayFamily::ArrayFamily(EmitterArray unit_array) : unit_(std::move(unit_array)) {
    unit_.spacing = 1.0;
}

ArrayFamily ArrayFamily::from_spec(LatticeSpec spec) {
    const LatticeKind kind = spec.kind;
    spec.spacing = 1.0;
    ArrayFamily family(build_lattice(spec));
    family.kind_ = kind;
    return family;
}

EmitterArray ArrayFamily::at(double d) const {
    if (!(d > 0.0)) throw ValidationError("lattice spacing must be > 0");
    EmitterArray array = unit_;
    for (auto& r : array.positions) r *= d;
    array.spacing = d;
    return array;
}

double ArrayFamily::g2_at(double d) const { return g2_fast(at(d)); }

ScanOptions ScanOptions::for_kind(LatticeKind kind) {
    ScanOptions opts;
    if (kind == LatticeKind::square || kind == LatticeKind::cubic) {
        opts.densify_at = {0.5, 1.0 / std::sqrt(2.0)};
    }
    return opts;
}

std::vector<G2Sample> scan_g2(const G2Evaluator& g2_of_d, DRange range,
                              const ScanOptions& opts) {
    if (!(range.min > 0.0) || !(range.max > range.min)) {
        throw ValidationError("scan range must satisfy 0 < d_min < d_max");
    }
    if (opts.grid < 2) throw ValidationError("scan grid needs at least 2 points");

    std::set<double> grid;
    const double step = (range.max - range.min) / (opts.grid - 1);
    for (int i = 0; i < opts.grid; ++i) grid.insert(range.min + i * step);
    for (double locus : opts.densify_at) {
        const double lo = std::max(range.min, locus - opts.densify_radius);
        const double hi = std::min(range.max, locus + opts.densify_radius);
        if (lo >= hi) continue;
        const double fine = step / opts.densify_factor;
        for (double d = lo; d <= hi + 1e-15; d += fine) grid.insert(d);
    }

    std::vector<G2Sample> samples(grid.size());
    std::vector<double> ds(grid.begin(), grid.end());
    parallel_for(
        ds.size(),
        [&](std::size_t i) {
            samples[i] = {ds[i], g2_of_d(ds[i])};
        },
        opts.threads);
    return samples;
}

std::vector<G2Sample> scan_g2(const ArrayFamily& family, DRange range) {
    return scan_g2([&](double d) { return family.g2_at(d); }, range,
                   ScanOptions::for_kind(family.kind()));
}

double CrossingSet::critical_distance() const {
    if (crossings.empty()) {
        throw ValidationError("no crossings: critical distance is undefined");
    }
    return crossings.back().d;
}

CrossingSet find_crossings(const G2Evaluator& g2_of_d, DRange range,
                           const ScanOptions& opts) {
    const std::vector<G2Sample> samples = scan_g2(g2_of_d, range, opts);

    CrossingSet set;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        double lo = samples[i].d, hi = samples[i + 1].d;
        double flo = samples[i].g2 - 1.0, fhi = samples[i + 1].g2 - 1.0;
        if (flo == 0.0) continue;  // counted at the exact grid point below
        const bool bracket = (flo > 0.0) != (fhi > 0.0);
        if (!bracket) continue;

        double mid = 0.5 * (lo + hi);
        double fmid = g2_of_d(mid) - 1.0;
        int iter = 0;
        while (((hi - lo) > opts.refine_tol || std::abs(fmid) > opts.value_tol) &&
               iter < 200) {
            if ((fmid > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
            mid = 0.5 * (lo + hi);
            fmid = g2_of_d(mid) - 1.0;
            ++iter;
        }
        Crossing crossing;
        crossing.d = mid;
        // classify by the sign on the small-d side of the crossing
        crossing.direction =
            flo > 0.0 ? CrossingDirection::upward : CrossingDirection::downward;
        set.crossings.push_back(crossing);
    }
    return set;
}

CrossingSet find_critical_distance(const ArrayFamily& family, DRange range,
                                   const ScanOptions& opts) {
    return find_crossings([&](double d) { return family.g2_at(d); }, range, opts);
}

CrossingSet find_critical_distance(const ArrayFamily& family, DRange range) {
    return find_critical_distance(family, range, ScanOptions::for_kind(family.kind()));
}

int EnsembleResult::valid_count() const {
    int n = 0;
    for (const auto& s : samples) n += s.status == SampleStatus::ok;
    return n;
}

int EnsembleResult::failed_count() const {
    return static_cast<int>(samples.size()) - valid_count();
}

EnsembleResult ensemble_critical(const LatticeSpec& base, const Perturbation& perturbation,
                                 int samples, std::uint64_t master_seed, DRange range,
                                 const EnsembleOptions& opts) {
    if (samples < 1) throw ValidationError("ensemble needs at least one sample");
    const ArrayFamily base_family = ArrayFamily::from_spec(base);
    ScanOptions scan = opts.scan;
    if (scan.densify_at.empty()) {
        scan.densify_at = ScanOptions::for_kind(base.kind).densify_at;
    }

    EnsembleResult result;
    result.samples.resize(samples);

    parallel_for(
        static_cast<std::size_t>(samples),
        [&](std::size_t i) {
            EnsembleSample& out = result.samples[i];
            out.seed = child_seed(master_seed, i);
            EmitterArray unit;
            try {
                if (const auto* fill = std::get_if<FillingPerturbation>(&perturbation)) {
                    unit = apply_filling(base_family.unit(), fill->eta, out.seed);
                } else {
                    const auto& noise = std::get<PositionNoisePerturbation>(perturbation);
                    unit = apply_position_noise(base_family.unit(), noise.sigma_rel,
                                                out.seed);
                }
            } catch (const ValidationError&) {
                out.status = SampleStatus::degenerate;
                return;
            }
            ScanOptions local = scan;
            local.threads = 1;  // parallelism lives at the sample level
            const ArrayFamily family{std::move(unit)};
            const CrossingSet crossings =
                find_crossings([&](double d) { return family.g2_at(d); }, range, local);
            if (crossings.empty()) {
                out.status = SampleStatus::no_crossing;
            } else {
                out.status = SampleStatus::ok;
                out.d_critical = crossings.critical_distance();
            }
        },
        opts.scan.threads);

    // summary over valid samples
    double sum = 0.0, sumsq = 0.0;
    int n_ok = 0;
    for (const auto& s : result.samples) {
        if (s.status != SampleStatus::ok) continue;
        sum += s.d_critical;
        sumsq += s.d_critical * s.d_critical;
        ++n_ok;
    }
    if (n_ok > 0) {
        result.mean = sum / n_ok;
        result.stddev =
            n_ok > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / n_ok) / (n_ok - 1)))
                     : 0.0;
    }

    const int bins = std::max(1, opts.histogram_bins);
    result.histogram_edges.resize(bins + 1);
    result.histogram_counts.assign(bins, 0);
    const double width = (range.max - range.min) / bins;
    for (int b = 0; b <= bins; ++b) result.histogram_edges[b] = range.min + b * width;
    for (const auto& s : result.samples) {
        if (s.status != SampleStatus::ok) continue;
        int b = static_cast<int>((s.d_critical - range.min) / width);
        b = std::clamp(b, 0, bins - 1);
        ++result.histogram_counts[b];
    }
    return result;
}

}  // namespace sr
