#include "crowd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowd {

double occupancy_of_sigma(const CrowdState& state, const Scenario& sc) {
    double n = 0.0;
    for (const auto& f : state.followers)
        if (!f.evacuated && sc.visibility.contains(f.position)) n += 1.0;
    return n;
}

double occupancy_of_sigma(const ParticleEnsemble& ens, const Scenario& sc) {
    double m = 0.0;
    for (const auto& s : ens.samples)
        if (s.active && sc.visibility.contains(s.position)) m += ens.particle_weight;
    return m;
}

double evacuated_fraction(double current, double initial) {
    if (initial <= 0.0) throw std::invalid_argument("evacuated_fraction: empty initial state");
    double f = 1.0 - current / initial;
    return std::clamp(f, 0.0, 1.0);
}

void polarization_sample(const CrowdState& state, StepStats& out) {
    Vec2 sum{0.0, 0.0};
    int n = 0, zero = 0;
    for (const auto& f : state.followers) {
        if (f.evacuated) continue;
        const double s = f.velocity.norm();
        if (s == 0.0) {
            zero++;
            continue;
        }
        sum += f.velocity / s;
        n++;
    }
    out.zero_excluded = zero;
    if (n == 0) {
        out.polarization = 0.0;
        out.mean_vhat = {0.0, 0.0};
        return;
    }
    out.mean_vhat = sum / static_cast<double>(n);
    out.polarization = out.mean_vhat.norm();
}

bool consensus_detector(std::span<const StepStats> series, const Vec2& direction,
                        int window, double phi_threshold, double dir_threshold) {
    int run = 0;
    for (const auto& s : series) {
        const bool ok = s.polarization >= phi_threshold &&
                        s.mean_vhat.dot(direction) >= dir_threshold;
        run = ok ? run + 1 : 0;
        if (run >= window) return true;
    }
    return false;
}

double failure_rate(std::span<const ReplicateOutcome> outcomes) {
    if (outcomes.empty()) throw std::invalid_argument("failure_rate: no replicates");
    double failures = 0.0;
    for (const auto& o : outcomes) failures += o.success ? 0.0 : 1.0;
    return failures / static_cast<double>(outcomes.size());
}

MeanCi mean_ci(std::span<const double> values) {
    MeanCi out;
    out.n = static_cast<int>(values.size());
    if (out.n == 0) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / out.n;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = out.n > 1 ? std::sqrt(ss / (out.n - 1)) : 0.0;
    out.half_width = out.n > 0 ? 1.96 * out.sd / std::sqrt(static_cast<double>(out.n)) : 0.0;
    return out;
}

double binomial_ci_half_width(double p, int n) {
    if (n <= 0) return 0.0;
    return 1.96 * std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace crowd
