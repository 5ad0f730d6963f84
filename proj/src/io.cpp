#include "crowd/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace crowd {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

double round9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::strtod(buf, nullptr);
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

TrajectoryWriter::TrajectoryWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open trajectory file: " + path);
    out_ << "step,id,kind,x,y,vx,vy,evacuated\n";
}

void TrajectoryWriter::record(const CrowdState& state) {
    for (size_t i = 0; i < state.followers.size(); ++i) {
        const auto& f = state.followers[i];
        out_ << state.step << ',' << i << ",F," << fmt9(f.position.x) << ','
             << fmt9(f.position.y) << ',' << fmt9(f.velocity.x) << ','
             << fmt9(f.velocity.y) << ',' << (f.evacuated ? 1 : 0) << '\n';
    }
    for (size_t k = 0; k < state.leaders.size(); ++k) {
        const auto& l = state.leaders[k];
        out_ << state.step << ',' << k << ",L," << fmt9(l.position.x) << ','
             << fmt9(l.position.y) << ',' << fmt9(l.velocity.x) << ','
             << fmt9(l.velocity.y) << ',' << (l.evacuated ? 1 : 0) << '\n';
    }
}

void write_ensemble_csv(const ParticleEnsemble& ens, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open ensemble file: " + path);
    out << "x,y,vx,vy,active\n";
    for (const auto& s : ens.samples) {
        out << fmt9(s.position.x) << ',' << fmt9(s.position.y) << ','
            << fmt9(s.velocity.x) << ',' << fmt9(s.velocity.y) << ','
            << (s.active ? 1 : 0) << '\n';
    }
}

void write_density_dump(const DensityGrid& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open density file: " + path);
    out << "# bounds " << fmt9(g.lo.x) << ' ' << fmt9(g.lo.y) << ' ' << fmt9(g.hi.x)
        << ' ' << fmt9(g.hi.y) << '\n';
    out << "# resolution " << g.nx << ' ' << g.ny << '\n';
    out << "# time " << fmt9(g.time) << '\n';
    double total = 0.0;
    for (double m : g.mass) total += m;
    out << "# mass " << fmt9(total) << " outside " << fmt9(g.outside_mass) << '\n';
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            out << fmt9(g.at(ix, iy)) << (ix + 1 == g.nx ? '\n' : ' ');
        }
    }
}

void write_cost_history_csv(const std::vector<CompassEntry>& history,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open history file: " + path);
    out << "iteration,cost,accepted\n";
    for (const auto& e : history)
        out << e.iteration << ',' << fmt9(e.cost) << ',' << (e.accepted ? 1 : 0) << '\n';
}

nlohmann::json series_to_json(const std::vector<StepStats>& series) {
    nlohmann::json steps = nlohmann::json::array();
    nlohmann::json occupancy = nlohmann::json::array();
    nlohmann::json evac = nlohmann::json::array();
    nlohmann::json polar = nlohmann::json::array();
    for (const auto& s : series) {
        steps.push_back(s.step);
        occupancy.push_back(round9(s.occupancy));
        evac.push_back(round9(s.evac_fraction));
        polar.push_back(round9(s.polarization));
    }
    nlohmann::json j;
    j["step"] = std::move(steps);
    j["occupancy"] = std::move(occupancy);
    j["evacuated_fraction"] = std::move(evac);
    j["polarization"] = std::move(polar);
    return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file: " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace crowd
