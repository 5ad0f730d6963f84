#ifndef CROWD_RUNNER_SINKS_HPP
#define CROWD_RUNNER_SINKS_HPP

#include <memory>
#include <string>

#include "crowd/io.hpp"

namespace crowd {

// File outputs attached to a run; any member may be left disabled.
struct RunSinks {
    std::unique_ptr<TrajectoryWriter> trajectory;
    int trajectory_every = 1;
    bool density = false;
    int density_every = 500;
    Vec2 grid_lo{}, grid_hi{};
    int grid_nx = 80, grid_ny = 40;
    std::string density_prefix;   // files <prefix><step>.txt
    std::string ensemble_path;    // final checkpoint CSV
};

}  // namespace crowd

#endif
