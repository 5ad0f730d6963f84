#ifndef CROWD_PARAMS_HPP
#define CROWD_PARAMS_HPP

namespace crowd {

// Model constants shared by both scales.  Naming follows the usual
// follower/leader convention: *_f quantities act on followers, *_l on
// leaders; r is the metrical repulsion radius, gamma/zeta the kernel
// exponents for the follower and leader repulsion respectively.
struct ModelParams {
    int n_topo = 10;       // size of the topological neighbourhood
    double c_r_f = 2.0;    // follower repulsion strength
    double c_r_l = 1.5;    // leader repulsion strength
    double c_a = 3.0;      // alignment strength
    double c_z = 0.2;      // random-walk relaxation strength
    double c_tau = 1.0;    // target relaxation strength
    double c_s = 1.0;      // speed relaxation strength
    double s_sq = 0.5;     // squared characteristic speed
    double r = 0.4;        // repulsion radius
    double zeta = 0.4;     // leader repulsion exponent
    double gamma = 1.0;    // follower repulsion exponent
    double sigma_sq = 1.0; // variance of the exploration noise z
    double dt = 0.1;       // time step
    double v_max = 10.0;   // post-step velocity cap, guards against blow-up
};

}  // namespace crowd

#endif
