#pragma once

#include <cstdint>
#include <vector>

#include "alive/fk_model.hpp"
#include "alive/models/abc_hmm.hpp"
#include "alive/models/stable.hpp"

namespace alive {

/// Y_n = e_n * beta * exp(Z_n), Z_n = phi * Z_{n-1} + V_n, V_n ~ N(0, c),
/// e_n ~ St(0, xi1, xi2, xi3). A single latent-noise variance `c` is used.
struct StableSvParams {
  double beta = 1.0;
  double c = 0.01;
  double phi = 0.5;
  StableParams noise{1.0, 1.0, 1.75};

  void validate() const;
};

struct SvData {
  std::vector<double> latent;
  std::vector<double> observations;
};

SvData sv_simulate(const StableSvParams& params, int horizon, double z0, std::uint64_t seed);

/// ABC SV model over theta = (beta, c, phi) with the stable noise law fixed.
AbcHmm<StableSvParams> make_sv_hmm(std::vector<double> observations, double epsilon, double z0 = 0.0);

}  // namespace alive
