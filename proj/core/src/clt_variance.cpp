#include "alive/oracles/clt_variance.hpp"

#include <cmath>

#include "alive/errors.hpp"

namespace alive {

double clt_variance_ideal(double p0, int n, const IidMoments& m) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidMoments("p0 = nu(G) must be in (0, 1)");
  if (n < 1) throw InvalidMoments("n must be >= 1");
  const double var_phi = m.nu_phi2 - m.nu_phi * m.nu_phi;
  if (var_phi < -1e-12) throw InvalidMoments("nu(phi^2) < nu(phi)^2");
  if (m.nu_g_phi2 > m.nu_phi2 + 1e-12 || m.nu_g_phi2 < -1e-12)
    throw InvalidMoments("nu(G phi^2) must lie in [0, nu(phi^2)]");
  if (m.nu_g_phi * m.nu_g_phi > p0 * m.nu_g_phi2 + 1e-12)
    throw InvalidMoments("nu(G phi)^2 exceeds nu(G) nu(G phi^2)");

  // phi_n = phi - nu(phi); nu(phi_n) = 0 and nu(phi_n^2) = Var_nu(phi)
  const double nu_centered = 0.0;
  double sum = 0.0;
  for (int q = 1; q <= n; ++q) {
    const double ratio2 = std::pow(p0, 2.0 * (q - n));  // (gamma_q(G) / gamma_n(G))^2
    double term;
    if (q == n) {
      term = std::max(var_phi, 0.0);
    } else {
      // Q_{q,n}(phi_n) = c G; its variance under nu is c^2 p0 (1 - p0)
      const double c = std::pow(p0, n - q - 1) * nu_centered;
      term = c * c * p0 * (1.0 - p0);
    }
    sum += ratio2 * term;
  }
  return p0 * sum;
}

}  // namespace alive
