#pragma once

namespace alive {

/// Moments of phi under nu in the i.i.d. scenario M_p(x, .) = nu, G_p = G.
struct IidMoments {
  double nu_phi = 0.0;     // nu(phi)
  double nu_phi2 = 0.0;    // nu(phi^2)
  double nu_g_phi = 0.0;   // nu(G phi)
  double nu_g_phi2 = 0.0;  // nu(G phi^2)
};

/// Asymptotic variance sigma_n^2(phi) of the predictor estimate from the
/// closed-form sum over q = 1..n, specialised to the i.i.d. scenario where
/// eta_q = nu, gamma_q(G)/gamma_n(G) = p0^(q-n) and
/// Q_{q,n}(phi_n) = G * p0^(n-q-1) * nu(phi_n) for q < n.
/// Throws InvalidMoments for inconsistent inputs.
double clt_variance_ideal(double p0, int n, const IidMoments& moments);

}  // namespace alive
