// Tour of the core objects: classify a parameter point, enumerate a small
// torus exactly, then sample the same model and compare densities.

#include <cstdio>

#include <hexmark/hexmark.hpp>

using namespace hexmark;

int main() {
  // The antiferromagnetic lattice gas sits on the E-C transition line.
  const ModelPoint point = preset("ising_antiferro");
  const RegionLabel label = classify(point.energies);
  std::printf("model: x=%g p=%g a=%g  ->  e_C=%g e_H=%g e_F=%g\n", point.geo.x, point.geo.p,
              point.geo.a, point.energies.c, point.energies.h, point.energies.f);
  std::printf("ground label: %s  (Peierls argument: %s)\n", label.name().c_str(),
              label.peierls ? "yes" : "no");

  const HexTorus small(3, 3);
  const Temperature T(0.5);
  const ExactSummary sum = enumerate(small, point.energies, T);
  std::printf("3x3 exact: log Z = %.6f, filled density = %.4f, P(vertex in H/F) = %.4f\n",
              sum.log_Z, sum.expectations.at("filled_density"),
              sum.expectations.at("vertex_HF_prob"));

  const HexTorus torus(6, 6);
  ChainSettings settings;
  settings.seed = 7;
  settings.sweeps = 3000;
  settings.burn_in = 500;
  const auto series = run_chain(Configuration(torus), point.energies, T, settings);
  double density = 0;
  for (const auto& obs : series) density += obs.state_frac[1] + obs.state_frac[3];
  std::printf("6x6 chain: %zu records, mean C+F vertex fraction = %.4f\n", series.size(),
              density / static_cast<double>(series.size()));

  const UniquenessCertificate cert = disagreement_certificate(point.energies, T);
  std::printf("disagreement estimate p_i = %.4f vs threshold %.2f -> %s\n", cert.p_i, cert.p_c,
              cert.unique ? "unique Gibbs measure" : "no certificate");
  return 0;
}
