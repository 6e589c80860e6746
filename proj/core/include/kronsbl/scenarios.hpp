#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "kronsbl/dictionary.hpp"
#include "kronsbl/tensor.hpp"

namespace kronsbl {

using Rng = std::mt19937_64;

/// Circularly-symmetric complex Gaussian sample with E|z|^2 = variance.
Complex complex_normal(Rng& rng, double variance);

struct NoisyMeasurement {
  CVector y;
  double noise_variance = 0.0;  ///< per-entry sigma_t^2
};

/// Adds noise with sigma_t^2 = ||s||^2 / (len * 10^(snr/10)). An infinite SNR
/// returns the signal unchanged. Throws DegenerateInput for a zero signal.
NoisyMeasurement add_noise_at_snr(const CVector& signal, double snr_db, Rng& rng);

struct GroundTruth {
  Shape shape;                               ///< measurement dimensions M_i
  std::vector<std::vector<double>> params;   ///< psi_i, ascending, u-domain
  std::vector<CVector> coefs;                ///< x_i matching params
  double noise_variance = 0.0;
  CVector clean;
};

struct KronSparseOptions {
  Index order = 3;
  Index grid_points = 12;
  Index nonzeros = 4;
  double amplitude_lo = 0.5;
  double amplitude_hi = 1.5;
  double spacing = 0.5;
};

struct KronSparseScene {
  GroundTruth truth;
  std::vector<double> grid;               ///< shared uniform grid on [-1, 1)
  std::vector<CMatrix> dictionaries;      ///< M x N steering dictionaries
  std::vector<std::vector<Index>> supports;  ///< sorted 0-based grid indices
  std::vector<CVector> x;                 ///< dense per-dimension coefficients
  CVector x_full;                         ///< (x)_i x_i
};

/// On-grid Kronecker-sparse scene: I steering dictionaries M x N, each x_i
/// with `nonzeros` entries at uniformly chosen grid positions and amplitudes
/// U[lo, hi].
KronSparseScene gen_kron_sparse(Index m, Rng& rng, const KronSparseOptions& opts = {});

struct OffgridOptions {
  Index irs_elements = 256;  ///< L
  double lower = -0.9;
  double upper = 0.9;
  double min_separation = 0.1;
  double coef_variance = 2.0;
  int max_attempts = 10000;
};

struct OffgridScene {
  GroundTruth truth;
  CMatrix omega;  ///< L x M, entries exp(j phi), phi ~ U[0, pi]
  ColumnFunction column = ColumnFunction::steering(1);  ///< h(u) = Omega^T a_L(u)
};

/// Single-dimension compressed scene with S sources. Throws ConfigError when
/// the separation constraint cannot be met in max_attempts draws.
OffgridScene gen_offgrid_scene(Index m, Index sources, Rng& rng, const OffgridOptions& opts = {});

inline constexpr std::array<double, 4> kWorstCaseTruths{-0.505, -0.105, 0.105, 0.505};

/// M = 60 compressed scene with sources at the fixed worst-case points and
/// unit coefficients; rng only draws Omega.
OffgridScene gen_worst_case(Rng& rng, Index irs_elements = 256);

struct IrsOptions {
  Index bs_antennas = 16;    ///< R
  Index ms_antennas = 6;     ///< T
  Index irs_elements = 256;  ///< L
  Index configurations = 40; ///< K_I
  Index pilots = 20;         ///< K_P
  Index ms_paths = 3;        ///< P_MS
  double alpha_ms_lo = 0.3, alpha_ms_hi = 0.5;
  double phi_ms_lo = -0.2, phi_ms_hi = 0.2;
  double phi_bs_lo = 0.3, phi_bs_hi = 0.5;
  double alpha_bs_lo = 0.0, alpha_bs_hi = 0.5;
  double min_separation = 0.07;
  double spacing = 0.5;
  int max_attempts = 10000;
};

struct IrsScenario {
  Index r = 16, t = 6, l = 256, k_i = 40, k_p = 20;
  Index p_ms = 3, p_bs = 1;
  CMatrix omega;   ///< L x K_I, entries exp(j phi) / sqrt(L), phi ~ U[0, pi]
  CMatrix pilots;  ///< G, T x K_P, entries exp(j phi) / sqrt(T), phi ~ U[0, 2 pi)
  CVector beta_ms;
  CVector beta_bs;
  double alpha_ms = 0.0;
  std::vector<double> phi_ms;
  double phi_bs = 0.0;
  std::vector<double> alpha_bs;
  double zeta = 0.0;  ///< sqrt(L R T / (P_MS P_BS))
  double spacing = 0.5;
};

struct IrsScene {
  IrsScenario scenario;
  /// psi_1 = phi_MS,p - phi_BS, psi_2 = -alpha_MS, psi_3 = alpha_BS,p with
  /// x_1 = beta_MS, x_2 = zeta, x_3 = beta_BS.
  GroundTruth truth;
  /// h_1 = Omega^T a_L, h_2 = G^T a_T, h_3 = a_R.
  std::vector<ColumnFunction> columns;
  std::vector<CVector> factors;  ///< the three Kronecker factors of the clean measurement
};

IrsScene gen_irs_scene(Rng& rng, const IrsOptions& opts = {});

/// Phi_MS (L x T) and Phi_BS (R x L) of the geometric channel model.
CMatrix irs_ms_channel(const IrsScenario& sc);
CMatrix irs_bs_channel(const IrsScenario& sc);
/// Phi_BS diag(omega) Phi_MS, R x T.
CMatrix cascaded_channel(const IrsScenario& sc, const CVector& omega);
/// [vec(Y_1); ...; vec(Y_KI)] with Y_k = Phi_BS diag(omega_k) Phi_MS G, built
/// from the channel matrices.
CVector irs_measurement_from_channels(const IrsScenario& sc);

/// JSON description of a generated scene (dims, seed, truths).
std::string scenario_json(std::string_view experiment, std::uint64_t seed, const GroundTruth& truth);

}  // namespace kronsbl
