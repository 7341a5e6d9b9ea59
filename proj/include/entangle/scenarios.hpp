#pragma once

#include <optional>
#include <string_view>

#include "entangle/grid.hpp"
#include "entangle/observables.hpp"
#include "entangle/relations.hpp"

namespace entangle {

/// Symmetric anticorrelated pair: two equal-weight terms peaked at
/// (k1, k2) = (+k0, -k0) and (-k0, +k0), each of momentum width 1 / a.
/// Throws InvalidArgument unless a > 0.
GaussianSum paper_state(double a, double k0, double hbar = 1.0);

/// Exact moments of paper_state next to the closed-form values quoted for
/// the small k0 x regime. The quoted values are comparanda, not ground truth.
struct PaperComparison {
  double a = 0.0;
  double k0 = 0.0;
  double hbar = 1.0;
  MomentSet computed;       ///< analytic Gaussian-identity path
  double quoted_x1x2 = 0.0;  ///< k0^2 a^4 / 2
  double quoted_p1p2 = 0.0;  ///< -2 hbar^2 k0^2
  double ratio_x = 0.0;      ///< computed <x1 x2> / quoted_x1x2
  double ratio_p = 0.0;      ///< computed <p1 p2> / quoted_p1p2
  double oracle_x1x2 = 0.0;
  double oracle_p1p2 = 0.0;
  double grid_x1x2 = 0.0;  ///< from the synthesized grid state
  double grid_p1p2 = 0.0;
  bool oracle_agreement = false;
};

/// InvalidArgument for k0 == 0, GridTooCoarse if the grid cannot hold the
/// state, OracleDisagreement if analytic and quadrature values differ by
/// more than 1e-8 relative or the means are not zero within 1e-10.
PaperComparison compare_with_paper(double a, double k0, const GridSpec& grid, double hbar = 1.0);

enum class SlitProfile { rectangular, smoothed };

std::string_view to_string(SlitProfile p);

/// Aperture transmission profile. The smoothed profile tapers each edge with
/// a raised cosine over `edge_fraction * width`, inside the nominal width.
struct SlitWindow {
  double center = 0.0;
  double width = 1.0;
  SlitProfile profile = SlitProfile::rectangular;
  double edge_fraction = 0.1;

  /// InvalidArgument unless width > 0 and 0 < edge_fraction <= 0.5.
  void validate() const;
  double operator()(double x) const;

  bool operator==(const SlitWindow&) const = default;
};

/// Multiplies the chosen particle's axis by the window and renormalizes
/// (ideal post-selection on passage). WrongBasis unless position basis;
/// AnnihilatedState if less than 1e-12 of the norm survives.
TwoParticleState apply_slit(const TwoParticleState& state, int particle, const SlitWindow& slit);

/// Coherent projection of particle 1 onto the slit:
/// psi2(x2) ∝ integral window(x1) Psi(x1, x2) dx1.
SingleParticleState conditional_particle2(const TwoParticleState& state, const SlitWindow& slit);

enum class PopperCase { a, b };

/// Particle-2 statistics conditioned on particle 1 passing slit A.
///
/// The conditioned_* fields are the particle-2 marginal of the post-selected
/// joint state (what coincidence counting samples); the projected_* fields
/// are the coherent-projection pure state of conditional_particle2. Case (a)
/// also passes particle 2 through slit B; case (b) leaves it open.
struct PopperReport {
  PopperCase case_label = PopperCase::b;
  SlitWindow slit_a;
  std::optional<SlitWindow> slit_b;
  double conditioned_dq2 = 0.0;
  double conditioned_dp2 = 0.0;
  double product = 0.0;
  double heisenberg_bound = 0.0;  ///< hbar / 2
  bool satisfied = false;
  double projected_dq2 = 0.0;
  double projected_dp2 = 0.0;
  double projected_product = 0.0;
  Dispersion unconditioned;        ///< particle-2 marginal before any slit
  UncertaintyReport joint_report;  ///< on the pre-conditioning entangled state
};

PopperReport popper_run(double a, double k0, const SlitWindow& slit_a, const std::optional<SlitWindow>& slit_b,
                        const GridSpec& grid, double hbar = 1.0);

}  // namespace entangle
