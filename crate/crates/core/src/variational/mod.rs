//! Trial-state energetics: coefficient tables, the interaction density
//! `w(k_ph)`, the energy breakdown and the explicit binding construction.

mod energy;
mod interaction;
mod lemma;
mod tau;
mod theorem;

pub use energy::{
    electron_energy_density, electron_kinetic_energy, energy_breakdown, EnergyBreakdown,
    EnergyQuadrature, InteractionRoute, PhotonProfile,
};
pub use interaction::{w_general, w_general_with_sign, w_oracle, w_specific, z_ph, VBlockSign};
pub use lemma::{
    a_lower_bound_constant, delta_equation_lhs, epsilon_lemma, f_lemma, lemma_bound,
    min_a_bound_check, solve_delta, solve_delta_for, zph_closed_specific, MinABoundReport, ZphAudit,
};
pub use tau::{random_small_table, tau_specific, Direction, PhotonFrame, Region, TauTable};
pub use theorem::{theorem_check, IntegrandSample, TheoremReport, SAMPLE_DIRECTION};
