//! Norms, energies and smoothing diagnostics.

pub mod decay;
pub mod degiorgi;
pub mod energy;
pub mod gronwall;
pub mod moser;
pub mod norms;
pub mod property_p;
pub mod recursion;
pub mod trace_probe;

pub use decay::{verify_decay, DecayFit, DecayModel};
pub use degiorgi::{degiorgi_least_level, degiorgi_sequence, DeGiorgiReport, LevelSearch};
pub use energy::{energy_functional, l1_mu, uniform_weight};
pub use gronwall::{decay_exponent, gronwall_envelope};
pub use moser::{moser_ladder, power_identity, LadderReport};
pub use norms::{bulk_norm, sup_norm, trace_norm, x_norm, xvec_norm};
pub use property_p::{property_p_classify, EnsembleRun, PropertyVerdict};
pub use recursion::{recursion_lemma, RecursionReport};
pub use trace_probe::{trace_probe, TraceProbe};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("exponent {0} must be at least 1")]
    Exponent(f64),
    #[error("{0}")]
    Input(String),
}
