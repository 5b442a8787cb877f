//! Rational maps between projective spaces attached to a configuration of
//! 2g points: Cremona inversions and their projections, Kumar's systems,
//! the forgetful map h_N, the theta-side systems and the checks tying them
//! together.

mod baselocus;
mod compare;
mod cremona;
mod forgetful;
mod kumar;
mod map;
mod theta;
mod weddle;

pub use baselocus::{
    extra_base_locus_scan, lemma_check, BaseLocusReport, Classification, LemmaReport, ScanEntry,
};
pub use compare::{compare_maps_up_to_pgl, required_samples, COMPARE_MARGIN};
pub use cremona::{compose_tau_cremona, cremona_inversion, standard_cremona, TauCremona};
pub use forgetful::{forgetful_h_n, subsets};
pub use kumar::{kumar_lambda, kumar_omega, segre_line_check, LineFiber};
pub use map::{contracts_rncs, Composed, PointMap, RationalMap};
pub use theta::{
    osculating_center_check, pc_dimension, restrict_to_pn, secant_theta_system, theta_system,
    OsculatingReport, RestrictedSystem,
};
pub use weddle::{weddle_check, WeddleReport};
