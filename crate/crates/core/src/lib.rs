//! Distances between finite metric measure spaces.
//!
//! The box, Prohorov, Eurandom and observable distances are computed through their
//! optimal-transport representations, with certificates (couplings, pair sets,
//! thresholds) that re-evaluate to the reported values, and brute-force oracles
//! for small instances.

pub mod boxdist;
pub mod checks;
mod clique;
pub mod distortion;
pub mod error;
pub mod eurandom;
pub mod generate;
pub mod kyfan;
pub mod observable;
pub mod order;
pub mod pairset;
mod par;
pub mod prohorov;
mod scan;
pub mod space;
pub mod transport;

pub use boxdist::{box_bruteforce, box_distance, box_is_zero, compose_pairsets, dis_coupling, BoxCertificate, BoxOptions, Mode};
pub use distortion::{distortion, distortion_diag, distortion_of, enlargement, neighborhood, ExtendedReal};
pub use error::{Error, Result};
pub use eurandom::{dis_eur, eur_is_zero, eurandom_distance, EurCertificate, EurOptions};
pub use kyfan::{ky_fan, min_max_tail, tail_mass, RealFunction};
pub use observable::{
    dconc_bounds, dconc_bounds_with, dconc_pi_bounds, inner_kf_min, inner_kf_min_bruteforce, ConcBounds, ConcEffort, LipFunction,
    LowerCertificate,
};
pub use order::{dominates, mm_isomorphic, DEFAULT_MAP_BUDGET};
pub use pairset::PairSet;
pub use prohorov::{dis_delta_coupling, prohorov, prohorov_bruteforce, prohorov_strassen, ProhorovCertificate};
pub use space::{check_mass, product_space, pushforward, MMSpace, MetricSpace, INPUT_TOL, TOL};
pub use transport::{
    diagonal_coupling, glue, independent_coupling, map_coupling, max_mass_on, northwest_corner, product_measure, project13, Coupling,
    TriCoupling,
};
