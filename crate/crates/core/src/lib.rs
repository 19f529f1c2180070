//! Verification toolkit for monopole gerbes on flat G₂ backgrounds.
//!
//! * [`exterior`]: exact exterior algebra on ℝ⁷ and the form text grammar.
//! * [`g2_reps`]: G₂ type decompositions, pointwise identities, calibrations.
//! * [`chern_weil`]: curvature polynomials and the coassociative adjunction pairing.
//! * [`cech`]: integer cochain complexes, Smith normal form, gerbe classes.
//! * [`torus_field`]: Fourier forms on T⁷ and the spectral gerbe-connection solver.
//! * [`cy_product`]: the S¹ × T⁶ product example and its pushforward checks.
//! * [`report`]: run configuration and the JSON verification reports.

pub mod cech;
pub mod chern_weil;
pub mod cy_product;
pub mod error;
pub mod exterior;
pub mod g2_reps;
pub mod linalg;
pub mod report;
pub mod torus_field;

pub use cech::{Cochain, FiniteComplex, GerbeClass};
pub use chern_weil::{CurvPoly, FourManifold};
pub use error::{Error, Result};
pub use exterior::{Blade, CForm, Form, Rational};
pub use g2_reps::{Calibration, Convention, G2Structure};
pub use report::{Check, Report, RunConfig, Status};
pub use torus_field::{CoassocTorus, FourierForm, GerbeSolveResult};
