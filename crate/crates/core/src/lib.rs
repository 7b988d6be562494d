//! Exact computation of the connected-component sets of marked
//! surface-group representation varieties for compact connected Lie
//! groups, plus a numerical SO(3) verifier that evaluates the obstruction
//! indexing those components on explicit rotation tuples.
//!
//! The pipeline: [`group_model`] builds a group from covering data
//! (simple factors, torus rank, kernel generators) on top of the root data
//! in [`root_data`]; [`conjugacy`] handles classes of the cover in Kac
//! coordinates and their stabilizers; [`components`] applies the
//! classification; [`spincheck`] cross-checks the SO(3) answers with
//! floating-point quaternion arithmetic. Everything else is exact integer
//! and rational arithmetic built on the Smith normal form in [`intmat`].

pub mod abelian;
pub mod components;
pub mod conjugacy;
pub mod error;
pub mod group_model;
pub mod input;
pub mod intmat;
pub mod root_data;
pub mod spincheck;

pub use error::{Error, Result};
