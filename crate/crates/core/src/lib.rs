//! Hall algebras of finite-type quiver representations over prime fields and
//! of their bounded derived categories, computed with exact arithmetic.

pub mod classical;
pub mod complex;
pub mod config;
pub mod element;
pub mod error;
pub mod field;
pub mod graded;
pub mod hall_derived;
pub mod heart;
pub mod homotopy;
pub mod label;
pub mod quiver;
pub mod rep;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
