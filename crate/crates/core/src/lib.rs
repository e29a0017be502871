//! Internal categories, anafunctors and localisation checks over finite
//! concrete ambient categories.

pub mod ambient;
pub mod ana;
pub mod error;
pub mod instances;
pub mod internal;
pub mod laws;
pub mod report;
pub mod sites;

pub use error::{Error, Result};
