//! Restrictions of Laplace eigenfunctions to curves on the disc, the sphere and
//! the flat torus: traces, frequency windows, the energy identity and sweeps.
//!
//! The guide in `book/` walks through each module; its snippets run as doctests.

pub mod error;
pub mod experiments;
pub mod models;
pub mod rellich;
pub mod specfun;
pub mod traces;
pub mod windows;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/traces.md")]
    mod traces {}
    #[doc = include_str!("../../../book/src/windows.md")]
    mod windows {}
    #[doc = include_str!("../../../book/src/rellich.md")]
    mod rellich {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
