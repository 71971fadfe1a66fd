pub mod cli;
pub mod coloring;
pub mod config_space;
pub mod error;
pub mod evolve;
pub mod integrals;
pub mod slater;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/configurations.md")]
    mod configurations {}
    #[doc = include_str!("../../../book/src/integrals.md")]
    mod integrals {}
    #[doc = include_str!("../../../book/src/slater-rules.md")]
    mod slater_rules {}
    #[doc = include_str!("../../../book/src/colorings.md")]
    mod colorings {}
    #[doc = include_str!("../../../book/src/trotter.md")]
    mod trotter {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
