pub mod counting;
pub mod enumeration;
pub mod error;
pub mod exact_q;
pub mod gf_space;
pub mod report;

pub use error::{Error, Result};
pub mod semilattice_verify;
pub mod sweep;
pub mod formula_check;
pub mod matrix;
pub mod scheme;
pub mod spectra;
pub mod clique_bounds;
pub mod cli;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/q_analogs.md")]
    struct QAnalogs;
    #[doc = include_str!("../../../book/src/subspaces.md")]
    struct Subspaces;
    #[doc = include_str!("../../../book/src/semilattice.md")]
    struct Semilattice;
    #[doc = include_str!("../../../book/src/scheme.md")]
    struct Scheme;
    #[doc = include_str!("../../../book/src/spectra.md")]
    struct Spectra;
    #[doc = include_str!("../../../book/src/clique_bound.md")]
    struct CliqueBound;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct CommandLine;
}
