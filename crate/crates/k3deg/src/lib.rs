//! Exact-arithmetic toolkit for nodal degenerations of quartic K3 surfaces.
//!
//! The crate models rational (1,1)-classes over an orthogonal working basis
//! `(h, v_1, ..., v_s)` with `h^2 = 4` and `v_j^2 = -2`, builds nodal
//! quartic families over the rationals, computes Picard-Lefschetz
//! monodromy and the weight filtration `W2 = ker N`, specializes classes
//! to the Picard lattice `<h, E_1, ..., E_k>` of the resolved central
//! fibre, and transports them back, verifying every linear-algebra and
//! polynomial identity exactly. No floating point anywhere.
//!
//! Start with [`pipeline::run`] for the end-to-end flow, or the `k3deg`
//! binary for the command-line interface. The mdbook guide under `book/`
//! walks through the concepts chapter by chapter; its code snippets run as
//! doctests of this crate.

pub mod central_fibre;
pub mod cli;
pub mod embed;
pub mod hodge;
pub mod jsonio;
pub mod lattice;
pub mod linalg;
pub mod monodromy;
pub mod nodal;
pub mod pipeline;
pub mod poly;
pub mod rat;
pub mod sample;
pub mod selftest;

pub use hodge::{RationalClass, WorkingBasis};
pub use lattice::{build_k3_lattice, pair, signature, GramMatrix, LatticeModel, LatticeVector};
pub use pipeline::{run, DegenerationRun, RunOptions};
pub use rat::Rat;

// The book's code blocks compile and run with the library's doctests,
// keeping the guide in sync with the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/lattices.md")]
    pub struct Lattices;
    #[doc = include_str!("../../../book/src/classes.md")]
    pub struct Classes;
    #[doc = include_str!("../../../book/src/monodromy.md")]
    pub struct Monodromy;
    #[doc = include_str!("../../../book/src/quartics.md")]
    pub struct Quartics;
    #[doc = include_str!("../../../book/src/degeneration.md")]
    pub struct Degeneration;
    #[doc = include_str!("../../../book/src/statistics.md")]
    pub struct Statistics;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct CliGuide;
}
