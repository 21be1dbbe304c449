//! Exact replay of the arithmetic behind the exclusion of order-3
//! automorphisms on numerical Godeaux surfaces.

pub mod adjoint;
pub mod cover;
pub mod cremona;
pub mod fibration;
pub mod pencil;
pub mod picard;
pub mod proof;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub mod overview {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    pub mod lattice {}
    #[doc = include_str!("../../../book/src/cover.md")]
    pub mod cover {}
    #[doc = include_str!("../../../book/src/pencil.md")]
    pub mod pencil {}
    #[doc = include_str!("../../../book/src/adjoint.md")]
    pub mod adjoint {}
    #[doc = include_str!("../../../book/src/fibration.md")]
    pub mod fibration {}
    #[doc = include_str!("../../../book/src/cremona.md")]
    pub mod cremona {}
    #[doc = include_str!("../../../book/src/proof.md")]
    pub mod proof {}
}
