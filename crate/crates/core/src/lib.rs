//! Exact simplicial cylinder DG rings over ℤ, horn rings, and horn filling
//! in `Hom(A, Cyl(B))` for semi-free `A`.
//!
//! The guide in `book/` walks through the modules in order; its code blocks
//! run as doctests.

pub mod dg;
pub mod horn;
pub mod json;
pub mod kan;
pub mod keller;
pub mod linalg;
pub mod nerve;
pub mod random;
pub mod semifree;
pub mod simplex;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/simplices.md")]
    mod simplices {}
    #[doc = include_str!("../../../book/src/rings.md")]
    mod rings {}
    #[doc = include_str!("../../../book/src/cylinders.md")]
    mod cylinders {}
    #[doc = include_str!("../../../book/src/horns.md")]
    mod horns {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    mod lifting {}
    #[doc = include_str!("../../../book/src/keller.md")]
    mod keller {}
    #[doc = include_str!("../../../book/src/filling.md")]
    mod filling {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
