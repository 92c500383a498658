//! Compile and run the code blocks in the book as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/driving.md")]
pub mod driving {}

#[doc = include_str!("../../../book/src/floquet.md")]
pub mod floquet {}

#[doc = include_str!("../../../book/src/sweeps.md")]
pub mod sweeps {}
