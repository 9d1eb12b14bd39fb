//! The guide under `book/`, compiled so that its listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/arithmetic.md")]
pub mod arithmetic {}

#[doc = include_str!("../../../book/src/maps.md")]
pub mod maps {}

#[doc = include_str!("../../../book/src/heights.md")]
pub mod heights {}

#[doc = include_str!("../../../book/src/lattes.md")]
pub mod lattes {}

#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
