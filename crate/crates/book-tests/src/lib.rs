//! Compiles and runs the code listings of the guide in `book/` as
//! doc-tests, so that the guide cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/kernels.md")]
pub mod kernels {}

#[doc = include_str!("../../../book/src/sample-spaces.md")]
pub mod sample_spaces {}

#[doc = include_str!("../../../book/src/positivity.md")]
pub mod positivity {}

#[doc = include_str!("../../../book/src/hardy.md")]
pub mod hardy {}

#[doc = include_str!("../../../book/src/drury-arveson.md")]
pub mod drury_arveson {}

#[doc = include_str!("../../../book/src/conditioning.md")]
pub mod conditioning {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
