//! Doc-tested mirror of the user guide. Each module's documentation is one
//! chapter of `book/`, included verbatim, so `cargo test --doc` compiles and
//! runs every Rust snippet the rendered book shows. If a chapter drifts from
//! the library, the workspace tests fail. There is no API here.

#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/waveforms.md")]
pub mod waveforms {}

#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[doc = include_str!("../../../book/src/spreading-codec.md")]
pub mod spreading_codec {}

#[doc = include_str!("../../../book/src/companding.md")]
pub mod companding {}

#[doc = include_str!("../../../book/src/channel.md")]
pub mod channel {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
