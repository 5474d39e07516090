//! Segmented Varshamov-Tenengolts codes.
//!
//! A codeword is a concatenation of length-`b` segments, each drawn from a VT
//! class restricted by a prefix/suffix role. Every segment may suffer at most
//! one edit (deletion, insertion, or either, depending on the channel), and
//! the decoders recover the transmitted word one segment at a time.

pub mod bounds;
pub mod channel;
pub mod code;
pub mod codebook;
pub mod decoder;
mod enumerate;
pub mod error;
mod rank;
pub mod seq;
pub mod verify;
pub mod vt;

pub use channel::{apply, EditPattern, PatternSpace, SegmentEdit};
pub use code::{build_code, set_sizes, ChannelKind, CodeSet, SegmentedCode, SetSizes};
pub use decoder::{decode, DecodeTrace, Decoded, InferredEdit, SegmentTrace};
pub use error::{Error, Result};
pub use seq::Seq;
pub use vt::VtParams;
