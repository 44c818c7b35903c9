//! Each guide chapter is included as a doc comment, so `cargo test -p
//! book-tests` runs every Rust snippet in book/src.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/objects.md")]
pub mod objects {}
#[doc = include_str!("../../../book/src/morphisms.md")]
pub mod morphisms {}
#[doc = include_str!("../../../book/src/pairs.md")]
pub mod pairs {}
#[doc = include_str!("../../../book/src/tasks.md")]
pub mod tasks {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/judging.md")]
pub mod judging {}
#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}
#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod pipeline {}
#[doc = include_str!("../../../book/src/reproducibility.md")]
pub mod reproducibility {}
