//! The user guide, embedded chapter by chapter.
//!
//! Each module below carries one chapter of the guide whose Markdown
//! sources also build the rendered book under `book/` in the repository.
//! Embedding them here has one purpose: every code example in the guide
//! compiles and runs as a documentation test, so the prose cannot drift
//! from the library it describes.
//!
//! Read in order starting at [`introduction`], or jump to the chapter you
//! need.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/getting-started.md")]
pub mod getting_started {}

#[doc = include_str!("../../../book/src/pareto-optimality.md")]
pub mod pareto_optimality {}

#[doc = include_str!("../../../book/src/discriminant.md")]
pub mod discriminant {}

#[doc = include_str!("../../../book/src/classifier.md")]
pub mod classifier {}

#[doc = include_str!("../../../book/src/plane-filter.md")]
pub mod plane_filter {}

#[doc = include_str!("../../../book/src/benchmarks.md")]
pub mod benchmarks {}

#[doc = include_str!("../../../book/src/fair-search.md")]
pub mod fair_search {}

#[doc = include_str!("../../../book/src/custom-problems.md")]
pub mod custom_problems {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/reproducibility.md")]
pub mod reproducibility {}
