// mdbook cannot run listings that depend on an external crate, so every
// chapter is pulled in as a module doc and `cargo test --doc` runs them.
// One module per chapter keeps failures traceable to a file.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/chapter_1.md")]
pub mod chapter1 {}
#[doc = include_str!("src/chapter_2.md")]
pub mod chapter2 {}
#[doc = include_str!("src/chapter_3.md")]
pub mod chapter3 {}
#[doc = include_str!("src/chapter_4.md")]
pub mod chapter4 {}
#[doc = include_str!("src/chapter_5.md")]
pub mod chapter5 {}
