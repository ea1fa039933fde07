#![allow(dead_code)]

#[allow(clippy::needless_range_loop)]
pub mod oracle;
