//! Lines `L(A, B, C)`, heights, removal intervals `Δ(L)` and the families
//! `C(n)`, `C(n, l)`, `C(n, l, k)`.

mod enumerate;
mod line;
mod pair;

pub use enumerate::{classify, enumerate_lines, enumerate_rationals, enumerate_removals, FamilyIndex};
pub use line::{Height, Line, RemovalInterval, Source};
pub use pair::{exp_to_rat, Pair};
