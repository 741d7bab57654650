//! Rational intersection geometry: concurrency of family lines through a
//! window, the lattice `Λ(P)`, the figures `F` and `F_l`, the cone
//! `C(A₀, B₀)`, the pigeonhole line, and the counting oracle.

mod concurrency;
mod counts;
mod figure;
mod lemmas;
mod point;
mod prop1;

pub use concurrency::{concurrency_check, concurrency_of, family_lines, lines_through, Concurrency, ConcurrencyReport};
pub use counts::{count_removed_oracle, type2_configurations, CountReport, CountingContext, PerLine, Type2Config};
pub use figure::{ConeSpec, FigureSpec, Variant};
pub use lemmas::{lemma2_check, lemma2_inequality, pigeonhole_applies, pigeonhole_clauses, pigeonhole_line, Lemma2};
pub use point::{intersect, Intersection, LatticePlane, RationalPoint};
pub use prop1::{find_l0, Case, L0Certificate, Preconditions, Prop1Input, Prop1Report, Prop1Verdict};
