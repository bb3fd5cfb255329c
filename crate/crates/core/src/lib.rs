//! Exact computation of the explicit constants that bound `p`-power torsion of
//! CM abelian varieties over Lubin-Tate, cyclotomic and Kummer towers.
//!
//! Everything is integer or rational arithmetic. Large results are kept as
//! [`FactoredNat`] values so that astronomically large caps such as
//! `p^(2gC)` never have to be expanded. Irrational quantities are handled in
//! two ways: floors of `(1 + sqrt(p^m))^e` are decided by exact sign tests in
//! `Z[sqrt(p^m)]`, and the analytic totient inequalities use outward-rounded
//! dyadic intervals.
//!
//! Module map:
//!
//! * [`arith`]: primes, factoring, totient, valuations, quadratic floors.
//! * [`group_orders`]: orders of `GL_n` and `GSp_2n` over `Z/NZ`, with
//!   enumeration oracles.
//! * [`bounds`]: the extremal functions `Phi`, `Psi`, `H`, `G` and the
//!   inequalities they satisfy.
//! * [`constants`]: `L_g`, `C(d, M, h)` and the theorem-level torsion exponents.
//! * [`tables`]: the published tables of `Phi`, `H`, `G` and their verification.
//! * [`cli`]: the `cm-torsion` command line.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod constants;
mod error;
pub mod group_orders;
pub mod tables;

pub use arith::{AlgNum, FactoredNat, Rational};
pub use error::{Error, Result};
