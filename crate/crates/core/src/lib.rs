//! Exact analysis of cooperative games through linear programming.
//!
//! A game enters as a coalition table, a community (group-matching) game, a
//! normal-form game or a linear exchange economy. The gains function
//! `F(x)` is the value of an LP parameterised by the population vector `x`;
//! its dual optimal face is the superdifferential, and everything else
//! (cores, Euler gaps, saddle points, payment rules) is read off those two
//! faces.
//!
//! Every computation is generic over [`scalar::Scalar`]. The default type
//! parameter is [`Rational`], for which results are exact. The `*F64`
//! aliases run the same code in floating point with a small tolerance.
//!
//! ```
//! use coopeuler::game::{CoalitionGame, CommunityGame, PopulationVector};
//! use coopeuler::homog::{f_value, infinitesimal_euler_gap};
//! use coopeuler::scalar::Scalar;
//! use coopeuler::Rational;
//!
//! let q = |n| Rational::from_int(n);
//! let glove = CoalitionGame::new(2, vec![q(0), q(0), q(0), q(1)]).unwrap();
//! let cg = CommunityGame::from_coalition_game(&glove).unwrap();
//! let x = PopulationVector::new(vec![q(2), q(1)]).unwrap();
//! assert_eq!(f_value(&cg, &x).unwrap(), q(1));
//! assert_eq!(infinitesimal_euler_gap(&cg, &x).unwrap(), q(0));
//! ```

pub mod charfn;
mod error;
pub mod exchange;
pub mod game;
pub mod homog;
pub mod incentives;
pub mod lp;
pub mod scalar;
pub mod solutions;

pub use error::{Error, Result};

/// Arbitrary-precision rational, the exact scalar.
pub type Rational = num_rational::BigRational;

pub type CoalitionGameF64 = game::CoalitionGame<f64>;
pub type CommunityGameF64 = game::CommunityGame<f64>;
pub type NormalFormGameF64 = game::NormalFormGame<f64>;
pub type PopulationVectorF64 = game::PopulationVector<f64>;
pub type ExchangeEconomyF64 = exchange::ExchangeEconomy<f64>;
pub type LinearProgramF64 = lp::LinearProgram<f64>;
