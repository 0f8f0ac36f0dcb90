//! Exact wall-and-chamber computations for weak (tilt) stability conditions
//! on a polarised threefold, and the bookkeeping that turns the resulting
//! D4-D2-D0 counts into generating series.
//!
//! Modules, bottom-up:
//!
//! - [`numeric`]: rationals and real quadratic surds with exact comparison.
//! - [`charges`]: the numerical threefold and reduced Chern characters.
//! - [`stability`]: slope functions, heart positivity, the projection Π.
//! - [`walls`]: wall lines, Bogomolov–Gieseker checks, the first-wall
//!   certificate and SVG diagrams of the `(b, w)`-plane.
//! - [`counting`]: Euler-characteristic multiplicities, Toda's sum, `m̂`.
//! - [`modular`]: q-series, eta powers, Noether–Lefschetz assembly and the
//!   `T`/`S` transformation data.

pub mod charges;
pub mod counting;
pub mod modular;
pub mod numeric;
pub mod stability;
pub mod walls;

mod error;

pub use charges::{Charge, CurveCharge, ThreefoldData};
pub use error::{Error, ErrorKind, Result};
pub use numeric::{int, parse_rational, rat, Rational, Surd};
pub use stability::{SlopeValue, StabilityParam};
pub use walls::{FirstWallReport, Wall, WallLine};
