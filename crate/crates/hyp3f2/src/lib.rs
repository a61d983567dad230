//! Three-term relations for the hypergeometric function `3F2` of unit argument,
//! with arbitrary integer parameter shifts.
//!
//! The crate works in the five parameter symbols `a0, a1, a2, a3, a4`
//! (denominator parameters are also written `b1 = a3`, `b2 = a4`) and provides:
//!
//! - [`polyrat`]: exact sparse multivariate polynomials and rational functions
//!   over the rationals, the field in which every relation coefficient lives;
//! - [`contiguous`]: the four families of contiguous matrices, their
//!   determinants and compatibility conditions;
//! - [`connection`]: lattice-path products building the connection matrix
//!   `A(a;p)`, its determinant `delta(a;p)`, and the coefficients `u(a)`,
//!   `v(a)` of the three-term relation
//!   `h(a) = u(a) h(a+p) + v(a) h(a+q)`;
//! - [`principal`]: the commuting principal parts `B_i(a)`, their products,
//!   and exact-rational checks of the Laurent limit that connects them to the
//!   connection matrices;
//! - [`symmetry`]: the order-72 affine symmetry group acting on parameters and
//!   shift vectors, fundamental-domain reduction, and coefficient covariance;
//! - [`numeric`]: a floating-point oracle (complex gamma, the renormalized
//!   series at unit argument, its six companion functions) used to verify
//!   every relation numerically.

pub mod contiguous;
pub mod connection;
pub mod numeric;
pub mod polyrat;
pub mod principal;
pub mod symmetry;
pub(crate) mod zpoly;
