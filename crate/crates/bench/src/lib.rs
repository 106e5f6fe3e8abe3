//! Shared input builders for the criterion benchmarks.

use stabint_core::poly::Poly;
use stabint_core::ratfunc::RatFunc;

/// (x^2+x+1)^3 (x-1)^2 x / ((x+2)^2 (x^2+1)^3): a rational function with
/// genuine pole multiplicities, the shape Hermite reduction is for.
pub fn layered_ratfunc() -> RatFunc {
    let num = &(&Poly::from_ints(&[1, 1, 1]).pow(3) * &Poly::from_ints(&[-1, 1]).pow(2))
        * &Poly::from_ints(&[0, 1]);
    let den = &Poly::from_ints(&[2, 1]).pow(2) * &Poly::from_ints(&[1, 0, 1]).pow(3);
    RatFunc::new(num, den)
}
