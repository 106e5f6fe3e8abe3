//! Seeded random generators shared by the property suites.

// not every test file uses every helper
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stabint_core::poly::{qi, Poly};
use stabint_core::ratfunc::RatFunc;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random polynomial with degree in `0..=max_deg` and integer coefficients
/// in `-9..=9`; never zero.
pub fn rand_poly(r: &mut StdRng, max_deg: usize) -> Poly {
    loop {
        let deg = r.gen_range(0..=max_deg);
        let coeffs: Vec<_> = (0..=deg).map(|_| qi(r.gen_range(-9..=9))).collect();
        let p = Poly::from_coeffs(coeffs);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rand_nonzero_ratfunc(r: &mut StdRng, max_deg: usize) -> RatFunc {
    loop {
        let f = RatFunc::new(rand_poly(r, max_deg), rand_poly(r, max_deg));
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn rand_ratfunc(r: &mut StdRng, max_deg: usize) -> RatFunc {
    if r.gen_range(0..10) == 0 {
        return RatFunc::zero();
    }
    RatFunc::new(rand_poly(r, max_deg), rand_poly(r, max_deg))
}
