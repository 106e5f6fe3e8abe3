//! Hermite reduction: f = delta(g) + simple part, with respect to d/dx.
//!
//! The reduction peels repeated denominator factors one multiplicity at a
//! time, leaving a proper remainder over a squarefree denominator. The
//! polynomial part of the input is integrated termwise into the rational
//! part, so `f` is integrable in Q(x) exactly when the simple part vanishes.

use crate::poly::{qi, Q};
use crate::ratfunc::{Derivation, RatFunc};
use num::One;

/// Result of Hermite reduction: `input = d/dx(rational_part) + simple_part`.
///
/// `simple_part` is proper with a squarefree denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteResult {
    pub rational_part: RatFunc,
    pub simple_part: RatFunc,
}

/// Hermite reduction of `f` with respect to d/dx.
pub fn hermite_reduce(f: &RatFunc) -> HermiteResult {
    let (poly_part, proper) = f.poly_divrem();
    let mut g = RatFunc::from_poly(poly_part.antiderivative());
    let mut num = proper.numer().clone();
    let mut den = proper.denom().clone();
    if num.is_zero() {
        return HermiteResult {
            rational_part: g,
            simple_part: RatFunc::zero(),
        };
    }
    for (v, mult) in crate::poly::squarefree_factorization(&den) {
        if mult < 2 {
            continue;
        }
        let dv = v.derivative();
        for k in (2..=mult).rev() {
            let u = den.exact_div(&v.pow(k as u32));
            // split num/(u v^k): num = b*(u v') + c*v with deg b < deg v
            let udv = &u * &dv;
            let (gcd, s, _) = udv.ext_gcd(&v);
            debug_assert!(gcd.is_one(), "u*v' and v must be coprime");
            let (_, b) = (&s * &num).divmod(&v);
            let c = (&num - &(&b * &udv)).exact_div(&v);
            let k1 = qi(k as i64 - 1);
            // num/(u v^k) = d/dx(-b / ((k-1) v^(k-1))) + (b' u/(k-1) + c) / (u v^(k-1))
            g = &g + &RatFunc::new(-&b, v.pow(k as u32 - 1).scale(&k1));
            num = &(&b.derivative() * &u).scale(&(Q::one() / k1)) + &c;
            den = &u * &v.pow(k as u32 - 1);
            if num.is_zero() {
                break;
            }
        }
        if num.is_zero() {
            break;
        }
    }
    HermiteResult {
        rational_part: g,
        simple_part: RatFunc::new(num, den),
    }
}

/// Checks the defining identity of a reduction against its input.
pub fn verify(f: &RatFunc, h: &HermiteResult) -> bool {
    let rebuilt = &h.rational_part.derivative(Derivation::DDx) + &h.simple_part;
    let squarefree_den = {
        let d = h.simple_part.denom();
        d.gcd(&d.derivative()).is_constant()
    };
    let proper =
        h.simple_part.is_zero() || h.simple_part.numer().degree() < h.simple_part.denom().degree();
    rebuilt == *f && squarefree_den && proper
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::rat;

    #[test]
    fn pure_double_pole() {
        // 1/x^2 = d/dx(-1/x)
        let f = rat(&[1], &[0, 0, 1]);
        let h = hermite_reduce(&f);
        assert_eq!(h.rational_part, rat(&[-1], &[0, 1]));
        assert!(h.simple_part.is_zero());
        assert!(verify(&f, &h));
    }

    #[test]
    fn already_squarefree_denominator() {
        let f = rat(&[1], &[0, -1, 1]); // 1/(x(x-1))
        let h = hermite_reduce(&f);
        assert!(h.rational_part.is_zero());
        assert_eq!(h.simple_part, f);
        assert!(verify(&f, &h));
    }

    #[test]
    fn mixed_multiplicity_pole() {
        // (x+1)/(x-1)^2 = 1/(x-1) + 2/(x-1)^2 -> (-2/(x-1), 1/(x-1))
        let f = rat(&[1, 1], &[1, -2, 1]);
        let h = hermite_reduce(&f);
        assert_eq!(h.rational_part, rat(&[-2], &[-1, 1]));
        assert_eq!(h.simple_part, rat(&[1], &[-1, 1]));
        assert!(verify(&f, &h));
    }

    #[test]
    fn polynomial_part_is_integrated() {
        // x^2 + 1/x^3
        let f = &rat(&[0, 0, 1], &[1]) + &rat(&[1], &[0, 0, 0, 1]);
        let h = hermite_reduce(&f);
        assert!(h.simple_part.is_zero());
        assert!(verify(&f, &h));
        assert_eq!(
            h.rational_part,
            &rat(&[0, 0, 0, 1], &[3]) + &rat(&[-1], &[0, 0, 2])
        );
    }
}
