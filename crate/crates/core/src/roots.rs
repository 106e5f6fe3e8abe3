//! Exact root detection over the integers and rationals.
//!
//! Integer roots are isolated with Sturm sequences and bisection inside the
//! Cauchy bound, so no integer factorization of large constant terms is ever
//! needed. Rational roots reduce to integer roots of the monicized transform.
//! Irreducibility over Q is decided by the squarefree test, root tests for
//! degree <= 3, and Kronecker's method (bounded) beyond that.

use crate::poly::{Poly, Q};
use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};

/// Raised when the bounded Kronecker search cannot settle irreducibility.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("irreducibility over Q undecided within search limits")]
pub struct IrreducibilityUndecided;

/// Sturm chain of a squarefree polynomial.
fn sturm_chain(q: &Poly) -> Vec<Poly> {
    let mut chain = vec![q.clone(), q.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        if chain[n - 1].is_constant() {
            return chain;
        }
        let (_, r) = chain[n - 2].divmod(&chain[n - 1]);
        chain.push(-&r);
    }
}

/// Sign variations of the chain at `x`, ignoring zeros.
fn variations(chain: &[Poly], x: &Q) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None; // sign as is_positive
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Integer upper bound on the absolute value of all complex roots
/// (Cauchy bound, rounded up).
fn root_bound(p: &Poly) -> BigInt {
    let lc = p.lc().abs();
    let mut max = Q::zero();
    for c in p.coeffs() {
        let r = c.abs() / &lc;
        if r > max {
            max = r;
        }
    }
    let b = Q::one() + max;
    b.numer().div_ceil(b.denom())
}

/// All integer roots of a nonzero polynomial, sorted ascending.
pub fn integer_roots(p: &Poly) -> Vec<BigInt> {
    assert!(!p.is_zero(), "integer roots of the zero polynomial");
    if p.is_constant() {
        return Vec::new();
    }
    let mut q = crate::poly::squarefree_part(p);
    let bound = root_bound(&q);
    let mut chain = sturm_chain(&q);
    let mut roots: Vec<BigInt> = Vec::new();
    let half = Q::new(BigInt::one(), BigInt::from(2));
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        if q.is_constant() {
            break;
        }
        if lo == hi {
            let x = Q::from_integer(lo);
            if q.eval(&x).is_zero() {
                roots.push(x.numer().clone());
            }
            continue;
        }
        let a = Q::from_integer(lo.clone()) - &half;
        let b = Q::from_integer(hi.clone()) + &half;
        // Half-integer endpoint roots are not integers; deflate so the
        // Sturm counts below are taken at non-roots.
        let mut deflated = false;
        for r in [&a, &b] {
            if q.eval(r).is_zero() {
                let lin = Poly::from_coeffs(vec![-r.clone(), Q::one()]);
                q = q.exact_div(&lin);
                deflated = true;
            }
        }
        if deflated {
            chain = sturm_chain(&q);
            stack.push((lo, hi));
            continue;
        }
        if variations(&chain, &a) == variations(&chain, &b) {
            continue; // no roots in (a, b)
        }
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid + 1, hi));
    }
    roots.sort();
    roots
}

/// All rational roots of a nonzero polynomial.
///
/// Substituting `x = y / lc` turns the primitive integer form into a monic
/// integer polynomial in `y`, whose rational roots are integers.
pub fn rational_roots(p: &Poly) -> Vec<Q> {
    assert!(!p.is_zero(), "rational roots of the zero polynomial");
    if p.is_constant() {
        return Vec::new();
    }
    let ints = p.primitive_integer_coeffs();
    let d = ints.len() - 1;
    let lead = ints[d].clone();
    // q(y) = lead^(d-1) * p(y/lead) is monic with integer coefficients
    // c_i * lead^(d-1-i); its integer roots are lead * (roots of p)
    let mut coeffs = Vec::with_capacity(d + 1);
    for (i, c) in ints.iter().enumerate() {
        if i == d {
            coeffs.push(Q::one());
        } else {
            coeffs.push(Q::from_integer(c * num::pow::pow(lead.clone(), d - 1 - i)));
        }
    }
    let monic = Poly::from_coeffs(coeffs);
    integer_roots(&monic)
        .into_iter()
        .map(|r| Q::new(r, lead.clone()))
        .collect()
}

/// Positive divisors of `n` (n != 0) by trial division, `None` when the
/// search would exceed the iteration cap.
fn positive_divisors(n: &BigInt, cap: u64) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    let mut iters = 0u64;
    while &d * &d <= n {
        iters += 1;
        if iters > cap {
            return None;
        }
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let co = &n / &d;
            if co != d {
                large.push(co);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Kronecker search for a nontrivial factor; `Ok(true)` means reducible.
fn kronecker_reducible(p: &Poly) -> Result<bool, IrreducibilityUndecided> {
    let d = p.degree().unwrap();
    const TUPLE_CAP: u64 = 200_000;
    const DIVISOR_CAP: u64 = 1_000_000;
    for k in 2..=d / 2 {
        // sample points 0, 1, -1, 2, -2, ... (p has no rational roots here)
        let points: Vec<Q> = (0..)
            .map(|i: i64| {
                if i % 2 == 0 {
                    qi_big(i / 2 + i % 2)
                } else {
                    qi_big(-(i / 2 + 1))
                }
            })
            .take(k + 1)
            .collect();
        let values: Vec<BigInt> = points
            .iter()
            .map(|x| {
                let v = p.eval(x);
                // integer-normalized p would give integers; scale away denom
                v.numer() * v.denom().signum()
            })
            .collect();
        let mut divisor_lists: Vec<Vec<BigInt>> = Vec::new();
        for (i, v) in values.iter().enumerate() {
            let divs = positive_divisors(v, DIVISOR_CAP).ok_or(IrreducibilityUndecided)?;
            let mut opts: Vec<BigInt> = Vec::new();
            for dv in divs {
                if i == 0 {
                    opts.push(dv); // sign symmetry: fix first value positive
                } else {
                    opts.push(dv.clone());
                    opts.push(-dv);
                }
            }
            divisor_lists.push(opts);
        }
        let total: u64 = divisor_lists
            .iter()
            .map(|l| l.len() as u64)
            .try_fold(1u64, |a, b| a.checked_mul(b))
            .unwrap_or(u64::MAX);
        if total > TUPLE_CAP {
            return Err(IrreducibilityUndecided);
        }
        let mut idx = vec![0usize; divisor_lists.len()];
        loop {
            let candidate_pts: Vec<(Q, Q)> = points
                .iter()
                .zip(idx.iter().enumerate())
                .map(|(x, (i, &j))| (x.clone(), Q::from_integer(divisor_lists[i][j].clone())))
                .collect();
            let g = Poly::interpolate(&candidate_pts);
            if g.degree() == Some(k) {
                let (_, r) = p.divmod(&g);
                if r.is_zero() {
                    return Ok(true);
                }
            }
            // advance the odometer
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < divisor_lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    Ok(false)
}

fn qi_big(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Irreducibility over Q.
///
/// Complete for squarefree inputs of degree <= 3 via root tests; degree >= 4
/// falls back to a bounded Kronecker factor search.
pub fn is_irreducible(p: &Poly) -> Result<bool, IrreducibilityUndecided> {
    match p.degree() {
        None | Some(0) => Ok(false),
        Some(1) => Ok(true),
        Some(d) => {
            if !p.gcd(&p.derivative()).is_constant() {
                return Ok(false); // repeated factor
            }
            if !rational_roots(p).is_empty() {
                return Ok(false);
            }
            if d <= 3 {
                return Ok(true); // no linear factor and degree <= 3
            }
            kronecker_reducible(p).map(|red| !red)
        }
    }
}
