//! Elementary-integrability deciders over Q(x).
//!
//! Four pieces feed the stability layer: in-field integrability (via Hermite
//! reduction), the Liouville-Hardy test for `f*log(x)`, the
//! differential-reduced predicate, and a Risch-type polynomial ODE solver for
//! `P*b^m*exp(g)` integrands. All decisions reduce to gcds, resultants and
//! exact linear algebra over Q; no root finding over C is ever needed.

use crate::hermite::hermite_reduce;
use crate::linalg::Mat;
use crate::poly::{qi, Poly, Q};
use crate::ratfunc::{Derivation, RatFunc};
use crate::roots::integer_roots;
use num::{One, Zero};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegrateError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("exponent derivative must be nonzero")]
    ZeroGPrime,
    #[error("outside the supported decision regimes: {0}")]
    Unsupported(String),
}

/// Integrability of `f` inside Q(x) itself: `f = delta(g)` for rational `g`.
///
/// Under d/dx this holds exactly when the Hermite simple part vanishes (a
/// nonzero simple part has a first-order pole, which no rational derivative
/// can have). The Eulerian case reduces to d/dx through `f = x*g'`.
pub fn integrable_in_field(f: &RatFunc, d: Derivation) -> Option<RatFunc> {
    match d {
        Derivation::DDx => {
            let h = hermite_reduce(f);
            h.simple_part.is_zero().then_some(h.rational_part)
        }
        Derivation::EulerXDDx => integrable_in_field(&(f / &RatFunc::x()), Derivation::DDx),
    }
}

/// Liouville-Hardy test: `f*log(x)` is elementary integrable over Q(x) iff
/// `f = c/x + g'`. Returns the exact `(c, g)` on success.
pub fn liouville_hardy(f: &RatFunc) -> Option<(Q, RatFunc)> {
    let h = hermite_reduce(f);
    let s = &h.simple_part;
    if s.is_zero() {
        return Some((Q::zero(), h.rational_part));
    }
    if *s.denom() == Poly::x() && s.numer().is_constant() {
        return Some((s.numer().coeff(0), h.rational_part));
    }
    None
}

/// The resultant `Res_x(b, a - z*b')` as a polynomial in `z`, computed by
/// evaluation and interpolation. Degree drops at special `z` are corrected by
/// the matching `lc(b)` power so the sampled values all lie on one polynomial
/// (the fixed-shape Sylvester determinant).
fn residue_resultant(a: &Poly, b: &Poly) -> Poly {
    let db = b.derivative();
    let generic_deg = a.deg().max(db.deg());
    debug_assert!(generic_deg >= 0);
    let npoints = b.degree().unwrap() + 1;
    let mut points = Vec::with_capacity(npoints + 1);
    for z in 0..=npoints {
        let zq = qi(z as i64);
        let g = a - &db.scale(&zq);
        let value = if g.is_zero() {
            Q::zero()
        } else {
            let mut v = b.resultant(&g);
            let drop = generic_deg - g.deg();
            for _ in 0..drop {
                v *= b.lc();
            }
            v
        };
        points.push((zq, value));
    }
    Poly::interpolate(&points)
}

/// Differential-reduced predicate: `gcd(b, a - i*b') = 1` for every integer
/// `i`; equivalently, no residue of `f` at a simple pole is an integer.
pub fn is_differential_reduced(f: &RatFunc) -> bool {
    if f.is_zero() || f.denom().is_one() {
        return true;
    }
    let a = f.numer();
    let b = f.denom();
    let r = residue_resultant(a, b);
    if r.is_zero() {
        // cannot happen for gcd(a, b) = 1; be conservative if it does
        return false;
    }
    if r.is_constant() {
        return true;
    }
    let db = b.derivative();
    for root in integer_roots(&r) {
        let i = Q::from_integer(root);
        let shifted = a - &db.scale(&i);
        if shifted.is_zero() || !b.gcd(&shifted).is_constant() {
            return false;
        }
    }
    true
}

/// Solution of the Risch-type equation `P = b*Q' + (a + (m+1)*b')*Q`.
///
/// Witnesses `P*b^m*exp(g) = d/dx(Q*b^(m+1)*exp(g))` for `g' = a/b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RischSolution {
    pub q: Poly,
    pub m: usize,
    pub p: Poly,
    pub a: Poly,
    pub b: Poly,
}

impl RischSolution {
    /// Exact check of the defining identity.
    pub fn verify(&self) -> bool {
        let c = &self.a + &self.b.derivative().scale(&qi(self.m as i64 + 1));
        let lhs = &(&self.b * &self.q.derivative()) + &(&c * &self.q);
        lhs == self.p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RischOutcome {
    Solution(RischSolution),
    NoSolution,
}

/// Risch differential equation for the exponential fragment: given coprime
/// `a, b` with `a/b` a rational derivative, finds polynomial `Q` with
/// `P = b*Q' + (a + (m+1)*b')*Q`, or reports that none exists.
///
/// The degree of `Q` is pinned by the leading-term analysis: `deg P - deg a`
/// when `deg a >= deg b`, and `deg P - deg b + 1` when `deg a < deg b - 1`
/// (the middle case cannot occur for derivatives).
pub fn risch_de_poly(
    p: &Poly,
    a: &Poly,
    b: &Poly,
    m: usize,
) -> Result<RischOutcome, IntegrateError> {
    if b.is_zero() {
        return Err(IntegrateError::PreconditionViolated(
            "b must be nonzero".into(),
        ));
    }
    if !a.gcd(b).is_constant() && !a.is_zero() {
        return Err(IntegrateError::PreconditionViolated(
            "a and b must be coprime".into(),
        ));
    }
    let f = RatFunc::new(a.clone(), b.clone());
    if integrable_in_field(&f, Derivation::DDx).is_none() {
        return Err(IntegrateError::PreconditionViolated(
            "a/b is not the derivative of a rational function".into(),
        ));
    }
    if p.is_zero() {
        return Ok(RischOutcome::Solution(RischSolution {
            q: Poly::zero(),
            m,
            p: p.clone(),
            a: a.clone(),
            b: b.clone(),
        }));
    }
    let dega = if a.is_zero() { i64::MIN / 2 } else { a.deg() };
    let degb = b.deg();
    let degq = if dega >= degb {
        p.deg() - dega
    } else if dega < degb - 1 {
        p.deg() - degb + 1
    } else {
        return Err(IntegrateError::PreconditionViolated(
            "deg a = deg b - 1 cannot happen for a derivative a/b".into(),
        ));
    };
    if degq < 0 {
        return Ok(RischOutcome::NoSolution);
    }
    let degq = degq as usize;
    // undetermined coefficients: column j is b*(x^j)' + (a + (m+1)b')*x^j
    let c = a + &b.derivative().scale(&qi(m as i64 + 1));
    let max_deg = (degb + degq as i64 - 1)
        .max(c.deg() + degq as i64)
        .max(p.deg())
        .max(0) as usize;
    let mut mat = Mat::zeros(max_deg + 1, degq + 1);
    for j in 0..=degq {
        let dterm = if j == 0 {
            Poly::zero()
        } else {
            &b.scale(&qi(j as i64)) * &Poly::monomial(Q::one(), j - 1)
        };
        let col = &dterm + &(&c * &Poly::monomial(Q::one(), j));
        for row in 0..=max_deg {
            mat.set(row, j, col.coeff(row));
        }
    }
    let rhs: Vec<Q> = (0..=max_deg).map(|k| p.coeff(k)).collect();
    match mat.solve(&rhs) {
        None => Ok(RischOutcome::NoSolution),
        Some(coeffs) => {
            let q = Poly::from_coeffs(coeffs);
            let sol = RischSolution {
                q,
                m,
                p: p.clone(),
                a: a.clone(),
                b: b.clone(),
            };
            debug_assert!(sol.verify());
            Ok(RischOutcome::Solution(sol))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FexpgOutcome {
    /// Rational `h` with `f = h' + h*gprime`, so `f*exp(g)` integrates to
    /// `h*exp(g)`.
    Solution(RatFunc),
    NoSolution,
    Unsupported(String),
}

/// Decides `f = delta(h) + h*delta(g)` for rational `h` in two regimes:
///
/// * `gprime` a nonzero constant `lambda`: the valuation argument forces the
///   denominator of `h` (each pole order of `f` drops by one; first-order
///   poles rule a solution out), leaving a finite linear system.
/// * `gprime = a/b` a rational derivative and `f` polynomial: delegate to
///   [`risch_de_poly`] with `m = 0`.
///
/// Everything else is honestly `Unsupported`.
pub fn fexpg_solve(f: &RatFunc, gprime: &RatFunc) -> Result<FexpgOutcome, IntegrateError> {
    if gprime.is_zero() {
        return Err(IntegrateError::ZeroGPrime);
    }
    if let Some(lambda) = gprime.as_constant() {
        return Ok(solve_constant_exponent(f, &lambda));
    }
    if !f.is_polynomial() {
        return Ok(FexpgOutcome::Unsupported(
            "nonconstant exponent with a non-polynomial coefficient".into(),
        ));
    }
    let a = gprime.numer().clone();
    let b = gprime.denom().clone();
    match risch_de_poly(f.numer(), &a, &b, 0) {
        Err(IntegrateError::PreconditionViolated(_)) => Ok(FexpgOutcome::Unsupported(
            "exponent derivative is not the derivative of a rational function".into(),
        )),
        Err(e) => Err(e),
        Ok(RischOutcome::NoSolution) => Ok(FexpgOutcome::NoSolution),
        Ok(RischOutcome::Solution(sol)) => {
            let h = RatFunc::from_poly(&sol.q * &b);
            debug_assert!(
                &(&h.derivative(Derivation::DDx) + &(&h * gprime)) == f,
                "fexpg witness must verify"
            );
            Ok(FexpgOutcome::Solution(h))
        }
    }
}

/// `h' + lambda*h = f` for rational `h`, `lambda != 0`.
fn solve_constant_exponent(f: &RatFunc, lambda: &Q) -> FexpgOutcome {
    if f.is_zero() {
        return FexpgOutcome::Solution(RatFunc::zero());
    }
    // each pole of h of order k yields a pole of f of order k+1, so f may
    // have no simple poles and den(h) is den(f) with every multiplicity
    // dropped by one
    let mut den_h = Poly::one();
    for (v, mult) in crate::poly::squarefree_factorization(f.denom()) {
        if mult == 1 {
            return FexpgOutcome::NoSolution;
        }
        den_h = &den_h * &v.pow(mult as u32 - 1);
    }
    let deg_f = f.numer().deg() - f.denom().deg();
    let n = deg_f.max(0) as usize + den_h.degree().unwrap();
    // f * den_h^2 is a polynomial; match against A'*den_h - A*den_h' + lambda*A*den_h
    let lhs = (f.numer() * &(&den_h * &den_h)).exact_div(f.denom());
    let dden = den_h.derivative();
    let modifier = &den_h.scale(lambda) - &dden;
    let max_deg = (lhs.deg().max(den_h.deg() + n as i64)).max(0) as usize;
    let mut mat = Mat::zeros(max_deg + 1, n + 1);
    for j in 0..=n {
        // column: (x^j)'*den_h + x^j*(lambda*den_h - den_h')
        let dterm = if j == 0 {
            Poly::zero()
        } else {
            (&Poly::monomial(qi(j as i64), j - 1) * &den_h).clone()
        };
        let col = &dterm + &(&Poly::monomial(Q::one(), j) * &modifier);
        for row in 0..=max_deg {
            mat.set(row, j, col.coeff(row));
        }
    }
    let rhs: Vec<Q> = (0..=max_deg).map(|k| lhs.coeff(k)).collect();
    match mat.solve(&rhs) {
        None => FexpgOutcome::NoSolution,
        Some(coeffs) => {
            let h = RatFunc::new(Poly::from_coeffs(coeffs), den_h);
            debug_assert!(
                &(&h.derivative(Derivation::DDx) + &(&h * &RatFunc::constant(lambda.clone()))) == f,
                "constant-exponent witness must verify"
            );
            FexpgOutcome::Solution(h)
        }
    }
}

/// The set of `i in [0, n_max]` with `x^i * f * exp(g)` elementary integrable
/// over Q(x), decided index by index through [`fexpg_solve`].
pub fn skolem_scan(
    f: &RatFunc,
    g: &RatFunc,
    n_max: usize,
) -> Result<BTreeSet<usize>, IntegrateError> {
    let gp = g.derivative(Derivation::DDx);
    if gp.is_zero() {
        // exp(g) degenerates to a constant: x^i f is rational, and every
        // rational function is elementary integrable
        return Ok((0..=n_max).collect());
    }
    let mut out = BTreeSet::new();
    let mut xi = RatFunc::one();
    for i in 0..=n_max {
        match fexpg_solve(&(&xi * f), &gp)? {
            FexpgOutcome::Solution(_) => {
                out.insert(i);
            }
            FexpgOutcome::NoSolution => {}
            FexpgOutcome::Unsupported(r) => return Err(IntegrateError::Unsupported(r)),
        }
        xi = &xi * &RatFunc::x();
    }
    Ok(out)
}
