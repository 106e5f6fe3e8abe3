//! Rational functions over Q with two derivations and valuation machinery.
//!
//! `RatFunc` keeps `gcd(num, den) = 1` with a monic denominator, so equality
//! is structural and every operation re-normalizes. The two derivations of
//! interest are `d/dx` (regular) and the Eulerian `x*d/dx` (not regular).

use crate::poly::{Poly, Q};
use crate::roots::{is_irreducible, IrreducibilityUndecided};
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatFuncError {
    #[error("order nu_p is only defined at irreducible moduli")]
    NonIrreducibleModulus,
    #[error(transparent)]
    IrreducibilityUndecided(#[from] IrreducibilityUndecided),
    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,
}

/// The derivation acting on Q(x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Derivation {
    /// delta = d/dx; regular since delta(x) = 1.
    DDx,
    /// delta = x * d/dx, the Eulerian derivation; not regular.
    EulerXDDx,
}

impl Derivation {
    pub fn apply_poly(&self, p: &Poly) -> Poly {
        match self {
            Derivation::DDx => p.derivative(),
            Derivation::EulerXDDx => p.derivative().shift_up(1),
        }
    }

    /// Whether some element maps to 1 under the derivation.
    pub fn is_regular(&self) -> bool {
        matches!(self, Derivation::DDx)
    }
}

/// Rational function num/den in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Normalizing constructor; panics on zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lc = den.lc();
        if !lc.is_one() {
            let inv = Q::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Q) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// The constant value, if this is one.
    pub fn as_constant(&self) -> Option<Q> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, e: i64) -> RatFunc {
        if e == 0 {
            return RatFunc::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// delta(f) under the chosen derivation, gcd-normalized.
    pub fn derivative(&self, d: Derivation) -> RatFunc {
        let quotient = RatFunc::new(
            &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative()),
            &self.den * &self.den,
        );
        match d {
            Derivation::DDx => quotient,
            Derivation::EulerXDDx => &RatFunc::x() * &quotient,
        }
    }

    /// Substitutes `x + a` for the variable (used as the shift sigma on
    /// coefficients of recurrence operators).
    pub fn compose_shift(&self, a: &Q) -> RatFunc {
        RatFunc::new(self.num.compose_shift(a), self.den.compose_shift(a))
    }

    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Splits into polynomial part and proper remainder: `f = poly + rem/den`.
    pub fn poly_divrem(&self) -> (Poly, RatFunc) {
        let (q, r) = self.num.divmod(&self.den);
        (q, RatFunc::new(r, self.den.clone()))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "rational function division by zero");
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

/// Order of `f` at an irreducible `p`: the exponent of `p` in `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    /// nu_p(0) = +infinity by convention.
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

fn multiplicity(mut a: Poly, p: &Poly) -> (i64, Poly) {
    let mut m = 0;
    loop {
        let (q, r) = a.divmod(p);
        if r.is_zero() {
            m += 1;
            a = q;
        } else {
            return (m, a);
        }
    }
}

/// nu_p(f): the order of `f` at the irreducible polynomial `p`.
pub fn nu(f: &RatFunc, p: &Poly) -> Result<Valuation, RatFuncError> {
    if !is_irreducible(p)? {
        return Err(RatFuncError::NonIrreducibleModulus);
    }
    if f.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let (mn, _) = multiplicity(f.numer().clone(), p);
    let (md, _) = multiplicity(f.denom().clone(), p);
    Ok(Valuation::Finite(mn - md))
}

/// Classification of a polynomial with respect to a derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyClass {
    /// gcd(p, delta p) = 1.
    Normal,
    /// gcd(p, delta p) = p, up to a constant.
    Special,
    Neither,
}

pub fn classify_polynomial(p: &Poly, d: Derivation) -> Result<PolyClass, RatFuncError> {
    if p.is_zero() {
        return Err(RatFuncError::ZeroPolynomial);
    }
    let dp = d.apply_poly(p);
    let g = p.gcd(&dp);
    if g.is_constant() {
        Ok(PolyClass::Normal)
    } else if g == p.monic() {
        Ok(PolyClass::Special)
    } else {
        Ok(PolyClass::Neither)
    }
}

/// Laurent form: exponent -> coefficient, empty map for zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentForm {
    pub coeffs: BTreeMap<i64, Q>,
}

impl LaurentForm {
    pub fn lowest(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn constant_term(&self) -> Q {
        self.coeffs.get(&0).cloned().unwrap_or_else(Q::zero)
    }
}

/// Laurent-polynomial test: succeeds iff the denominator is a power of x.
pub fn is_laurent(f: &RatFunc) -> Option<LaurentForm> {
    let den = f.denom();
    let k = den.degree().expect("denominator is nonzero");
    // x^k is monic with all lower coefficients zero
    if (0..k).any(|i| !den.coeff(i).is_zero()) {
        return None;
    }
    let mut coeffs = BTreeMap::new();
    for (i, c) in f.numer().coeffs().iter().enumerate() {
        if !c.is_zero() {
            coeffs.insert(i as i64 - k as i64, c.clone());
        }
    }
    Some(LaurentForm { coeffs })
}

/// Rebuilds a rational function from a Laurent coefficient map.
pub fn from_laurent(coeffs: &BTreeMap<i64, Q>) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (&e, c) in coeffs {
        let term = if e >= 0 {
            RatFunc::from_poly(Poly::monomial(c.clone(), e as usize))
        } else {
            RatFunc::new(
                Poly::constant(c.clone()),
                Poly::monomial(Q::one(), (-e) as usize),
            )
        };
        acc = &acc + &term;
    }
    acc
}

fn needs_parens(p: &Poly) -> bool {
    // a single positive term prints atomically when it is "c" or "x^k";
    // "3*x" does not (a following or preceding / would rebind)
    let nonzero = p.coeffs().iter().filter(|c| !c.is_zero()).count();
    if nonzero != 1 {
        return true;
    }
    let k = p.degree().unwrap();
    let c = p.coeff(k);
    if c < Q::zero() {
        return true;
    }
    !(k == 0 || c.is_one())
}

impl RatFunc {
    pub fn display_var(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.display_var(var);
        }
        // hoist a negative leading sign: -1/x rather than (-1)/x
        let (neg, mag) = self.sign_split();
        let wrap = |p: &Poly| {
            if needs_parens(p) {
                format!("({})", p.display_var(var))
            } else {
                p.display_var(var)
            }
        };
        let body = format!("{}/{}", wrap(&mag.num), wrap(&mag.den));
        if neg {
            format!("-{}", body)
        } else {
            body
        }
    }

    /// Splits off the sign of the leading numerator coefficient, leaving a
    /// positive-lead magnitude. Used when joining sums in pretty-printers.
    pub fn sign_split(&self) -> (bool, RatFunc) {
        if self.num.lc() < Q::zero() {
            (true, -self)
        } else {
            (false, self.clone())
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("x"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

/// Convenience: `n/d` from integer coefficient slices.
pub fn rat(num: &[i64], den: &[i64]) -> RatFunc {
    RatFunc::new(Poly::from_ints(num), Poly::from_ints(den))
}

/// Convenience: integer constant.
pub fn rat_int(n: i64) -> RatFunc {
    RatFunc::from_poly(Poly::from_ints(&[n]))
}

pub fn qbig(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{qi, qr};

    #[test]
    fn normalization_cancels_and_monicizes() {
        // (2x^2 - 2) / (4x - 4) = (x+1)/2
        let f = rat(&[-2, 0, 2], &[-4, 4]);
        assert_eq!(f, rat(&[1, 1], &[2]));
        assert!(f.denom().is_one());
    }

    #[test]
    fn derivative_examples() {
        // (x^2)' = 2x
        assert_eq!(
            rat(&[0, 0, 1], &[1]).derivative(Derivation::DDx),
            rat(&[0, 2], &[1])
        );
        // constants die under both derivations
        assert!(rat_int(7).derivative(Derivation::DDx).is_zero());
        assert!(rat_int(7).derivative(Derivation::EulerXDDx).is_zero());
        // Euler on 1/x: x * (-1/x^2) = -1/x
        assert_eq!(
            rat(&[1], &[0, 1]).derivative(Derivation::EulerXDDx),
            rat(&[-1], &[0, 1])
        );
    }

    #[test]
    fn nu_examples() {
        let x = Poly::from_ints(&[0, 1]);
        // nu_x(0) = +infinity
        assert_eq!(nu(&RatFunc::zero(), &x), Ok(Valuation::Infinite));
        // nu_{x-1}((x-1)^3 (x+2) / (x+1)) = 3
        let f = RatFunc::new(
            &Poly::from_ints(&[-1, 1]).pow(3) * &Poly::from_ints(&[2, 1]),
            Poly::from_ints(&[1, 1]),
        );
        assert_eq!(nu(&f, &Poly::from_ints(&[-1, 1])), Ok(Valuation::Finite(3)));
        // nu_x(d/dx(1/x^2)) = -3
        let g = rat(&[1], &[0, 0, 1]).derivative(Derivation::DDx);
        assert_eq!(nu(&g, &x), Ok(Valuation::Finite(-3)));
        // reducible modulus is rejected
        assert_eq!(
            nu(&RatFunc::one(), &Poly::from_ints(&[-1, 0, 1])),
            Err(RatFuncError::NonIrreducibleModulus)
        );
    }

    #[test]
    fn classify_examples() {
        let euler = Derivation::EulerXDDx;
        let ddx = Derivation::DDx;
        // x^3 is special under Euler: gcd(x^3, 3x^3) = x^3
        assert_eq!(
            classify_polynomial(&Poly::from_ints(&[0, 0, 0, 1]), euler),
            Ok(PolyClass::Special)
        );
        assert_eq!(
            classify_polynomial(&Poly::from_ints(&[-1, 1]), ddx),
            Ok(PolyClass::Normal)
        );
        // gcd(x^2, 2x) = x: neither
        assert_eq!(
            classify_polynomial(&Poly::from_ints(&[0, 0, 1]), ddx),
            Ok(PolyClass::Neither)
        );
        assert_eq!(
            classify_polynomial(&Poly::zero(), ddx),
            Err(RatFuncError::ZeroPolynomial)
        );
    }

    #[test]
    fn laurent_detection() {
        // x + 1/x
        let f = rat(&[1, 0, 1], &[0, 1]);
        let l = is_laurent(&f).unwrap();
        assert_eq!(l.lowest(), Some(-1));
        assert_eq!(l.constant_term(), qi(0));
        assert!(is_laurent(&rat(&[1], &[-1, 1])).is_none());
        let c = is_laurent(&rat_int(5)).unwrap();
        assert_eq!(c.lowest(), Some(0));
        // round trip
        assert_eq!(from_laurent(&l.coeffs), f);
    }

    #[test]
    fn display_round_shapes() {
        assert_eq!(rat(&[1], &[0, 1]).to_string(), "1/x");
        assert_eq!(
            rat(&[-1, 0, 3], &[1, 0, 0, 1]).to_string(),
            "(3*x^2 - 1)/(x^3 + 1)"
        );
        assert_eq!(RatFunc::constant(qr(1, 2)).to_string(), "1/2");
        assert_eq!(rat(&[0, 2], &[1, 1]).to_string(), "(2*x)/(x + 1)");
    }
}
