//! Dense univariate polynomials over the exact rationals.
//!
//! `Poly` is the coefficient backbone of the whole crate: rational functions,
//! Hermite reduction, Ore operator coefficients and the guessing systems all
//! sit on top of it. Arithmetic is exact; there is no floating point anywhere.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Shorthand used across the crate for exact rational scalars.
pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational `n/d`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Dense polynomial in one variable with `BigRational` coefficients.
///
/// Invariant: `coeffs` carries no trailing zeros, so the zero polynomial is
/// the empty vector and `coeffs.len() - 1` is the degree otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Q::zero(), Q::one()])
    }

    pub fn constant(c: Q) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// Builds a polynomial from coefficients (index = power), trimming
    /// trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Convenience constructor from integer coefficients, low degree first.
    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| qi(c)).collect())
    }

    /// `c * x^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as an `i64` with the convention `deg 0 = -1` (handy in the
    /// degree-bound arithmetic of the Risch-type solvers).
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Leading coefficient; zero polynomial yields 0.
    pub fn lc(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// d/dx.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * qi(i as i64 + 1))
                .collect(),
        )
    }

    /// Termwise antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / qi(i as i64 + 1));
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    /// `p(x + a)` for rational `a`, by Horner over the shifted variable.
    pub fn compose_shift(&self, a: &Q) -> Poly {
        let mut acc = Poly::zero();
        let shift = Poly::from_coeffs(vec![a.clone(), Q::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &shift) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.lc();
        self.scale(&(Q::one() / lc))
    }

    /// Euclidean division; panics on zero divisor (callers guard).
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.degree() < d.degree() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.lc();
        let mut quot = vec![Q::zero(); rem.len() - dd];
        while rem.len() >= d.coeffs.len() && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &lead;
            if !q.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    let v = &rem[k + i] - &(c * &q);
                    rem[k + i] = v;
                }
            }
            quot[k] = q;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
            if rem.len() < d.coeffs.len() {
                break;
            }
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Exact division; panics if the remainder is nonzero (used only where
    /// divisibility is an invariant, e.g. inside gcd-based reductions).
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.divmod(d);
        assert!(r.is_zero(), "exact_div with nonzero remainder");
        q
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns monic `g` and `(s, t)` with `s*self + t*other = g`.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero(), Poly::zero());
        }
        let inv = Q::one() / r0.lc();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Least common multiple, monic.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (&self.exact_div(&g) * other).monic()
    }

    /// Clears denominators and integer content: returns the primitive integer
    /// coefficient vector of `c * self` together with the (positive) rational
    /// `c` is irrelevant to root and gcd questions, so it is dropped.
    pub fn primitive_integer_coeffs(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den_lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            num::integer::lcm(acc, c.denom().clone())
        });
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let content = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| num::integer::gcd(acc, c.clone()));
        let mut out: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
        if out.last().is_some_and(|c| c.sign() == Sign::Minus) {
            for c in &mut out {
                *c = -c.clone();
            }
        }
        out
    }

    /// Resultant of `self` and `other` via the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Poly) -> Q {
        let mut a = self.clone();
        let mut b = other.clone();
        if a.is_zero() || b.is_zero() {
            return Q::zero();
        }
        let mut acc = Q::one();
        while b.deg() > 0 {
            let (_, r) = a.divmod(&b);
            if r.is_zero() {
                return Q::zero();
            }
            if (a.deg() * b.deg()) % 2 == 1 {
                acc = -acc;
            }
            acc *= pow_q(&b.lc(), (a.deg() - r.deg()) as u32);
            a = std::mem::replace(&mut b, r);
        }
        // b is a nonzero constant here
        acc * pow_q(&b.lc(), a.deg().max(0) as u32)
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(points: &[(Q, Q)]) -> Poly {
        let mut acc = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Poly::one();
            let mut denom = Q::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = &basis * &Poly::from_coeffs(vec![-xj.clone(), Q::one()]);
                    denom *= xi - xj;
                }
            }
            acc = &acc + &basis.scale(&(yi / &denom));
        }
        acc
    }
}

fn pow_q(base: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &coeffs[i + j] + &(a * b);
                coeffs[i + j] = v;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Squarefree decomposition by Yun's algorithm.
///
/// Returns monic pairwise-coprime squarefree factors with strictly increasing
/// multiplicities such that `p = lc(p) * prod f_i^{m_i}`. Constant factors are
/// dropped. Panics on zero input (callers check).
pub fn squarefree_factorization(p: &Poly) -> Vec<(Poly, usize)> {
    assert!(!p.is_zero(), "squarefree factorization of zero");
    let p = p.monic();
    if p.is_constant() {
        return Vec::new();
    }
    let dp = p.derivative();
    let a = p.gcd(&dp);
    let mut b = p.exact_div(&a);
    let mut c = dp.exact_div(&a);
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1usize;
    while !b.is_constant() {
        let g = b.gcd(&d);
        if !g.is_constant() {
            out.push((g.clone(), i));
        }
        b = b.exact_div(&g);
        c = d.exact_div(&g);
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// The squarefree part `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &Poly) -> Poly {
    let g = p.gcd(&p.derivative());
    p.exact_div(&g).monic()
}

fn fmt_coeff(c: &Q) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl Poly {
    /// Canonical text form with a chosen variable name: highest degree first,
    /// `^` powers, rational coefficients as `a/b`, e.g. `3*x^2 - 1/2`.
    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => out.push_str(&fmt_coeff(&mag)),
                (_, true) => {}
                (_, false) => {
                    out.push_str(&fmt_coeff(&mag));
                    out.push('*');
                }
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{}^{}", var, k)),
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}
