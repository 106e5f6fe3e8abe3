//! Noncommutative operator rings `Q(x)<D>` and `Q(n)<S>`.
//!
//! `D` is the differential generator with `D*f = f*D + f'`; `S` is the shift
//! generator with `S*r(n) = r(n+1)*S`. Both rings are left Euclidean, which
//! gives right division, GCRDs and (via the extended scheme) LCLMs. Operators
//! act on rational functions and on sequence windows; the series action lives
//! next to the series type in the `dfinite` module.

use crate::poly::{Poly, Q};
use crate::ratfunc::{Derivation, RatFunc};
use num::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OreError {
    #[error("operators of different kinds cannot be combined")]
    KindMismatch,
    #[error("right division by the zero operator")]
    DivisionByZeroOperator,
    #[error("sequence window shorter than the operator order requires")]
    WindowTooShort,
    #[error("the zero operator is not a valid input here")]
    ZeroOperator,
    #[error("coefficient has a pole at an evaluation point")]
    EvalAtPole,
}

/// Which skew generator the operator is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// Differential operators in D over Q(x).
    Diff,
    /// Shift (recurrence) operators in S over Q(n).
    Shift,
}

impl OpKind {
    pub fn gen_symbol(&self) -> &'static str {
        match self {
            OpKind::Diff => "D",
            OpKind::Shift => "S",
        }
    }

    pub fn var_symbol(&self) -> &'static str {
        match self {
            OpKind::Diff => "x",
            OpKind::Shift => "n",
        }
    }
}

/// Skew polynomial `sum_i c_i * G^i` with rational-function coefficients.
///
/// Invariant: no trailing zero coefficients, so `coeffs.len() - 1` is the
/// order of a nonzero operator.
#[derive(Clone, PartialEq, Eq)]
pub struct OreOperator {
    kind: OpKind,
    coeffs: Vec<RatFunc>,
}

impl OreOperator {
    pub fn new(kind: OpKind, mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OreOperator { kind, coeffs }
    }

    pub fn zero(kind: OpKind) -> Self {
        OreOperator {
            kind,
            coeffs: Vec::new(),
        }
    }

    pub fn from_ratfunc(kind: OpKind, f: RatFunc) -> Self {
        OreOperator::new(kind, vec![f])
    }

    pub fn one(kind: OpKind) -> Self {
        OreOperator::from_ratfunc(kind, RatFunc::one())
    }

    /// The bare generator D or S.
    pub fn generator(kind: OpKind) -> Self {
        OreOperator::new(kind, vec![RatFunc::zero(), RatFunc::one()])
    }

    /// `c * G^k`.
    pub fn monomial(kind: OpKind, c: RatFunc, k: usize) -> Self {
        if c.is_zero() {
            return OreOperator::zero(kind);
        }
        let mut coeffs = vec![RatFunc::zero(); k + 1];
        coeffs[k] = c;
        OreOperator { kind, coeffs }
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order: `None` for the zero operator.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn lc(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Maximum degree of the (cleared) polynomial coefficients; the `deg` of
    /// an operator in the recurrence bounds.
    pub fn degree(&self) -> Option<usize> {
        let cleared = self.clear_denominators();
        cleared
            .coeffs
            .iter()
            .filter_map(|c| c.numer().degree())
            .max()
    }

    fn assert_same_kind(&self, other: &OreOperator) -> Result<(), OreError> {
        if self.kind == other.kind {
            Ok(())
        } else {
            Err(OreError::KindMismatch)
        }
    }

    pub fn add(&self, other: &OreOperator) -> Result<OreOperator, OreError> {
        self.assert_same_kind(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Ok(OreOperator::new(self.kind, coeffs))
    }

    pub fn sub(&self, other: &OreOperator) -> Result<OreOperator, OreError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> OreOperator {
        OreOperator {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Left multiplication by a rational function (an order-0 operator).
    pub fn scale(&self, f: &RatFunc) -> OreOperator {
        if f.is_zero() {
            return OreOperator::zero(self.kind);
        }
        OreOperator::new(self.kind, self.coeffs.iter().map(|c| f * c).collect())
    }

    /// sigma(c): coefficient shift n -> n+1 (Shift kind only).
    fn sigma(c: &RatFunc) -> RatFunc {
        c.compose_shift(&Q::one())
    }

    /// Left multiplication by the generator, using the commutation rule.
    fn premul_gen(&self) -> OreOperator {
        let mut coeffs = vec![RatFunc::zero(); self.coeffs.len() + 1];
        match self.kind {
            OpKind::Diff => {
                // D * (c_j D^j) = c_j D^(j+1) + c_j' D^j
                for (j, c) in self.coeffs.iter().enumerate() {
                    coeffs[j + 1] = &coeffs[j + 1] + c;
                    coeffs[j] = &coeffs[j] + &c.derivative(Derivation::DDx);
                }
            }
            OpKind::Shift => {
                // S * (c_j S^j) = sigma(c_j) S^(j+1)
                for (j, c) in self.coeffs.iter().enumerate() {
                    coeffs[j + 1] = Self::sigma(c);
                }
            }
        }
        OreOperator::new(self.kind, coeffs)
    }

    /// Noncommutative product `self * other`.
    pub fn multiply(&self, other: &OreOperator) -> Result<OreOperator, OreError> {
        self.assert_same_kind(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(OreOperator::zero(self.kind));
        }
        let mut acc = other.scale(&self.coeff(0));
        let mut cur = other.clone();
        for i in 1..self.coeffs.len() {
            cur = cur.premul_gen();
            acc = acc.add(&cur.scale(&self.coeff(i)))?;
        }
        Ok(acc)
    }

    /// Action on a rational function: `L(f) = sum l_i delta^i(f)` (Diff only).
    pub fn apply_rat(&self, f: &RatFunc) -> Result<RatFunc, OreError> {
        if self.kind != OpKind::Diff {
            return Err(OreError::KindMismatch);
        }
        let mut acc = RatFunc::zero();
        let mut df = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                df = df.derivative(Derivation::DDx);
            }
            acc = &acc + &(c * &df);
        }
        Ok(acc)
    }

    /// Action on a sequence window: `result[n] = sum p_i(n) a_(n+i)` for all
    /// `n` the window supports (Shift only).
    pub fn apply_window(&self, window: &[Q]) -> Result<Vec<Q>, OreError> {
        if self.kind != OpKind::Shift {
            return Err(OreError::KindMismatch);
        }
        let Some(d) = self.ord() else {
            return Ok(vec![Q::zero(); window.len()]);
        };
        if window.len() < d + 1 {
            return Err(OreError::WindowTooShort);
        }
        let mut out = Vec::with_capacity(window.len() - d);
        for n in 0..=window.len() - 1 - d {
            let nq = Q::from_integer(num::BigInt::from(n));
            let mut acc = Q::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                let v = c.eval(&nq).ok_or(OreError::EvalAtPole)?;
                acc += v * &window[n + i];
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Right division: `self = Q * other + R` with `ord R < ord other`.
    pub fn right_divmod(
        &self,
        other: &OreOperator,
    ) -> Result<(OreOperator, OreOperator), OreError> {
        self.assert_same_kind(other)?;
        if other.is_zero() {
            return Err(OreError::DivisionByZeroOperator);
        }
        let db = other.ord().unwrap();
        let mut quot = OreOperator::zero(self.kind);
        let mut rem = self.clone();
        while let Some(dr) = rem.ord() {
            if dr < db {
                break;
            }
            let k = dr - db;
            // leading coefficient of (c G^k) * other is c * tau^k(lc(other))
            let blc = match self.kind {
                OpKind::Diff => other.lc(),
                OpKind::Shift => {
                    let mut l = other.lc();
                    for _ in 0..k {
                        l = Self::sigma(&l);
                    }
                    l
                }
            };
            let c = &rem.lc() / &blc;
            let t = OreOperator::monomial(self.kind, c, k);
            quot = quot.add(&t)?;
            rem = rem.sub(&t.multiply(other)?)?;
            debug_assert!(rem.ord().is_none_or(|d| d < dr));
        }
        Ok((quot, rem))
    }

    /// Normalizes the leading coefficient to 1 by a left scalar factor.
    pub fn monic(&self) -> OreOperator {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    /// Greatest common right divisor, monic. `gcrd(L, 0) = monic L`.
    ///
    /// Remainders are renormalized to primitive polynomial coefficients at
    /// every step (a left-unit scaling the gcrd is blind to); without this
    /// the rational coefficients blow up exponentially along the sequence.
    pub fn gcrd(&self, other: &OreOperator) -> Result<OreOperator, OreError> {
        self.assert_same_kind(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(OreError::ZeroOperator);
        }
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        while !b.is_zero() {
            let (_, r) = a.right_divmod(&b)?;
            a = std::mem::replace(&mut b, r.primitive_part());
        }
        Ok(a.monic())
    }

    /// Least common left multiple via the extended right-Euclidean scheme,
    /// monic. `lclm(L, 0) = 0`.
    pub fn lclm(&self, other: &OreOperator) -> Result<OreOperator, OreError> {
        self.assert_same_kind(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(OreError::ZeroOperator);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(OreOperator::zero(self.kind));
        }
        let mut r0 = self.primitive_part();
        let mut r1 = other.primitive_part();
        // cofactors track r_i = u_i * r0_initial (the v side is not needed);
        // joint rescaling of (r, u) by the primitive scalar keeps the
        // identities while containing coefficient growth
        let base = r0.clone();
        let mut u0 = OreOperator::one(self.kind);
        let mut u1 = OreOperator::zero(self.kind);
        while !r1.is_zero() {
            let (q, r2) = r0.right_divmod(&r1)?;
            let mut u2 = u0.sub(&q.multiply(&u1)?)?;
            let r2n = r2.primitive_part();
            if !r2.is_zero() {
                let s = &r2n.lc() / &r2.lc();
                u2 = u2.scale(&s);
            }
            r0 = std::mem::replace(&mut r1, r2n);
            u0 = std::mem::replace(&mut u1, u2);
        }
        // r1 = 0, so u1 * r0_initial is the least common left multiple
        Ok(u1.multiply(&base)?.monic())
    }

    /// Clears denominators and removes the full coefficient content, both
    /// numeric and polynomial. The result is a left-scalar multiple of the
    /// input, suitable wherever operators matter up to left units.
    pub fn primitive_part(&self) -> OreOperator {
        if self.is_zero() {
            return self.clone();
        }
        let cleared = self.clear_denominators();
        let polys = cleared.poly_coeffs();
        let mut g = Poly::zero();
        for p in &polys {
            g = g.gcd(p);
        }
        let reduced = OreOperator::new(
            self.kind,
            polys
                .iter()
                .map(|p| RatFunc::from_poly(p.exact_div(&g)))
                .collect(),
        );
        reduced.primitive_polynomial()
    }

    /// Multiplies through by the lcm of coefficient denominators, making all
    /// coefficients polynomial. Annihilation properties are unchanged.
    pub fn clear_denominators(&self) -> OreOperator {
        let lcm = self
            .coeffs
            .iter()
            .fold(Poly::one(), |acc, c| acc.lcm(c.denom()));
        self.scale(&RatFunc::from_poly(lcm))
    }

    /// Clears denominators and divides out the numeric content, fixing the
    /// sign so the leading coefficient has a positive leading term.
    pub fn primitive_polynomial(&self) -> OreOperator {
        let cleared = self.clear_denominators();
        if cleared.is_zero() {
            return cleared;
        }
        // rational content: gcd of all integer coefficients after a common
        // denominator, folded into one scalar
        let mut den_lcm = num::BigInt::one();
        for c in &cleared.coeffs {
            for q in c.numer().coeffs() {
                den_lcm = num::integer::lcm(den_lcm, q.denom().clone());
            }
        }
        let mut content = num::BigInt::zero();
        for c in &cleared.coeffs {
            for q in c.numer().coeffs() {
                content = num::integer::gcd(content, q.numer() * (&den_lcm / q.denom()));
            }
        }
        let scalar = Q::new(den_lcm, content);
        let scaled = cleared.scale(&RatFunc::constant(scalar));
        if scaled.lc().numer().lc() < Q::zero() {
            scaled.neg()
        } else {
            scaled
        }
    }

    /// Polynomial coefficient vector (requires cleared denominators).
    pub fn poly_coeffs(&self) -> Vec<Poly> {
        self.coeffs
            .iter()
            .map(|c| {
                debug_assert!(c.is_polynomial());
                c.numer().clone()
            })
            .collect()
    }
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = self.kind.var_symbol();
        let gsym = self.kind.gen_symbol();
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = c.sign_split();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let gens = match i {
                0 => String::new(),
                1 => gsym.to_string(),
                _ => format!("{}^{}", gsym, i),
            };
            let s = mag.display_var(var);
            let atomic = !s.contains(" + ") && !s.contains(" - ");
            if i == 0 {
                // additive tail: parens only matter after a minus
                if atomic || !neg {
                    write!(f, "{}", s)?;
                } else {
                    write!(f, "({})", s)?;
                }
            } else if mag == RatFunc::one() {
                write!(f, "{}", gens)?;
            } else if atomic {
                write!(f, "{}*{}", s, gens)?;
            } else {
                write!(f, "({})*{}", s, gens)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ore({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::{rat, rat_int};

    fn d() -> OreOperator {
        OreOperator::generator(OpKind::Diff)
    }

    fn s() -> OreOperator {
        OreOperator::generator(OpKind::Shift)
    }

    fn xop() -> OreOperator {
        OreOperator::from_ratfunc(OpKind::Diff, RatFunc::x())
    }

    #[test]
    fn commutation_d_times_x() {
        // D*x = x*D + 1
        let prod = d().multiply(&xop()).unwrap();
        let expected = OreOperator::new(OpKind::Diff, vec![rat_int(1), RatFunc::x()]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn commutation_d2_times_x() {
        // D^2*x = x*D^2 + 2D
        let d2 = d().multiply(&d()).unwrap();
        let prod = d2.multiply(&xop()).unwrap();
        let expected = OreOperator::new(OpKind::Diff, vec![rat_int(0), rat_int(2), RatFunc::x()]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn commutation_s_times_n() {
        // S*n = (n+1)*S
        let nop = OreOperator::from_ratfunc(OpKind::Shift, RatFunc::x());
        let prod = s().multiply(&nop).unwrap();
        let expected = OreOperator::new(OpKind::Shift, vec![RatFunc::zero(), rat(&[1, 1], &[1])]);
        assert_eq!(prod, expected);
    }

    #[test]
    fn kind_mismatch_rejected() {
        assert_eq!(d().multiply(&s()), Err(OreError::KindMismatch));
    }

    #[test]
    fn apply_euler_monomial() {
        // (x*D)(x^3) = 3x^3
        let xd = xop().multiply(&d()).unwrap();
        let f = rat(&[0, 0, 0, 1], &[1]);
        assert_eq!(xd.apply_rat(&f).unwrap(), rat(&[0, 0, 0, 3], &[1]));
        // D^2(1/x) = 2/x^3
        let d2 = d().multiply(&d()).unwrap();
        assert_eq!(
            d2.apply_rat(&rat(&[1], &[0, 1])).unwrap(),
            rat(&[2], &[0, 0, 0, 1])
        );
    }

    #[test]
    fn right_division_examples() {
        let dm1 = d().sub(&OreOperator::one(OpKind::Diff)).unwrap();
        // (D*(D-1)) / (D-1) -> Q = D, R = 0
        let a = d().multiply(&dm1).unwrap();
        let (q, r) = a.right_divmod(&dm1).unwrap();
        assert_eq!(q, d());
        assert!(r.is_zero());
        // D^2 / D
        let d2 = d().multiply(&d()).unwrap();
        let (q, r) = d2.right_divmod(&d()).unwrap();
        assert_eq!(q, d());
        assert!(r.is_zero());
        // (D + x) / D -> Q = 1, R = x
        let dpx = d().add(&xop()).unwrap();
        let (q, r) = dpx.right_divmod(&d()).unwrap();
        assert_eq!(q, OreOperator::one(OpKind::Diff));
        assert_eq!(r, xop());
        // reconstruction
        let rebuilt = q.multiply(&d()).unwrap().add(&r).unwrap();
        assert_eq!(rebuilt, dpx);
    }

    #[test]
    fn gcrd_examples() {
        let dm1 = d().sub(&OreOperator::one(OpKind::Diff)).unwrap();
        let a = d().multiply(&dm1).unwrap();
        assert_eq!(a.gcrd(&dm1).unwrap(), dm1);
        // gcrd(L, L) = monic L
        let l = xop().multiply(&d()).unwrap().scale(&rat_int(3));
        assert_eq!(l.gcrd(&l).unwrap(), l.monic());
    }

    #[test]
    fn lclm_of_d_and_dm1() {
        let dm1 = d().sub(&OreOperator::one(OpKind::Diff)).unwrap();
        let l = d().lclm(&dm1).unwrap();
        assert_eq!(l.ord(), Some(2));
        // annihilates constants and anything with f'' = f'
        let (_, r1) = l.right_divmod(&d()).unwrap();
        let (_, r2) = l.right_divmod(&dm1).unwrap();
        assert!(r1.is_zero() && r2.is_zero());
    }

    #[test]
    fn display_forms() {
        let l = OreOperator::new(
            OpKind::Diff,
            vec![rat_int(3), -&rat(&[1, 0, 1], &[1]), RatFunc::x()],
        );
        assert_eq!(l.to_string(), "x*D^2 - (x^2 + 1)*D + 3");
        let p = OreOperator::new(OpKind::Shift, vec![rat_int(-1), rat(&[1, 1], &[1])]);
        assert_eq!(p.to_string(), "(n + 1)*S - 1");
    }
}
