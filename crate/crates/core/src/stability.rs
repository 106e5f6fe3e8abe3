//! Stability deciders for the characterized elementary fragments.
//!
//! An element is *stable* when it starts an infinite backward chain of
//! antiderivatives of the same shape. Three fragments admit a complete
//! decision over Q(x) with d/dx:
//!
//! * rational functions: always stable over elementary extensions; stable
//!   inside Q(x) itself iff polynomial (iff Laurent with zero constant term
//!   under the Eulerian derivation);
//! * `f(x) * log(x)`: stable iff `f` is a Laurent polynomial, with the
//!   monomial closed form extending to any log power;
//! * `f(x) * exp(g(x))`: stable iff `f` is a polynomial and `g` is linear
//!   with nonzero slope.
//!
//! `Stable` verdicts carry a chain generator; chains are emitted as sums of
//! fragment terms and are checked link by link by exact differentiation.

use crate::integrate::integrable_in_field;
use crate::poly::{qi, Poly, Q};
use crate::ratfunc::{is_laurent, RatFunc};
use crate::Derivation;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FragmentError {
    #[error("exp of a nonzero constant has no exact representative over Q")]
    ExpOfNonzeroConstant,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("witness chains exist only for stable inputs")]
    NotStableInput,
    #[error("stable, but the antiderivatives leave the exact fragment: {0}")]
    UnrepresentableChain(String),
}

/// One multiplicative fragment term `coef * log(x)^logpow * exp(expo)`.
///
/// Canonical: a zero coefficient collapses the whole term; `expo`, when
/// present, is a nonconstant rational function (`exp(0)` folds away, other
/// constant exponents are rejected since `e^c` is not rational).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ElemExpr {
    pub coef: RatFunc,
    pub logpow: u32,
    pub expo: Option<RatFunc>,
}

impl ElemExpr {
    pub fn try_new(
        coef: RatFunc,
        logpow: u32,
        expo: Option<RatFunc>,
    ) -> Result<Self, FragmentError> {
        if coef.is_zero() {
            return Ok(ElemExpr {
                coef,
                logpow: 0,
                expo: None,
            });
        }
        let expo = match expo {
            Some(g) => match g.as_constant() {
                Some(c) if c.is_zero() => None,
                Some(_) => return Err(FragmentError::ExpOfNonzeroConstant),
                None => Some(g),
            },
            None => None,
        };
        Ok(ElemExpr { coef, logpow, expo })
    }

    pub fn rational(f: RatFunc) -> Self {
        ElemExpr {
            coef: f,
            logpow: 0,
            expo: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    fn key(&self) -> (u32, Option<RatFunc>) {
        (self.logpow, self.expo.clone())
    }
}

impl fmt::Display for ElemExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        let coef_str = self.coef.to_string();
        let trivial_coef = self.coef == RatFunc::one();
        if !trivial_coef || (self.logpow == 0 && self.expo.is_none()) {
            if coef_str.contains(" + ") || coef_str.contains(" - ") {
                factors.push(format!("({})", coef_str));
            } else {
                factors.push(coef_str);
            }
        }
        match self.logpow {
            0 => {}
            1 => factors.push("log(x)".to_string()),
            m => factors.push(format!("log(x)^{}", m)),
        }
        if let Some(g) = &self.expo {
            factors.push(format!("exp({})", g));
        }
        write!(f, "{}", factors.join("*"))
    }
}

impl fmt::Debug for ElemExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElemExpr({})", self)
    }
}

/// Normalized sum of fragment terms, the closure of [`ElemExpr`] under
/// differentiation and the shape of witness-chain links.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ElemSum {
    terms: Vec<ElemExpr>,
}

impl ElemSum {
    pub fn zero() -> Self {
        ElemSum::default()
    }

    pub fn from_terms(terms: Vec<ElemExpr>) -> Self {
        let mut map: BTreeMap<(u32, Option<RatFunc>), RatFunc> = BTreeMap::new();
        for t in terms {
            if t.is_zero() {
                continue;
            }
            let entry = map.entry(t.key()).or_insert_with(RatFunc::zero);
            *entry = &*entry + &t.coef;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((logpow, expo), coef)| ElemExpr { coef, logpow, expo })
            .collect();
        ElemSum { terms }
    }

    pub fn terms(&self) -> &[ElemExpr] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The unique term of a single-product sum, if it is one. Zero counts as
    /// the zero term.
    pub fn as_single(&self) -> Option<ElemExpr> {
        match self.terms.len() {
            0 => Some(ElemExpr::rational(RatFunc::zero())),
            1 => Some(self.terms[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &ElemSum) -> ElemSum {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ElemSum::from_terms(terms)
    }

    pub fn neg(&self) -> ElemSum {
        ElemSum {
            terms: self
                .terms
                .iter()
                .map(|t| ElemExpr {
                    coef: -&t.coef,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn mul_rat(&self, f: &RatFunc) -> ElemSum {
        ElemSum::from_terms(
            self.terms
                .iter()
                .map(|t| ElemExpr {
                    coef: &t.coef * f,
                    ..t.clone()
                })
                .collect(),
        )
    }

    /// Exact derivative; the fragment is closed under both derivations
    /// (the Eulerian one is x times the usual one).
    pub fn derivative(&self, d: Derivation) -> ElemSum {
        let mut out = Vec::new();
        for t in &self.terms {
            let gprime = t
                .expo
                .as_ref()
                .map(|g| g.derivative(Derivation::DDx))
                .unwrap_or_else(RatFunc::zero);
            out.push(ElemExpr {
                coef: &t.coef.derivative(Derivation::DDx) + &(&t.coef * &gprime),
                logpow: t.logpow,
                expo: t.expo.clone(),
            });
            if t.logpow >= 1 {
                out.push(ElemExpr {
                    coef: &(&t.coef * &RatFunc::constant(qi(t.logpow as i64))) / &RatFunc::x(),
                    logpow: t.logpow - 1,
                    expo: t.expo.clone(),
                });
            }
        }
        let ddx = ElemSum::from_terms(out);
        match d {
            Derivation::DDx => ddx,
            Derivation::EulerXDDx => ddx.mul_rat(&RatFunc::x()),
        }
    }
}

impl From<ElemExpr> for ElemSum {
    fn from(e: ElemExpr) -> Self {
        ElemSum::from_terms(vec![e])
    }
}

impl fmt::Display for ElemSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let (neg, mag) = t.coef.sign_split();
            let shown = ElemExpr {
                coef: mag,
                ..t.clone()
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", shown)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ElemSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElemSum({})", self)
    }
}

/// Why a non-stable input fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// Smallest `i` with `x^i * f` not integrable in Q(x).
    MomentIndex(usize),
    /// A denominator factor that is normal for the derivation; its poles can
    /// never survive repeated antidifferentiation.
    Residue { pole: Poly, order: i64 },
    /// Nonlinear exponent: iterated integration forces the polynomial factor
    /// degree to drop forever.
    DegreeDrop,
    /// Nonzero constant term under the Eulerian derivation.
    ConstantTerm,
}

/// Which closed-form family generates the witness chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainGenerator {
    /// Laurent polynomial times a log power, integrated monomial by monomial.
    LaurentLog,
    /// Polynomial times exp(linear), integrated by solving `h' + lambda h = f`.
    PolyExp,
    /// Laurent polynomials under x*d/dx, via `x^i -> x^i / i`.
    EulerLaurent,
    /// Stability holds (rational functions over elementary extensions), but
    /// the antiderivatives need logarithms with non-rational constants, so no
    /// exact chain is emitted.
    LogExtension,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityVerdict {
    Stable(ChainGenerator),
    NotStable(Obstruction),
    OutOfFragment(String),
}

impl StabilityVerdict {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::Stable(_))
    }
}

/// First denominator factor usable as a pole obstruction; `skip_x` removes
/// the special factor `x` (Eulerian case).
fn pole_obstruction(den: &Poly, skip_x: bool) -> Obstruction {
    for (v, mult) in crate::poly::squarefree_factorization(den) {
        let v = if skip_x && v.eval(&Q::zero()).is_zero() {
            v.exact_div(&Poly::x())
        } else {
            v
        };
        if !v.is_constant() {
            return Obstruction::Residue {
                pole: v,
                order: -(mult as i64),
            };
        }
    }
    // unreachable for non-Laurent inputs; keep a safe default
    Obstruction::Residue {
        pole: den.clone(),
        order: -1,
    }
}

/// Semi-decision falsifier inside Q(x): the smallest `i <= n_max` such that
/// `x^i * f` is not integrable in Q(x), if any.
pub fn moment_obstruction(f: &RatFunc, n_max: usize) -> Option<usize> {
    let mut xi_f = f.clone();
    for i in 0..=n_max {
        if integrable_in_field(&xi_f, Derivation::DDx).is_none() {
            return Some(i);
        }
        xi_f = &xi_f * &RatFunc::x();
    }
    None
}

/// Stability of a rational function inside (Q(x), delta) itself.
///
/// d/dx: stable iff polynomial. x*d/dx: stable iff Laurent with zero
/// constant term (the Eulerian derivation maps onto exactly those, so a
/// nonzero constant term blocks the first integration step already).
pub fn stable_in_ratfield(f: &RatFunc, d: Derivation) -> StabilityVerdict {
    match d {
        Derivation::DDx => {
            if f.is_polynomial() {
                return StabilityVerdict::Stable(ChainGenerator::LaurentLog);
            }
            let bound = 2 * f.denom().degree().unwrap_or(0) + 2;
            match moment_obstruction(f, bound) {
                Some(i) => StabilityVerdict::NotStable(Obstruction::MomentIndex(i)),
                None => StabilityVerdict::NotStable(pole_obstruction(f.denom(), false)),
            }
        }
        Derivation::EulerXDDx => match is_laurent(f) {
            None => StabilityVerdict::NotStable(pole_obstruction(f.denom(), true)),
            Some(form) => {
                if form.constant_term().is_zero() {
                    StabilityVerdict::Stable(ChainGenerator::EulerLaurent)
                } else {
                    StabilityVerdict::NotStable(Obstruction::ConstantTerm)
                }
            }
        },
    }
}

/// Is the rational function a monomial `c * x^n` (Laurent, single term)?
fn laurent_monomial(f: &RatFunc) -> Option<(Q, i64)> {
    let form = is_laurent(f)?;
    if form.coeffs.len() == 1 {
        let (&e, c) = form.coeffs.iter().next().unwrap();
        Some((c.clone(), e))
    } else {
        None
    }
}

/// Linear exponent `lambda*x + mu` with `lambda != 0`.
fn linear_exponent(g: &RatFunc) -> Option<(Q, Q)> {
    if !g.is_polynomial() || g.numer().deg() != 1 {
        return None;
    }
    Some((g.numer().coeff(1), g.numer().coeff(0)))
}

/// Stability of a fragment term over the elementary extensions of Q(x),
/// with respect to d/dx.
pub fn stable_elementary(e: &ElemExpr) -> StabilityVerdict {
    if e.is_zero() {
        return StabilityVerdict::Stable(ChainGenerator::LaurentLog);
    }
    match (e.logpow, &e.expo) {
        (0, None) => {
            if is_laurent(&e.coef).is_some() {
                StabilityVerdict::Stable(ChainGenerator::LaurentLog)
            } else {
                // stable by the classical fact that every rational function
                // is elementary integrable, at every moment x^i f
                StabilityVerdict::Stable(ChainGenerator::LogExtension)
            }
        }
        (1, None) => {
            if is_laurent(&e.coef).is_some() {
                StabilityVerdict::Stable(ChainGenerator::LaurentLog)
            } else {
                StabilityVerdict::NotStable(pole_obstruction(e.coef.denom(), true))
            }
        }
        (_, None) => {
            if laurent_monomial(&e.coef).is_some() {
                StabilityVerdict::Stable(ChainGenerator::LaurentLog)
            } else {
                StabilityVerdict::OutOfFragment(
                    "log powers above 1 are decided for monomial coefficients only".into(),
                )
            }
        }
        (0, Some(g)) => {
            if linear_exponent(g).is_none() {
                return StabilityVerdict::NotStable(Obstruction::DegreeDrop);
            }
            if e.coef.is_polynomial() {
                StabilityVerdict::Stable(ChainGenerator::PolyExp)
            } else {
                StabilityVerdict::NotStable(pole_obstruction(e.coef.denom(), false))
            }
        }
        (_, Some(_)) => StabilityVerdict::OutOfFragment(
            "mixed log and exp factors have no decision procedure".into(),
        ),
    }
}

/// A verified chain `g_1, ..., g_k` with `delta(g_1) = input` and
/// `delta(g_(i+1)) = g_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessChain {
    pub derivation: Derivation,
    pub links: Vec<ElemSum>,
}

/// Antiderivative of `c * x^n * log(x)^m` as a fragment sum.
///
/// For `n != -1` this is the closed form
/// `x^(n+1) * sum_k (-1)^k m!/(m-k)! log^(m-k) / (n+1)^(k+1)`;
/// at `n = -1` the log power bumps: `c * log^(m+1) / (m+1)`.
fn integrate_monomial_log(c: &Q, n: i64, m: u32) -> ElemSum {
    if n == -1 {
        let coef = RatFunc::constant(c / &qi(m as i64 + 1));
        return ElemSum::from_terms(vec![ElemExpr {
            coef,
            logpow: m + 1,
            expo: None,
        }]);
    }
    let mut terms = Vec::new();
    let n1 = qi(n + 1);
    let mut falling = Q::one(); // m!/(m-k)!
    let mut n1pow = n1.clone(); // (n+1)^(k+1)
    for k in 0..=m {
        if k > 0 {
            falling *= qi((m - k + 1) as i64);
            n1pow *= &n1;
        }
        let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
        let scalar = c * sign * &falling / &n1pow;
        let coef = if n + 1 >= 0 {
            RatFunc::from_poly(Poly::monomial(scalar, (n + 1) as usize))
        } else {
            RatFunc::new(
                Poly::constant(scalar),
                Poly::monomial(Q::one(), (-(n + 1)) as usize),
            )
        };
        terms.push(ElemExpr {
            coef,
            logpow: m - k,
            expo: None,
        });
    }
    ElemSum::from_terms(terms)
}

/// Antiderivative of a Laurent-log sum, term by term.
fn integrate_laurent_log_sum(s: &ElemSum) -> Result<ElemSum, ChainError> {
    let mut acc = ElemSum::zero();
    for t in &s.terms {
        if t.expo.is_some() {
            return Err(ChainError::UnrepresentableChain(
                "exp factor inside a Laurent-log chain".into(),
            ));
        }
        let Some(form) = is_laurent(&t.coef) else {
            return Err(ChainError::UnrepresentableChain(
                "non-Laurent coefficient inside a Laurent-log chain".into(),
            ));
        };
        for (&e, c) in &form.coeffs {
            acc = acc.add(&integrate_monomial_log(c, e, t.logpow));
        }
    }
    Ok(acc)
}

/// Solves `h' + lambda*h = f` for a polynomial `h` (lambda != 0), top degree
/// first; always solvable and unique.
fn solve_poly_linear(f: &Poly, lambda: &Q) -> Poly {
    let mut h = vec![Q::zero(); f.coeffs().len()];
    for j in (0..f.coeffs().len()).rev() {
        let higher = if j + 1 < h.len() {
            &h[j + 1] * qi(j as i64 + 1)
        } else {
            Q::zero()
        };
        h[j] = (f.coeff(j) - higher) / lambda;
    }
    Poly::from_coeffs(h)
}

/// Depth-`k` witness chain for a stable fragment term, choosing the zero
/// integration constant at every step.
pub fn witness_chain(e: &ElemExpr, k: usize, d: Derivation) -> Result<WitnessChain, ChainError> {
    assert!(k >= 1, "chain depth must be at least 1");
    match d {
        Derivation::EulerXDDx => {
            if e.logpow != 0 || e.expo.is_some() {
                return Err(ChainError::NotStableInput);
            }
            if !stable_in_ratfield(&e.coef, d).is_stable() {
                return Err(ChainError::NotStableInput);
            }
            let mut cur = is_laurent(&e.coef)
                .expect("stable Euler input is Laurent")
                .coeffs;
            let mut links = Vec::with_capacity(k);
            for _ in 0..k {
                let mut next = BTreeMap::new();
                for (&i, c) in &cur {
                    debug_assert!(i != 0, "zero constant term is the stability invariant");
                    next.insert(i, c / &qi(i));
                }
                links.push(ElemSum::from(ElemExpr::rational(
                    crate::ratfunc::from_laurent(&next),
                )));
                cur = next;
            }
            Ok(WitnessChain {
                derivation: d,
                links,
            })
        }
        Derivation::DDx => match stable_elementary(e) {
            StabilityVerdict::NotStable(_) | StabilityVerdict::OutOfFragment(_) => {
                Err(ChainError::NotStableInput)
            }
            StabilityVerdict::Stable(ChainGenerator::LogExtension) => {
                Err(ChainError::UnrepresentableChain(
                    "antiderivatives of non-Laurent rational functions need \
                     logarithms with algebraic constants"
                        .into(),
                ))
            }
            StabilityVerdict::Stable(ChainGenerator::PolyExp) => {
                let g = e.expo.clone().expect("PolyExp term has an exponent");
                let (lambda, _) = linear_exponent(&g).expect("PolyExp exponent is linear");
                let mut cur = e.coef.numer().clone();
                let mut links = Vec::with_capacity(k);
                for _ in 0..k {
                    cur = solve_poly_linear(&cur, &lambda);
                    links.push(ElemSum::from(ElemExpr {
                        coef: RatFunc::from_poly(cur.clone()),
                        logpow: 0,
                        expo: Some(g.clone()),
                    }));
                }
                Ok(WitnessChain {
                    derivation: d,
                    links,
                })
            }
            StabilityVerdict::Stable(_) => {
                let mut cur = ElemSum::from(e.clone());
                let mut links = Vec::with_capacity(k);
                for _ in 0..k {
                    cur = integrate_laurent_log_sum(&cur)?;
                    links.push(cur.clone());
                }
                Ok(WitnessChain {
                    derivation: d,
                    links,
                })
            }
        },
    }
}

/// Verifies a chain by exact differentiation: `delta(g_1) = e` and
/// `delta(g_(i+1)) = g_i`.
pub fn check_chain(e: &ElemExpr, chain: &WitnessChain) -> bool {
    let mut expected: ElemSum = ElemSum::from(e.clone());
    for link in &chain.links {
        if link.derivative(chain.derivation) != expected {
            return false;
        }
        expected = link.clone();
    }
    true
}
