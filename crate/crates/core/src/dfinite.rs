//! D-finite series and P-recursive sequences.
//!
//! Conversions between differential and recurrence annihilators, formal
//! integrals, bound-limited annihilator guessing from truncations, and the
//! eventual-stability certificate: every D-finite power series has an
//! iterated formal integral whose minimal annihilator order stops growing,
//! and the stopping order is bounded by `2*max(1, deg P)*ord(P)^2` in terms
//! of the coefficient recurrence `P`.

use crate::integrate::{fexpg_solve, FexpgOutcome};
use crate::linalg::Mat;
use crate::ore::{OpKind, OreError, OreOperator};
use crate::poly::{qi, Poly, Q};
use crate::ratfunc::RatFunc;
use crate::roots::integer_roots;
use num::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DfiniteError {
    #[error("the zero operator annihilates nothing interesting")]
    ZeroOperator,
    #[error("operator must be of shift kind")]
    NotShiftKind,
    #[error("operator must be of differential kind")]
    NotDiffKind,
    #[error("truncation too short: need at least {needed} coefficients, have {have}")]
    InsufficientTruncation { needed: usize, have: usize },
    #[error("the recurrence does not annihilate the series coefficients")]
    RuleDoesNotAnnihilate,
    #[error("no annihilator found within the guaranteed bounds")]
    GuessExhausted,
    #[error("no certificate within the limits; observed order profile {order_profile:?}")]
    NoCertificateWithinLimits { order_profile: Vec<Option<usize>> },
    #[error(transparent)]
    Ore(#[from] OreError),
}

/// Truncated power series `a_0 + a_1 x + ... + a_T x^T` with exact rational
/// coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<Q>,
}

impl TruncSeries {
    /// Truncation order T is `coeffs.len() - 1`; at least one coefficient.
    pub fn new(coeffs: Vec<Q>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series carries a_0 at least"
        );
        TruncSeries { coeffs }
    }

    pub fn zero(t: usize) -> Self {
        TruncSeries {
            coeffs: vec![Q::zero(); t + 1],
        }
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Q {
        self.coeffs.get(n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Formal integral: coefficient n is `a_(n-1)/n`, constant term 0;
    /// the truncation order grows by one.
    pub fn formal_integral(&self) -> TruncSeries {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Q::zero());
        for (n, a) in self.coeffs.iter().enumerate() {
            out.push(a / qi(n as i64 + 1));
        }
        TruncSeries::new(out)
    }

    /// Termwise derivative; the reliable truncation shrinks by one.
    pub fn derivative(&self) -> TruncSeries {
        assert!(self.coeffs.len() >= 2, "derivative needs T >= 1");
        let out = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, a)| a * qi(i as i64 + 1))
            .collect();
        TruncSeries::new(out)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.coeffs.iter().take(8).map(|c| c.to_string()).collect();
        write!(
            f,
            "TruncSeries[{}{}; T={}]",
            shown.join(", "),
            if self.coeffs.len() > 8 { ", ..." } else { "" },
            self.trunc_order()
        )
    }
}

/// Recurrence annihilator with the action `P(a_n) = sum_i p_i(n) a_(n+i)`.
///
/// Stored with polynomial coefficients, numeric content removed.
#[derive(Clone, PartialEq, Eq)]
pub struct SequenceRule {
    op: OreOperator,
}

impl SequenceRule {
    pub fn new(op: OreOperator) -> Result<Self, DfiniteError> {
        if op.kind() != OpKind::Shift {
            return Err(DfiniteError::NotShiftKind);
        }
        if op.is_zero() {
            return Err(DfiniteError::ZeroOperator);
        }
        Ok(SequenceRule {
            op: op.primitive_polynomial(),
        })
    }

    pub fn op(&self) -> &OreOperator {
        &self.op
    }

    pub fn order(&self) -> usize {
        self.op.ord().expect("rule operator is nonzero")
    }

    pub fn degree(&self) -> usize {
        self.op.degree().unwrap_or(0)
    }

    pub fn apply(&self, window: &[Q]) -> Result<Vec<Q>, OreError> {
        self.op.apply_window(window)
    }

    pub fn annihilates(&self, window: &[Q]) -> bool {
        match self.apply(window) {
            Ok(values) => values.iter().all(|v| v.is_zero()),
            Err(_) => false,
        }
    }
}

impl fmt::Display for SequenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.op)
    }
}

impl fmt::Debug for SequenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SequenceRule({})", self.op)
    }
}

/// Falling-factorial polynomial `(n - j + 1)(n - j + 2)...(n - j + i)` in n.
fn falling_factor(i: usize, j: usize) -> Poly {
    let mut acc = Poly::one();
    for u in 1..=i {
        acc = &acc * &Poly::from_coeffs(vec![qi(u as i64 - j as i64), Q::one()]);
    }
    acc
}

/// Exact rewriting of a differential annihilator into a recurrence for the
/// coefficient sequence: the coefficient of `x^n` in `x^j f^(i)` is
/// `(n-j+1)...(n-j+i) a_(n-j+i)`. When monomials with `j > i` force negative
/// offsets, the rule is rebased by `s = max(j - i)`: operator position `n`
/// carries the extraction row `n + s`, so the action never touches negative
/// indices and `P(a_n) = 0` holds for every `n >= 0` (the finitely many rows
/// below `s` are initial conditions that a single shift operator cannot
/// carry).
pub fn diff_to_rec(l: &OreOperator) -> Result<SequenceRule, DfiniteError> {
    if l.kind() != OpKind::Diff {
        return Err(DfiniteError::NotDiffKind);
    }
    if l.is_zero() {
        return Err(DfiniteError::ZeroOperator);
    }
    let cleared = l.clear_denominators();
    let coeffs = cleared.poly_coeffs();
    // offset r = i - j collects p_r(n) = sum c_ij (n-j+1)...(n-j+i)
    let mut rmin = i64::MAX;
    let mut rmax = i64::MIN;
    for (i, c) in coeffs.iter().enumerate() {
        for (j, cij) in c.coeffs().iter().enumerate() {
            if !cij.is_zero() {
                let r = i as i64 - j as i64;
                rmin = rmin.min(r);
                rmax = rmax.max(r);
            }
        }
    }
    let shift = (-rmin).max(0);
    let len = (rmax + shift) as usize + 1;
    let mut ps: Vec<Poly> = vec![Poly::zero(); len];
    for (i, c) in coeffs.iter().enumerate() {
        for (j, cij) in c.coeffs().iter().enumerate() {
            if cij.is_zero() {
                continue;
            }
            let r = i as i64 - j as i64;
            let mut term = falling_factor(i, j).scale(cij);
            if shift > 0 {
                term = term.compose_shift(&qi(shift));
            }
            let k = (r + shift) as usize;
            ps[k] = &ps[k] + &term;
        }
    }
    let op = OreOperator::new(
        OpKind::Shift,
        ps.into_iter().map(RatFunc::from_poly).collect(),
    );
    SequenceRule::new(op)
}

/// Action of a differential operator on a truncated series; the result is
/// trimmed to the reliable prefix, whose length is
/// `T + min_(i,j)(j - i)` over the nonzero monomials of `L`.
pub fn apply_series(l: &OreOperator, s: &TruncSeries) -> Result<TruncSeries, OreError> {
    if l.kind() != OpKind::Diff {
        return Err(OreError::KindMismatch);
    }
    if l.is_zero() {
        return Ok(TruncSeries::zero(s.trunc_order()));
    }
    let cleared = l.clear_denominators();
    let coeffs = cleared.poly_coeffs();
    let t = s.trunc_order() as i64;
    let mut reliable = i64::MAX;
    for (i, c) in coeffs.iter().enumerate() {
        for (j, cij) in c.coeffs().iter().enumerate() {
            if !cij.is_zero() {
                reliable = reliable.min(t + j as i64 - i as i64);
            }
        }
    }
    if reliable < 0 {
        return Err(OreError::WindowTooShort);
    }
    let mut out = vec![Q::zero(); reliable as usize + 1];
    for (i, c) in coeffs.iter().enumerate() {
        for (j, cij) in c.coeffs().iter().enumerate() {
            if cij.is_zero() {
                continue;
            }
            for (n, slot) in out.iter_mut().enumerate() {
                if n < j {
                    continue;
                }
                let idx = n - j + i;
                let mut fall = Q::one();
                for u in 1..=i {
                    fall *= qi((n - j + u) as i64);
                }
                *slot += cij * fall * s.coeff(idx);
            }
        }
    }
    Ok(TruncSeries::new(out))
}

/// Annihilator for the integrated coefficients `b_n = a_(n-1)/n` (with
/// `b_0 = 0`): substitute `a_n = (n+1) b_(n+1)`, shift the index back, and
/// guard the boundary with an `n` prefactor. The order is preserved.
pub fn integral_rec(p: &SequenceRule) -> SequenceRule {
    let coeffs = p.op().poly_coeffs();
    // c_i(n) = p_i(n) * (n + i + 1)
    let mut cs: Vec<Poly> = coeffs
        .iter()
        .enumerate()
        .map(|(i, pi)| pi * &Poly::from_coeffs(vec![qi(i as i64 + 1), Q::one()]))
        .collect();
    // divide out a common polynomial factor when it has no roots in N
    let mut g = Poly::zero();
    for c in &cs {
        g = g.gcd(c);
    }
    if !g.is_constant() && integer_roots(&g).iter().all(|r| r.is_negative()) {
        for c in &mut cs {
            *c = c.exact_div(&g);
        }
    }
    // relation on b valid for n >= 1; multiply by n to cover n = 0
    let n = Poly::x();
    let qs: Vec<RatFunc> = cs
        .iter()
        .map(|c| RatFunc::from_poly(&n * &c.compose_shift(&qi(-1))))
        .collect();
    SequenceRule::new(OreOperator::new(OpKind::Shift, qs))
        .expect("integral of a nonzero rule is nonzero")
}

/// Minimality claim for an integral operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Minimality {
    Minimal,
    Unknown,
}

/// An operator whose solutions have derivatives exactly the solutions of `L`.
///
/// The default is `L*D` (one order higher, no minimality claim). For first
/// order operators the order-preserving criterion `D*P + r*L = 1` reduces to
/// the single equation `p' - (l0/l1) p = 1`, which the supported regimes of
/// [`fexpg_solve`] decide; on success `p*D - 1` is an order-one integral.
pub fn integral_diff(l: &OreOperator) -> Result<(OreOperator, Minimality), DfiniteError> {
    if l.kind() != OpKind::Diff {
        return Err(DfiniteError::NotDiffKind);
    }
    if l.is_zero() {
        return Err(DfiniteError::ZeroOperator);
    }
    let fallback = l
        .multiply(&OreOperator::generator(OpKind::Diff))
        .expect("same-kind product");
    if l.ord() != Some(1) {
        return Ok((fallback, Minimality::Unknown));
    }
    let w = &(-&l.coeff(0)) / &l.coeff(1);
    if w.is_zero() {
        // L = c*D: solutions are constants; their antiderivative space is
        // two-dimensional, so no order-one integral exists
        return Ok((fallback, Minimality::Unknown));
    }
    match fexpg_solve(&RatFunc::one(), &w) {
        Ok(FexpgOutcome::Solution(p)) if !p.is_zero() => {
            let lint = OreOperator::new(OpKind::Diff, vec![-&RatFunc::one(), p]);
            Ok((lint.primitive_polynomial(), Minimality::Minimal))
        }
        _ => Ok((fallback, Minimality::Unknown)),
    }
}

/// Degree and order bounds for the eventual-stability search:
/// `2 * max(1, deg P) * ord(P)^2`, with both factors guarded at 1 so the
/// degenerate order-0 recurrences stay usable.
pub fn eventual_stability_bound(p: &SequenceRule) -> (usize, usize) {
    let d = p.degree().max(1);
    let r = p.order().max(1);
    let bound = 2 * d * r * r;
    (bound, bound)
}

/// Recommended truncation for certificate runs at a given order bound.
pub fn default_truncation(order_bound: usize) -> usize {
    4 * (order_bound + 1) * (order_bound + 3) + 16
}

const GUESS_HOLDOUT: usize = 5;

/// Bound-limited minimal annihilator guessing.
///
/// Scans orders (then degrees) ascending, solving the undetermined-
/// coefficient system on the training prefix and verifying every candidate
/// on the last five reliable coefficients. Returns the first
/// verified operator, normalized so the leading coefficient has leading
/// term 1; `None` when the bounds are exhausted.
pub fn guess_min_annihilator(
    s: &TruncSeries,
    max_ord: usize,
    max_deg: usize,
) -> Result<Option<OreOperator>, DfiniteError> {
    let t = s.trunc_order();
    let needed = (max_ord + 1) * (max_deg + 1) + GUESS_HOLDOUT + max_ord;
    if t + 1 < needed {
        return Err(DfiniteError::InsufficientTruncation {
            needed,
            have: t + 1,
        });
    }
    for r in 0..=max_ord {
        for dd in 0..=max_deg {
            if let Some(op) = try_guess(s, r, dd)? {
                return Ok(Some(op));
            }
        }
    }
    Ok(None)
}

/// One (order, degree) cell of the guessing sweep.
fn try_guess(s: &TruncSeries, r: usize, dd: usize) -> Result<Option<OreOperator>, DfiniteError> {
    let t = s.trunc_order();
    let rows_total = t + 1 - r; // reliable output coefficients
    if rows_total < (r + 1) * (dd + 1) + GUESS_HOLDOUT {
        return Ok(None); // cell underdetermined; larger cells raise the error upfront
    }
    let train = rows_total - GUESS_HOLDOUT;
    let ncols = (r + 1) * (dd + 1);
    let entry = |n: usize, i: usize, j: usize| -> Q {
        // coefficient of x^n in x^j * (d/dx)^i applied to the series
        if n < j {
            return Q::zero();
        }
        let idx = n - j + i;
        debug_assert!(idx <= t);
        let mut fall = Q::one();
        for u in 1..=i {
            fall *= qi((n - j + u) as i64);
        }
        fall * s.coeff(idx)
    };
    let col_index = |i: usize, j: usize| i * (dd + 1) + j;
    let mut mat = Mat::zeros(train, ncols);
    for n in 0..train {
        for i in 0..=r {
            for j in 0..=dd {
                mat.set(n, col_index(i, j), entry(n, i, j));
            }
        }
    }
    let kernel = mat.nullspace();
    'cand: for v in kernel {
        // leading D-coefficient must be a nonzero polynomial
        if (0..=dd).all(|j| v[col_index(r, j)].is_zero()) {
            continue;
        }
        // holdout verification
        for n in train..rows_total {
            let mut acc = Q::zero();
            for i in 0..=r {
                for j in 0..=dd {
                    let c = &v[col_index(i, j)];
                    if !c.is_zero() {
                        acc += c * entry(n, i, j);
                    }
                }
            }
            if !acc.is_zero() {
                continue 'cand;
            }
        }
        let coeffs: Vec<RatFunc> = (0..=r)
            .map(|i| {
                RatFunc::from_poly(Poly::from_coeffs(
                    (0..=dd).map(|j| v[col_index(i, j)].clone()).collect(),
                ))
            })
            .collect();
        let op = OreOperator::new(OpKind::Diff, coeffs);
        // leading coefficient's leading term becomes 1
        let norm = op.scale(&RatFunc::constant(Q::one() / op.lc().numer().lc()));
        return Ok(Some(norm));
    }
    Ok(None)
}

/// Differential annihilator recovered from a recurrence by bound-limited
/// guessing and verified against the recurrence picture on the full window.
///
/// The search bounds are the conversion bounds (order <= deg P, degree <=
/// ord P + deg P) widened by one: recurrences that only hold from `n = 0`
/// on (rather than with zero padding) can force one extra differentiation,
/// as the geometric series already shows.
pub fn rec_to_diff(p: &SequenceRule, s: &TruncSeries) -> Result<OreOperator, DfiniteError> {
    if !p.annihilates(s.coeffs()) {
        return Err(DfiniteError::RuleDoesNotAnnihilate);
    }
    let max_ord = p.degree() + 1;
    let max_deg = p.order() + p.degree() + 1;
    let Some(op) = guess_min_annihilator(s, max_ord, max_deg)? else {
        return Err(DfiniteError::GuessExhausted);
    };
    // cross-check: the recurrence picture of the guess annihilates the window
    let back = diff_to_rec(&op)?;
    if !back.annihilates(s.coeffs()) {
        return Err(DfiniteError::GuessExhausted);
    }
    Ok(op)
}

/// Eventual-stability certificate for a D-finite series.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Number of formal integrations before the order profile flattens.
    pub m: usize,
    /// The common annihilator order of `int^m(f) ... int^(m+window)(f)`.
    pub stable_order: usize,
    /// Verified annihilators for the window, in order of integration depth.
    pub annihilators: Vec<OreOperator>,
    /// The order bound the search ran under.
    pub bound_used: usize,
    /// Input truncation order.
    pub truncation_used: usize,
}

/// Searches for the smallest `m <= max_m` such that the guessed minimal
/// annihilator orders of `int^m(f), ..., int^(m+window)(f)` agree.
pub fn eventual_stability_certificate(
    s: &TruncSeries,
    p: &SequenceRule,
    max_m: usize,
    window: usize,
) -> Result<Certificate, DfiniteError> {
    if !p.annihilates(s.coeffs()) {
        return Err(DfiniteError::RuleDoesNotAnnihilate);
    }
    let (deg_bound, order_bound) = eventual_stability_bound(p);
    let guess_deg = p.order() + deg_bound;
    let depth = max_m + window;
    let mut anns: Vec<Option<OreOperator>> = Vec::with_capacity(depth + 1);
    let mut cur = s.clone();
    for i in 0..=depth {
        if i > 0 {
            cur = cur.formal_integral();
        }
        anns.push(guess_min_annihilator(&cur, order_bound, guess_deg)?);
    }
    let profile: Vec<Option<usize>> = anns
        .iter()
        .map(|a| a.as_ref().and_then(|op| op.ord()))
        .collect();
    for m in 0..=max_m {
        let Some(first) = profile[m] else { continue };
        if (m..=m + window).all(|i| profile[i] == Some(first)) {
            return Ok(Certificate {
                m,
                stable_order: first,
                annihilators: anns[m..=m + window]
                    .iter()
                    .map(|a| a.clone().expect("orders checked above"))
                    .collect(),
                bound_used: order_bound,
                truncation_used: s.trunc_order(),
            });
        }
    }
    Err(DfiniteError::NoCertificateWithinLimits {
        order_profile: profile,
    })
}

// Named generators used by the CLI and the test suites.

/// exp(x) truncated at order `t`.
pub fn exp_series(t: usize) -> TruncSeries {
    let mut coeffs = Vec::with_capacity(t + 1);
    let mut c = Q::one();
    for n in 0..=t {
        if n > 0 {
            c /= qi(n as i64);
        }
        coeffs.push(c.clone());
    }
    TruncSeries::new(coeffs)
}

/// 1/(1-x) truncated at order `t`.
pub fn geom_series(t: usize) -> TruncSeries {
    TruncSeries::new(vec![Q::one(); t + 1])
}

/// A polynomial as a series, zero-padded to order `t`.
pub fn poly_series(p: &Poly, t: usize) -> TruncSeries {
    let mut coeffs: Vec<Q> = (0..=t).map(|i| p.coeff(i)).collect();
    if p.degree().is_some_and(|d| d > t) {
        coeffs.truncate(t + 1);
    }
    TruncSeries::new(coeffs)
}

/// `(n+1)S - 1`, the exp recurrence.
pub fn exp_rule() -> SequenceRule {
    SequenceRule::new(OreOperator::new(
        OpKind::Shift,
        vec![
            RatFunc::constant(-Q::one()),
            RatFunc::from_poly(Poly::from_ints(&[1, 1])),
        ],
    ))
    .expect("nonzero shift operator")
}

/// `S - 1`, the geometric (constant-sequence) recurrence.
pub fn geom_rule() -> SequenceRule {
    SequenceRule::new(OreOperator::new(
        OpKind::Shift,
        vec![RatFunc::constant(-Q::one()), RatFunc::one()],
    ))
    .expect("nonzero shift operator")
}

/// `S^(d+1)`: annihilates every sequence supported on `0..=d`.
pub fn poly_rule(deg: usize) -> SequenceRule {
    SequenceRule::new(OreOperator::monomial(
        OpKind::Shift,
        RatFunc::one(),
        deg + 1,
    ))
    .expect("nonzero shift operator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qr;
    use crate::ratfunc::{rat, rat_int};

    fn d() -> OreOperator {
        OreOperator::generator(OpKind::Diff)
    }

    fn dm1() -> OreOperator {
        d().sub(&OreOperator::one(OpKind::Diff)).unwrap()
    }

    #[test]
    fn diff_to_rec_examples() {
        // D - 1 -> (n+1)S - 1
        let p = diff_to_rec(&dm1()).unwrap();
        assert_eq!(p.to_string(), "(n + 1)*S - 1");
        // D -> (n+1)S
        let p = diff_to_rec(&d()).unwrap();
        assert_eq!(p.to_string(), "(n + 1)*S");
        // x*D - 1 -> (n - 1), order 0
        let xd1 = OreOperator::new(OpKind::Diff, vec![rat_int(-1), RatFunc::x()]);
        let p = diff_to_rec(&xd1).unwrap();
        assert_eq!(p.order(), 0);
        assert_eq!(p.to_string(), "n - 1");
    }

    #[test]
    fn apply_series_reliability() {
        // (D-1) on the exp truncation: all-zero reliable prefix
        let s = exp_series(12);
        let out = apply_series(&dm1(), &s).unwrap();
        assert_eq!(out.trunc_order(), 11);
        assert!(out.is_zero());
        // (x*D) keeps full length
        let xd = OreOperator::new(OpKind::Diff, vec![RatFunc::zero(), RatFunc::x()]);
        let out = apply_series(&xd, &s).unwrap();
        assert_eq!(out.trunc_order(), 12);
    }

    #[test]
    fn formal_integral_examples() {
        let s = TruncSeries::new(vec![qi(1), qi(1), qr(1, 2), qr(1, 6)]);
        assert_eq!(
            s.formal_integral().coeffs(),
            &[qi(0), qi(1), qr(1, 2), qr(1, 6), qr(1, 24)]
        );
        let z = TruncSeries::zero(3);
        assert!(z.formal_integral().is_zero());
        let ones = TruncSeries::new(vec![qi(1); 4]);
        assert_eq!(
            ones.formal_integral().coeffs(),
            &[qi(0), qi(1), qr(1, 2), qr(1, 3), qr(1, 4)]
        );
    }

    #[test]
    fn integral_rec_exp() {
        // (n+1)S - 1 -> n(n+1)S - n
        let q = integral_rec(&exp_rule());
        assert_eq!(q.order(), 1);
        assert_eq!(q.to_string(), "(n^2 + n)*S - n");
        // annihilates the integrated exp coefficients
        let b = exp_series(12).formal_integral();
        assert!(q.annihilates(b.coeffs()));
    }

    #[test]
    fn integral_rec_preserves_order_for_constants() {
        let q = integral_rec(&geom_rule());
        assert_eq!(q.order(), 1);
        let b = geom_series(12).formal_integral();
        assert!(q.annihilates(b.coeffs()));
    }

    #[test]
    fn guess_examples() {
        // exp -> D - 1
        let op = guess_min_annihilator(&exp_series(40), 3, 3)
            .unwrap()
            .unwrap();
        assert_eq!(op, dm1());
        // e^x - 1 -> D^2 - D (no order-1 rational annihilator)
        let mut coeffs = exp_series(40).coeffs().to_vec();
        coeffs[0] = Q::zero();
        let op = guess_min_annihilator(&TruncSeries::new(coeffs), 3, 3)
            .unwrap()
            .unwrap();
        let expected = d().multiply(&dm1()).unwrap(); // D(D-1) = D^2 - D
        assert_eq!(op, expected);
        // x^2 -> x*D - 2
        let s = poly_series(&Poly::from_ints(&[0, 0, 1]), 40);
        let op = guess_min_annihilator(&s, 3, 3).unwrap().unwrap();
        assert_eq!(
            op,
            OreOperator::new(OpKind::Diff, vec![rat_int(-2), RatFunc::x()])
        );
    }

    #[test]
    fn guess_insufficient_truncation() {
        let s = exp_series(5);
        assert!(matches!(
            guess_min_annihilator(&s, 3, 3),
            Err(DfiniteError::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn rec_to_diff_examples() {
        let op = rec_to_diff(&exp_rule(), &exp_series(24)).unwrap();
        assert_eq!(op, dm1());
        // constant-1 series with rule (n+1)S -> D
        let rule = SequenceRule::new(OreOperator::new(
            OpKind::Shift,
            vec![RatFunc::zero(), rat(&[1, 1], &[1])],
        ))
        .unwrap();
        let s = poly_series(&Poly::one(), 24);
        let op = rec_to_diff(&rule, &s).unwrap();
        assert_eq!(op, d());
        // geometric: S - 1 -> (x-1)D + 1 (the sign-normalized (1-x)D - 1)
        let op = rec_to_diff(&geom_rule(), &geom_series(24)).unwrap();
        assert_eq!(
            op,
            OreOperator::new(OpKind::Diff, vec![rat_int(1), rat(&[-1, 1], &[1])])
        );
    }

    #[test]
    fn integral_diff_cases() {
        // D: no order-1 integral; fallback D^2
        let (lint, min) = integral_diff(&d()).unwrap();
        assert_eq!(lint, d().multiply(&d()).unwrap());
        assert_eq!(min, Minimality::Unknown);
        // D - 1: p' + p = 1 has p = 1, so D - 1 is its own integral
        let (lint, min) = integral_diff(&dm1()).unwrap();
        assert_eq!(lint, dm1());
        assert_eq!(min, Minimality::Minimal);
        // D - 2 likewise
        let dm2 = d()
            .sub(&OreOperator::from_ratfunc(OpKind::Diff, rat_int(2)))
            .unwrap();
        let (lint, min) = integral_diff(&dm2).unwrap();
        assert_eq!(lint, dm2);
        assert_eq!(min, Minimality::Minimal);
        // x*D - 1: the cascade equation p' + p/x = 1 is outside the
        // supported regimes; order-2 fallback with no claim
        let xd1 = OreOperator::new(OpKind::Diff, vec![rat_int(-1), RatFunc::x()]);
        let (lint, min) = integral_diff(&xd1).unwrap();
        assert_eq!(lint.ord(), Some(2));
        assert_eq!(min, Minimality::Unknown);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(eventual_stability_bound(&exp_rule()), (2, 2));
        // ord 2, deg 3
        let p = SequenceRule::new(OreOperator::new(
            OpKind::Shift,
            vec![
                RatFunc::from_poly(Poly::from_ints(&[0, 0, 0, 1])),
                RatFunc::one(),
                RatFunc::one(),
            ],
        ))
        .unwrap();
        assert_eq!(eventual_stability_bound(&p), (24, 24));
        // ord 1, deg 0
        assert_eq!(eventual_stability_bound(&geom_rule()), (2, 2));
    }

    #[test]
    fn certificate_for_exp() {
        let t = default_truncation(2);
        let cert = eventual_stability_certificate(&exp_series(t), &exp_rule(), 4, 2).unwrap();
        assert_eq!(cert.m, 1);
        assert_eq!(cert.stable_order, 2);
        assert!(cert.stable_order <= cert.bound_used);
    }
}
