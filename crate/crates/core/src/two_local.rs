//! 2-local derivations.
//!
//! A 2-local derivation is a (possibly non-additive) map Δ such that every
//! pair `(x, y)` admits a genuine derivation agreeing with Δ at both points.
//! This module makes that definition executable: [`witness_find`] solves for
//! such a witness derivation exactly, [`is_two_local_on_set`] checks all
//! pairs from a probe set, and [`decompose_w22_two_local`] /
//! [`classify_thin_two_local`] reconstruct the closed forms that 2-local
//! derivations of the two algebras are known to take — for W(2,2) a genuine
//! derivation `ad(a) + μD`, for the thin algebra a derivation plus the
//! non-additive map [`omega_apply`].

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{AlgebraId, BasisSymbol, Element};
use crate::derivations::{outer_d, ElementMap, ThinDerivation, W22Derivation};
use crate::linalg::{self, LinearSystem};
use crate::rational::{rat, Rational};
use crate::Error;

/// Parameters of the non-additive map Ω: a coefficient vector
/// `theta = (θ_2..θ_m)`, a scalar `lambda` acting at the single index `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaParams {
    pub theta: Vec<Rational>,
    pub lambda: Rational,
    pub q: i64,
}

impl OmegaParams {
    pub fn new(theta: Vec<Rational>, lambda: Rational, q: i64) -> Self {
        assert!(q > 2, "the single-term branch index must satisfy q > 2, got {q}");
        OmegaParams { theta, lambda, q }
    }

    pub fn zero() -> Self {
        OmegaParams { theta: Vec::new(), lambda: Rational::zero(), q: 3 }
    }

    /// `m` is one more than the length of `theta`.
    pub fn m(&self) -> usize {
        self.theta.len() + 1
    }

    /// Canonical form: trailing zeros of `theta` trimmed; `q = 3` when
    /// `lambda = 0` makes the index inert.
    pub fn canonical(&self) -> OmegaParams {
        let theta = crate::derivations::trim_zeros(&self.theta);
        let q = if self.lambda.is_zero() { 3 } else { self.q };
        OmegaParams { theta, lambda: self.lambda.clone(), q }
    }

    pub fn is_zero(&self) -> bool {
        self.theta.iter().all(|c| c.is_zero()) && self.lambda.is_zero()
    }
}

/// Evaluates Ω at `x = Σ k_i e_i`:
///
/// * if `k_1 ≠ 0` — `Σ_{i≥2} Σ_{j=2..m} k_i θ_j e_{i+j-2}`;
/// * else if `x = k_q e_q` exactly (a single term at the fixed index `q`) —
///   `λ k_q e_q`;
/// * otherwise `0`.
pub fn omega_apply(params: &OmegaParams, x: &Element) -> Result<Element, Error> {
    if x.algebra() != AlgebraId::Thin {
        return Err(Error::AlgebraMismatch { expected: AlgebraId::Thin, found: x.algebra() });
    }
    if !x.coeff(BasisSymbol::e(1)).is_zero() {
        let mut out = Element::zero(AlgebraId::Thin);
        for (sym, k) in x.terms() {
            let i = sym.index();
            if i < 2 {
                continue;
            }
            for (jo, theta) in params.theta.iter().enumerate() {
                let j = jo as i64 + 2;
                out = out.add(&Element::term(k * theta, BasisSymbol::e(i + j - 2)))?;
            }
        }
        return Ok(out);
    }
    let mut terms = x.terms();
    if let (Some((sym, k)), None) = (terms.next(), terms.next()) {
        if sym.index() == params.q {
            return Ok(Element::term(&params.lambda * k, sym));
        }
    }
    Ok(Element::zero(AlgebraId::Thin))
}

/// A 2-local derivation of the thin algebra in closed form: a derivation
/// part plus an Ω part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThinTwoLocalMap {
    pub delta: ThinDerivation,
    pub omega: OmegaParams,
}

impl ThinTwoLocalMap {
    pub fn new(delta: ThinDerivation, omega: OmegaParams) -> Self {
        ThinTwoLocalMap { delta, omega }
    }
}

impl ElementMap for ThinTwoLocalMap {
    fn algebra(&self) -> AlgebraId {
        AlgebraId::Thin
    }

    fn apply(&self, x: &Element) -> Result<Element, Error> {
        self.delta.apply(x)?.add(&omega_apply(&self.omega, x)?)
    }
}

/// A deterministic evaluatable map used as input to the checkers: either a
/// closed-form map or a stored value table.
#[derive(Debug, Clone)]
pub enum MapOracle {
    W22Derivation(W22Derivation),
    ThinDerivation(ThinDerivation),
    ThinTwoLocal(ThinTwoLocalMap),
    Table { algebra: AlgebraId, entries: BTreeMap<Element, Element> },
}

impl MapOracle {
    pub fn table(
        algebra: AlgebraId,
        entries: impl IntoIterator<Item = (Element, Element)>,
    ) -> Self {
        MapOracle::Table { algebra, entries: entries.into_iter().collect() }
    }

    pub fn evaluate(&self, x: &Element) -> Result<Element, Error> {
        self.apply(x)
    }
}

impl ElementMap for MapOracle {
    fn algebra(&self) -> AlgebraId {
        match self {
            MapOracle::W22Derivation(_) => AlgebraId::W22,
            MapOracle::ThinDerivation(_) | MapOracle::ThinTwoLocal(_) => AlgebraId::Thin,
            MapOracle::Table { algebra, .. } => *algebra,
        }
    }

    fn apply(&self, x: &Element) -> Result<Element, Error> {
        if x.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch { expected: self.algebra(), found: x.algebra() });
        }
        match self {
            MapOracle::W22Derivation(d) => d.apply(x),
            MapOracle::ThinDerivation(d) => d.apply(x),
            MapOracle::ThinTwoLocal(m) => m.apply(x),
            MapOracle::Table { entries, .. } => {
                entries.get(x).cloned().ok_or_else(|| Error::UnknownProbe(x.clone()))
            }
        }
    }
}

/// A witness derivation returned by [`witness_find`]: the windowed
/// parameterization instantiated at the solver's particular solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessParams {
    W22(W22Derivation),
    Thin(ThinDerivation),
}

impl WitnessParams {
    pub fn apply(&self, x: &Element) -> Result<Element, Error> {
        match self {
            WitnessParams::W22(d) => d.apply(x),
            WitnessParams::Thin(d) => d.apply(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found(WitnessParams),
    /// No derivation in the windowed family matches both points.
    Infeasible,
}

impl WitnessOutcome {
    pub fn found(&self) -> Option<&WitnessParams> {
        match self {
            WitnessOutcome::Found(w) => Some(w),
            WitnessOutcome::Infeasible => None,
        }
    }
}

/// A coordinate of the witness parameterization: `a_k`/`b_k`/`λ` for W(2,2)
/// (inner `L`/`I` coefficients and the outer coefficient), `α_i`/`β_i` for
/// the thin algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessVar {
    A(i64),
    B(i64),
    Lambda,
    Alpha(i64),
    Beta(i64),
}

/// Extra linear constraints imposed on the witness parameters, used by the
/// lemma-consequence checks (e.g. pinning all inner coordinates outside a
/// support to zero, or tying two coordinates together).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessConstraint {
    PinZero(WitnessVar),
    Equal(WitnessVar, WitnessVar),
}

struct WitnessLayout {
    algebra: AlgebraId,
    window: i64,
}

impl WitnessLayout {
    fn labels(&self) -> Vec<String> {
        let n = self.window;
        match self.algebra {
            AlgebraId::W22 => {
                let mut v: Vec<String> = (-n..=n).map(|k| format!("a_{k}")).collect();
                v.extend((-n..=n).map(|k| format!("b_{k}")));
                v.push("lambda".into());
                v
            }
            AlgebraId::Thin => {
                let mut v: Vec<String> = (1..=n).map(|i| format!("alpha_{i}")).collect();
                v.extend((2..=n).map(|i| format!("beta_{i}")));
                v
            }
        }
    }

    fn index(&self, var: WitnessVar) -> usize {
        let n = self.window;
        match (self.algebra, var) {
            (AlgebraId::W22, WitnessVar::A(k)) if k.abs() <= n => (k + n) as usize,
            (AlgebraId::W22, WitnessVar::B(k)) if k.abs() <= n => {
                (2 * n + 1 + k + n) as usize
            }
            (AlgebraId::W22, WitnessVar::Lambda) => 2 * (2 * n as usize + 1),
            (AlgebraId::Thin, WitnessVar::Alpha(i)) if (1..=n).contains(&i) => (i - 1) as usize,
            (AlgebraId::Thin, WitnessVar::Beta(i)) if (2..=n).contains(&i) => {
                (n + i - 2) as usize
            }
            _ => panic!("witness variable {var:?} outside window {n} of {}", self.algebra),
        }
    }

    /// Adds the rows of `d(x) = v` where `d` is the parameterized
    /// derivation.
    fn add_matching_rows(&self, sys: &mut LinearSystem, x: &Element, v: &Element) {
        // coordinate symbol -> (var index -> coefficient)
        let mut coords: BTreeMap<BasisSymbol, BTreeMap<usize, Rational>> = BTreeMap::new();
        let mut touch = |u: BasisSymbol, var: usize, c: Rational| {
            if c.is_zero() {
                return;
            }
            let entry = coords.entry(u).or_default().entry(var).or_insert_with(Rational::zero);
            *entry += c;
        };
        let n = self.window;
        match self.algebra {
            AlgebraId::W22 => {
                for k in -n..=n {
                    for (gen, var) in [
                        (BasisSymbol::L(k), WitnessVar::A(k)),
                        (BasisSymbol::I(k), WitnessVar::B(k)),
                    ] {
                        let image = Element::basis(gen).bracket(x).unwrap();
                        for (u, c) in image.terms() {
                            touch(u, self.index(var), c.clone());
                        }
                    }
                }
                for (u, c) in outer_d(x).unwrap().terms() {
                    touch(u, self.index(WitnessVar::Lambda), c.clone());
                }
            }
            AlgebraId::Thin => {
                for (sym, k) in x.terms() {
                    let t = sym.index();
                    if t == 1 {
                        for i in 1..=n {
                            touch(BasisSymbol::e(i), self.index(WitnessVar::Alpha(i)), k.clone());
                        }
                    } else {
                        touch(sym, self.index(WitnessVar::Alpha(1)), k * rat(t - 2));
                        for i in 2..=n {
                            touch(
                                BasisSymbol::e(i + t - 2),
                                self.index(WitnessVar::Beta(i)),
                                k.clone(),
                            );
                        }
                    }
                }
            }
        }
        // Every coordinate the parameterized image can reach, plus every
        // coordinate of the target, must match exactly.
        for (u, _) in v.terms() {
            coords.entry(u).or_default();
        }
        for (u, row) in coords {
            sys.add_row(row, v.coeff(u));
        }
    }

    fn extract(&self, solution: &[Rational]) -> WitnessParams {
        let n = self.window;
        match self.algebra {
            AlgebraId::W22 => {
                let mut terms = Vec::new();
                for k in -n..=n {
                    terms.push((BasisSymbol::L(k), solution[self.index(WitnessVar::A(k))].clone()));
                    terms.push((BasisSymbol::I(k), solution[self.index(WitnessVar::B(k))].clone()));
                }
                let inner = Element::from_terms(AlgebraId::W22, terms).unwrap();
                let outer = solution[self.index(WitnessVar::Lambda)].clone();
                WitnessParams::W22(W22Derivation::new(inner, outer))
            }
            AlgebraId::Thin => {
                let alpha: Vec<Rational> =
                    (1..=n).map(|i| solution[self.index(WitnessVar::Alpha(i))].clone()).collect();
                let beta: Vec<Rational> =
                    (2..=n).map(|i| solution[self.index(WitnessVar::Beta(i))].clone()).collect();
                WitnessParams::Thin(ThinDerivation::new(alpha, beta))
            }
        }
    }
}

fn check_window(window: i64, elements: &[&Element]) -> Result<(), Error> {
    for x in elements {
        for sym in x.support() {
            if sym.index().abs() > window {
                return Err(Error::WindowTooSmall { symbol: sym, window });
            }
        }
    }
    Ok(())
}

/// Finds a derivation `d` with `d(x) = vx` and `d(y) = vy`, searching the
/// windowed parameter family (W(2,2): `a_k`, `b_k` for `|k| ≤ window` plus
/// the outer coefficient; thin: `α_1..α_window`, `β_2..β_window`). Returns
/// the solver's deterministic particular solution; the witness is generally
/// not unique.
pub fn witness_find(
    algebra: AlgebraId,
    x: &Element,
    vx: &Element,
    y: &Element,
    vy: &Element,
    window: i64,
) -> Result<WitnessOutcome, Error> {
    witness_find_constrained(algebra, &[(x.clone(), vx.clone()), (y.clone(), vy.clone())], window, &[])
}

/// [`witness_find`] over any number of matching equations, with optional
/// extra constraints on the parameters.
pub fn witness_find_constrained(
    algebra: AlgebraId,
    matches: &[(Element, Element)],
    window: i64,
    constraints: &[WitnessConstraint],
) -> Result<WitnessOutcome, Error> {
    for (x, v) in matches {
        if x.algebra() != algebra {
            return Err(Error::AlgebraMismatch { expected: algebra, found: x.algebra() });
        }
        if v.algebra() != algebra {
            return Err(Error::AlgebraMismatch { expected: algebra, found: v.algebra() });
        }
        check_window(window, &[x, v])?;
    }
    let layout = WitnessLayout { algebra, window };
    let mut sys = LinearSystem::with_labels(layout.labels());
    for (x, v) in matches {
        layout.add_matching_rows(&mut sys, x, v);
    }
    for c in constraints {
        match *c {
            WitnessConstraint::PinZero(v) => {
                sys.add_row([(layout.index(v), rat(1))], Rational::zero());
            }
            WitnessConstraint::Equal(v, w) => {
                sys.add_row([(layout.index(v), rat(1)), (layout.index(w), rat(-1))], Rational::zero());
            }
        }
    }
    let result = linalg::solve(&sys);
    Ok(match result.particular {
        Some(solution) => WitnessOutcome::Found(layout.extract(&solution)),
        None => WitnessOutcome::Infeasible,
    })
}

/// One probe pair of a 2-locality check.
#[derive(Debug, Clone)]
pub struct TwoLocalPair {
    pub x: Element,
    pub y: Element,
    /// `map(x)` and `map(y)`, the values the witness must reproduce.
    pub vx: Element,
    pub vy: Element,
    pub witness: Option<WitnessParams>,
}

#[derive(Debug, Clone)]
pub struct TwoLocalReport {
    pub pairs: Vec<TwoLocalPair>,
}

impl TwoLocalReport {
    pub fn pass(&self) -> bool {
        self.pairs.iter().all(|p| p.witness.is_some())
    }

    pub fn failures(&self) -> impl Iterator<Item = &TwoLocalPair> {
        self.pairs.iter().filter(|p| p.witness.is_none())
    }
}

/// Runs [`witness_find`] on every unordered pair from `probes` against the
/// oracle's values. Passes iff every pair admits a witness.
pub fn is_two_local_on_set(
    map: &MapOracle,
    probes: &[Element],
    window: i64,
) -> Result<TwoLocalReport, Error> {
    let mut pairs = Vec::new();
    for (i, x) in probes.iter().enumerate() {
        for y in probes.iter().skip(i + 1) {
            let vx = map.evaluate(x)?;
            let vy = map.evaluate(y)?;
            let outcome = witness_find(map.algebra(), x, &vx, y, &vy, window)?;
            pairs.push(TwoLocalPair {
                x: x.clone(),
                y: y.clone(),
                vx,
                vy,
                witness: outcome.found().cloned(),
            });
        }
    }
    Ok(TwoLocalReport { pairs })
}

#[derive(Debug, Clone)]
pub struct HomogeneityViolation {
    pub k: Rational,
    pub x: Element,
    /// `map(k·x)`
    pub lhs: Element,
    /// `k·map(x)`
    pub rhs: Element,
}

#[derive(Debug, Clone)]
pub struct HomogeneityReport {
    pub checked: usize,
    pub violations: Vec<HomogeneityViolation>,
}

impl HomogeneityReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `map(k·x) = k·map(x)` exactly for each sample. Every 2-local
/// derivation satisfies this.
pub fn check_homogeneity(
    map: &MapOracle,
    samples: &[(Rational, Element)],
) -> Result<HomogeneityReport, Error> {
    let mut violations = Vec::new();
    for (k, x) in samples {
        let lhs = map.evaluate(&x.scale(k))?;
        let rhs = map.evaluate(x)?.scale(k);
        if lhs != rhs {
            violations.push(HomogeneityViolation { k: k.clone(), x: x.clone(), lhs, rhs });
        }
    }
    Ok(HomogeneityReport { checked: samples.len(), violations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditivityCounterexample {
    pub x: Element,
    pub y: Element,
    /// `map(x + y)`
    pub lhs: Element,
    /// `map(x) + map(y)`
    pub rhs: Element,
}

/// Returns every sampled pair with `map(x+y) ≠ map(x) + map(y)`. A nonempty
/// result proves the map is not additive, hence not a derivation.
pub fn check_additivity(
    map: &MapOracle,
    samples: &[(Element, Element)],
) -> Result<Vec<AdditivityCounterexample>, Error> {
    let mut out = Vec::new();
    for (x, y) in samples {
        let lhs = map.evaluate(&x.add(y)?)?;
        let rhs = map.evaluate(x)?.add(&map.evaluate(y)?)?;
        if lhs != rhs {
            out.push(AdditivityCounterexample { x: x.clone(), y: y.clone(), lhs, rhs });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeFailure {
    /// The map is not 2-local at `(L_0, L_1)`.
    #[error("no witness derivation exists at (L[0], L[1])")]
    Infeasible,
    /// `map(I_0) - d_0(I_0)` is not a scalar multiple of `I_0`.
    #[error("residue at I[0] is not a scalar multiple of I[0]: {residue}")]
    ResidueNotScalarI0 { residue: Element },
    /// The reconstructed derivation disagrees with the map at a probe.
    #[error("candidate derivation disagrees at {probe}: map gives {map_value}, derivation gives {derivation_value}")]
    Disagreement { probe: Element, map_value: Element, derivation_value: Element },
    #[error(transparent)]
    Eval(#[from] Error),
}

/// Decomposes a W(2,2) map as a derivation `d_0 + μ·D`: `d_0` is a witness
/// at `(L_0, L_1)`, `μ` is read off the residue at `I_0`, and the candidate
/// is verified against the map on every probe. Succeeding proves the map
/// agrees with a genuine derivation on the probe set.
pub fn decompose_w22_two_local(
    map: &MapOracle,
    window: i64,
    verify_probes: &[Element],
) -> Result<W22Derivation, DecomposeFailure> {
    let l0 = Element::basis(BasisSymbol::L(0));
    let l1 = Element::basis(BasisSymbol::L(1));
    let i0 = Element::basis(BasisSymbol::I(0));

    let v0 = map.evaluate(&l0)?;
    let v1 = map.evaluate(&l1)?;
    let outcome = witness_find(AlgebraId::W22, &l0, &v0, &l1, &v1, window)?;
    let d0 = match outcome {
        WitnessOutcome::Found(WitnessParams::W22(d)) => d,
        WitnessOutcome::Found(WitnessParams::Thin(_)) => unreachable!(),
        WitnessOutcome::Infeasible => return Err(DecomposeFailure::Infeasible),
    };

    let residue = map.evaluate(&i0)?.sub(&d0.apply(&i0)?)?;
    let mu = residue.coeff(BasisSymbol::I(0));
    if residue != Element::term(mu.clone(), BasisSymbol::I(0)) {
        return Err(DecomposeFailure::ResidueNotScalarI0 { residue });
    }

    let candidate = W22Derivation::new(d0.inner.clone(), d0.outer_coeff.clone() + mu);
    for probe in verify_probes {
        let map_value = map.evaluate(probe)?;
        let derivation_value = candidate.apply(probe)?;
        if map_value != derivation_value {
            return Err(DecomposeFailure::Disagreement {
                probe: probe.clone(),
                map_value,
                derivation_value,
            });
        }
    }
    Ok(candidate)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyFailure {
    /// The map is not 2-local at `(e_1, e_2)`.
    #[error("no witness derivation exists at (e[1], e[2])")]
    Infeasible,
    /// Two distinct single-term residues: the single-index branch of Ω
    /// cannot account for both.
    #[error("ambiguous lambda: nonzero single-term residues at e[{first_q}] ({first}) and e[{second_q}] ({second})")]
    AmbiguousLambda { first_q: i64, first: Element, second_q: i64, second: Element },
    /// The map deviates from the reconstructed closed form at a probe.
    #[error("reconstructed map disagrees at {probe}: map gives {map_value}, reconstruction gives {reconstructed}")]
    Disagreement { probe: Element, map_value: Element, reconstructed: Element },
    #[error(transparent)]
    Eval(#[from] Error),
}

/// Reconstructs a thin-algebra map as derivation + Ω: the derivation part
/// is the (unique) witness at `(e_1, e_2)`, `θ` is read off the residual at
/// `e_1 + e_2`, `(q, λ)` off the single-generator residuals, and the result
/// is cross-validated on composite probes.
pub fn classify_thin_two_local(
    map: &MapOracle,
    window: i64,
) -> Result<ThinTwoLocalMap, ClassifyFailure> {
    assert!(window >= 6, "classification needs a window of at least 6");
    let e = |n: i64| Element::basis(BasisSymbol::e(n));

    let v1 = map.evaluate(&e(1))?;
    let v2 = map.evaluate(&e(2))?;
    let outcome = witness_find(AlgebraId::Thin, &e(1), &v1, &e(2), &v2, window)?;
    let delta = match outcome {
        WitnessOutcome::Found(WitnessParams::Thin(d)) => d,
        WitnessOutcome::Found(WitnessParams::W22(_)) => unreachable!(),
        WitnessOutcome::Infeasible => return Err(ClassifyFailure::Infeasible),
    };
    let residual = |x: &Element| -> Result<Element, ClassifyFailure> {
        Ok(map.evaluate(x)?.sub(&delta.apply(x)?)?)
    };

    // theta from the residual at e_1 + e_2: coefficient of e_j is θ_j.
    let r2 = residual(&e(1).add(&e(2))?)?;
    if !r2.coeff(BasisSymbol::e(1)).is_zero() {
        return Err(ClassifyFailure::Disagreement {
            probe: e(1).add(&e(2))?,
            map_value: map.evaluate(&e(1).add(&e(2))?)?,
            reconstructed: delta.apply(&e(1).add(&e(2))?)?,
        });
    }
    let max_j = r2.support().map(|s| s.index()).max().unwrap_or(1);
    let theta: Vec<Rational> = (2..=max_j).map(|j| r2.coeff(BasisSymbol::e(j))).collect();

    // Consistency of theta across e_1 + e_j for the rest of the window.
    for j in 3..=window {
        let probe = e(1).add(&e(j))?;
        let expected = theta.iter().enumerate().try_fold(
            Element::zero(AlgebraId::Thin),
            |acc, (jo, t)| acc.add(&Element::term(t.clone(), BasisSymbol::e(jo as i64 + j))),
        )?;
        let got = residual(&probe)?;
        if got != expected {
            return Err(ClassifyFailure::Disagreement {
                probe: probe.clone(),
                map_value: map.evaluate(&probe)?,
                reconstructed: delta.apply(&probe)?.add(&expected)?,
            });
        }
    }

    // (q, lambda) from single-generator residuals: at most one index may
    // carry a nonzero residual, and it must be a multiple of its generator.
    let mut found: Option<(i64, Element)> = None;
    for j in 3..=window {
        let rj = residual(&e(j))?;
        if rj.is_zero() {
            continue;
        }
        if let Some((first_q, first)) = &found {
            return Err(ClassifyFailure::AmbiguousLambda {
                first_q: *first_q,
                first: first.clone(),
                second_q: j,
                second: rj,
            });
        }
        let c = rj.coeff(BasisSymbol::e(j));
        if rj != Element::term(c, BasisSymbol::e(j)) {
            return Err(ClassifyFailure::Disagreement {
                probe: e(j),
                map_value: map.evaluate(&e(j))?,
                reconstructed: delta.apply(&e(j))?,
            });
        }
        found = Some((j, rj));
    }
    let (q, lambda) = match &found {
        Some((j, rj)) => (*j, rj.coeff(BasisSymbol::e(*j))),
        None => (3, Rational::zero()),
    };

    let reconstructed = ThinTwoLocalMap::new(
        delta.trimmed(),
        OmegaParams::new(theta, lambda, q).canonical(),
    );

    // Cross-validate on composite probes inside the window.
    let mut probes = vec![
        e(1).add(&e(2))?.add(&e(3))?,
        e(1).scale(&rat(2)).add(&e(4).scale(&rat(5)))?,
        e(1).add(&e(3).scale(&rat(2)))?.add(&e(5).scale(&rat(3)))?,
        e(2).add(&e(4))?,
        e(2).scale(&rat(3)),
        e(3).add(&e(4))?,
        e(1).scale(&rat(7)),
        e(q).scale(&rat(2)),
        Element::zero(AlgebraId::Thin),
    ];
    for j in 2..=window.min(8) {
        probes.push(e(1).neg().add(&e(j).scale(&rat(2)))?);
    }
    for probe in &probes {
        let map_value = map.evaluate(probe)?;
        let rec_value = reconstructed.apply(probe)?;
        if map_value != rec_value {
            return Err(ClassifyFailure::Disagreement {
                probe: probe.clone(),
                map_value,
                reconstructed: rec_value,
            });
        }
    }
    Ok(reconstructed)
}
