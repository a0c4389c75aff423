//! Derivations of the two algebras.
//!
//! For W(2,2) every derivation is `ad(a) + λ·D` where `D` kills every `L_m`
//! and fixes every `I_m`; [`W22Derivation`] stores exactly that data. For
//! the thin algebra every derivation is determined by two coefficient
//! vectors `α`, `β` acting as
//!
//! ```text
//! d(e_1) = Σ_{i=1..n} α_i e_i
//! d(e_j) = (j-2) α_1 e_j + Σ_{i=2..m} β_i e_{i+j-2},   j ≥ 2.
//! ```
//!
//! [`solve_derivation_space`] recovers these spaces from nothing but the
//! Leibniz rule, on a finite index window, and classifies the result into
//! inner and outer parts on the interior of the window.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{AlgebraId, BasisSymbol, Element};
use crate::linalg::{self, LinearSystem};
use crate::rational::{rat, Rational};
use crate::Error;

/// Anything that can be evaluated at an element. Implementors need not be
/// linear (2-local maps are not); derivation types are.
pub trait ElementMap {
    fn algebra(&self) -> AlgebraId;
    fn apply(&self, x: &Element) -> Result<Element, Error>;
}

/// The outer derivation of W(2,2): `D(L_m) = 0`, `D(I_m) = I_m`, extended
/// linearly.
pub fn outer_d(x: &Element) -> Result<Element, Error> {
    if x.algebra() != AlgebraId::W22 {
        return Err(Error::AlgebraMismatch { expected: AlgebraId::W22, found: x.algebra() });
    }
    Element::from_terms(
        AlgebraId::W22,
        x.terms().filter(|(s, _)| matches!(s, BasisSymbol::I(_))).map(|(s, c)| (s, c.clone())),
    )
}

/// A derivation of W(2,2): `x ↦ [inner, x] + outer_coeff · D(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct W22Derivation {
    pub inner: Element,
    pub outer_coeff: Rational,
}

impl W22Derivation {
    pub fn zero() -> Self {
        W22Derivation { inner: Element::zero(AlgebraId::W22), outer_coeff: Rational::zero() }
    }

    pub fn inner(a: Element) -> Self {
        assert_eq!(a.algebra(), AlgebraId::W22);
        W22Derivation { inner: a, outer_coeff: Rational::zero() }
    }

    pub fn new(inner: Element, outer_coeff: Rational) -> Self {
        assert_eq!(inner.algebra(), AlgebraId::W22);
        W22Derivation { inner, outer_coeff }
    }

    pub fn add(&self, other: &W22Derivation) -> W22Derivation {
        W22Derivation {
            inner: self.inner.add(&other.inner).expect("both W22"),
            outer_coeff: &self.outer_coeff + &other.outer_coeff,
        }
    }
}

impl ElementMap for W22Derivation {
    fn algebra(&self) -> AlgebraId {
        AlgebraId::W22
    }

    fn apply(&self, x: &Element) -> Result<Element, Error> {
        let ad = self.inner.bracket(x)?;
        ad.add(&outer_d(x)?.scale(&self.outer_coeff))
    }
}

/// A derivation of the thin algebra, given by the coefficient vectors
/// `alpha = (α_1..α_n)` and `beta = (β_2..β_m)`. Either vector may be empty
/// (the zero derivation is `alpha = beta = []`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ThinDerivation {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl ThinDerivation {
    pub fn new(alpha: Vec<Rational>, beta: Vec<Rational>) -> Self {
        ThinDerivation { alpha, beta }
    }

    pub fn zero() -> Self {
        ThinDerivation::default()
    }

    pub fn alpha_1(&self) -> Rational {
        self.alpha.first().cloned().unwrap_or_else(Rational::zero)
    }

    /// Drops trailing zeros from both vectors (the canonical form used when
    /// comparing recovered parameters).
    pub fn trimmed(&self) -> ThinDerivation {
        ThinDerivation { alpha: trim_zeros(&self.alpha), beta: trim_zeros(&self.beta) }
    }

    fn apply_generator(&self, j: i64) -> Element {
        let mut out = Element::zero(AlgebraId::Thin);
        if j == 1 {
            for (i, a) in self.alpha.iter().enumerate() {
                let sym = BasisSymbol::e(i as i64 + 1);
                out = out.add(&Element::term(a.clone(), sym)).unwrap();
            }
        } else {
            out = Element::term(self.alpha_1() * rat(j - 2), BasisSymbol::e(j));
            for (i, b) in self.beta.iter().enumerate() {
                let sym = BasisSymbol::e(i as i64 + 2 + j - 2);
                out = out.add(&Element::term(b.clone(), sym)).unwrap();
            }
        }
        out
    }
}

pub fn trim_zeros(v: &[Rational]) -> Vec<Rational> {
    let mut out = v.to_vec();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

impl ElementMap for ThinDerivation {
    fn algebra(&self) -> AlgebraId {
        AlgebraId::Thin
    }

    fn apply(&self, x: &Element) -> Result<Element, Error> {
        if x.algebra() != AlgebraId::Thin {
            return Err(Error::AlgebraMismatch { expected: AlgebraId::Thin, found: x.algebra() });
        }
        let mut out = Element::zero(AlgebraId::Thin);
        for (sym, coeff) in x.terms() {
            out = out.add(&self.apply_generator(sym.index()).scale(coeff)).unwrap();
        }
        Ok(out)
    }
}

/// A derivation candidate known only on a finite window of generators:
/// the image of every core generator (W22: `|i| ≤ window`, both families;
/// thin: `1 ≤ i ≤ window`). Applying it to anything supported outside the
/// core range is a [`Error::WindowOverflow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericDerivation {
    pub algebra: AlgebraId,
    pub window: i64,
    pub images: BTreeMap<BasisSymbol, Element>,
}

impl GenericDerivation {
    pub fn image(&self, sym: BasisSymbol) -> Option<&Element> {
        self.images.get(&sym)
    }
}

impl ElementMap for GenericDerivation {
    fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    fn apply(&self, x: &Element) -> Result<Element, Error> {
        if x.algebra() != self.algebra {
            return Err(Error::AlgebraMismatch { expected: self.algebra, found: x.algebra() });
        }
        let mut out = Element::zero(self.algebra);
        for (sym, coeff) in x.terms() {
            let image = self
                .images
                .get(&sym)
                .ok_or(Error::WindowOverflow { symbol: sym, window: self.window })?;
            out = out.add(&image.scale(coeff)).unwrap();
        }
        Ok(out)
    }
}

/// One probe of a Leibniz check: the exact residual
/// `d([x,y]) - [d(x),y] - [x,d(y)]`.
#[derive(Debug, Clone)]
pub struct LeibnizProbe {
    pub x: Element,
    pub y: Element,
    pub residual: Element,
}

#[derive(Debug, Clone)]
pub struct LeibnizReport {
    pub probes: Vec<LeibnizProbe>,
}

impl LeibnizReport {
    pub fn pass(&self) -> bool {
        self.probes.iter().all(|p| p.residual.is_zero())
    }

    pub fn violations(&self) -> impl Iterator<Item = &LeibnizProbe> {
        self.probes.iter().filter(|p| !p.residual.is_zero())
    }
}

/// Evaluates the Leibniz residual of `map` on every probe pair. For
/// windowed maps a probe whose bracket or support escapes the window is a
/// [`Error::WindowOverflow`] (unverifiable), not a failure.
pub fn leibniz_check<M: ElementMap>(
    map: &M,
    probe_pairs: &[(Element, Element)],
) -> Result<LeibnizReport, Error> {
    let mut probes = Vec::with_capacity(probe_pairs.len());
    for (x, y) in probe_pairs {
        let bracket = x.bracket(y)?;
        let lhs = map.apply(&bracket)?;
        let rhs = map.apply(x)?.bracket(y)?.add(&x.bracket(&map.apply(y)?)?)?;
        probes.push(LeibnizProbe { x: x.clone(), y: y.clone(), residual: lhs.sub(&rhs)? });
    }
    Ok(LeibnizReport { probes })
}

/// Core generators of the window: the symbols whose images are unknowns.
pub fn core_generators(algebra: AlgebraId, window: i64) -> Vec<BasisSymbol> {
    match algebra {
        AlgebraId::W22 => {
            let mut v: Vec<BasisSymbol> = (-window..=window).map(BasisSymbol::L).collect();
            v.extend((-window..=window).map(BasisSymbol::I));
            v
        }
        AlgebraId::Thin => (1..=window).map(BasisSymbol::e).collect(),
    }
}

/// Symbols the images may be supported on: twice the core range.
pub fn span_symbols(algebra: AlgebraId, window: i64) -> Vec<BasisSymbol> {
    match algebra {
        AlgebraId::W22 => {
            let mut v: Vec<BasisSymbol> = (-2 * window..=2 * window).map(BasisSymbol::L).collect();
            v.extend((-2 * window..=2 * window).map(BasisSymbol::I));
            v
        }
        AlgebraId::Thin => (1..=2 * window).map(BasisSymbol::e).collect(),
    }
}

/// Interior generators: the subwindow on which inner/outer classification
/// is performed (all dropped Leibniz constraints involve boundary
/// generators only).
pub fn interior_generators(algebra: AlgebraId, window: i64) -> Vec<BasisSymbol> {
    let c = (window + 1) / 2;
    match algebra {
        AlgebraId::W22 => {
            let mut v: Vec<BasisSymbol> = (-c..=c).map(BasisSymbol::L).collect();
            v.extend((-c..=c).map(BasisSymbol::I));
            v
        }
        AlgebraId::Thin => (1..=c + 1).map(BasisSymbol::e).collect(),
    }
}

/// The Leibniz constraint system for a window: unknowns are the span
/// coordinates of every core generator's image, rows are the coordinates of
/// `d([g,h]) = [d(g),h] + [g,d(h)]` for every core generator pair whose
/// bracket stays inside the core range. Coordinates outside the span (where
/// the truncated image is pinned to zero) are imposed too.
pub fn leibniz_system(algebra: AlgebraId, window: i64) -> LinearSystem {
    let gens = core_generators(algebra, window);
    let span = span_symbols(algebra, window);
    let gen_index: BTreeMap<BasisSymbol, usize> =
        gens.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let var = |g: usize, s: usize| g * span.len() + s;

    let labels: Vec<String> = gens
        .iter()
        .flat_map(|g| span.iter().map(move |s| format!("d({g})[{s}]")))
        .collect();
    let mut sys = LinearSystem::with_labels(labels);

    for (ai, ga) in gens.iter().enumerate() {
        for (bi, gb) in gens.iter().enumerate().skip(ai + 1) {
            let bracket = Element::basis(*ga).bracket(&Element::basis(*gb)).unwrap();
            if !bracket.support().all(|s| gen_index.contains_key(&s)) {
                continue;
            }
            // coordinate symbol -> (var -> coefficient)
            let mut rows: BTreeMap<BasisSymbol, BTreeMap<usize, Rational>> = BTreeMap::new();
            let mut touch = |u: BasisSymbol, v: usize, c: Rational| {
                let entry = rows.entry(u).or_default().entry(v).or_insert_with(Rational::zero);
                *entry += c;
            };
            // RHS: [d(ga), gb] + [ga, d(gb)]
            for (si, s) in span.iter().enumerate() {
                let t = Element::basis(*s).bracket(&Element::basis(*gb)).unwrap();
                for (u, c) in t.terms() {
                    touch(u, var(ai, si), c.clone());
                }
                let t = Element::basis(*ga).bracket(&Element::basis(*s)).unwrap();
                for (u, c) in t.terms() {
                    touch(u, var(bi, si), c.clone());
                }
            }
            // LHS: d([ga, gb]), subtracted
            for (k, ck) in bracket.terms() {
                let gi = gen_index[&k];
                for (si, s) in span.iter().enumerate() {
                    touch(*s, var(gi, si), -ck.clone());
                }
            }
            for (_, coeffs) in rows {
                if coeffs.values().any(|c| !c.is_zero()) {
                    sys.add_row(coeffs, Rational::zero());
                }
            }
        }
    }
    sys
}

/// The windowed derivation space with its inner/outer classification.
#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub algebra: AlgebraId,
    pub window: i64,
    /// Nullspace basis of the windowed Leibniz system.
    pub basis: Vec<GenericDerivation>,
    /// Dimension of the interior restriction of the full nullspace.
    pub restricted_dim: usize,
    /// Dimension of the interior restriction of `span{ad(g) : g core}`.
    pub inner_dim: usize,
    /// `restricted_dim - inner_dim`: what remains beyond inner derivations.
    pub outer_dim: usize,
    /// W22 only: whether the outer direction is spanned by `D`, i.e. `D`
    /// restricts into the nullspace span but not into the inner span.
    pub outer_matches_d: Option<bool>,
}

/// Interior restriction of a map given by generator images: the
/// concatenated span coordinates of the image of every interior generator.
pub fn restrict_images(
    images: &BTreeMap<BasisSymbol, Element>,
    interior: &[BasisSymbol],
    span: &[BasisSymbol],
) -> Vec<Rational> {
    let mut v = Vec::with_capacity(interior.len() * span.len());
    for g in interior {
        let image = images.get(g);
        for s in span {
            v.push(image.map(|e| e.coeff(*s)).unwrap_or_else(Rational::zero));
        }
    }
    v
}

/// Images of `ad(a)` on the given generators.
pub fn ad_images(a: &Element, gens: &[BasisSymbol]) -> BTreeMap<BasisSymbol, Element> {
    gens.iter().map(|g| (*g, a.bracket(&Element::basis(*g)).unwrap())).collect()
}

fn rank_of_vectors(vectors: &[Vec<Rational>], len: usize) -> usize {
    let mut sys = LinearSystem::new(len);
    for v in vectors {
        sys.add_row(v.iter().cloned().enumerate(), Rational::zero());
    }
    linalg::rank(&sys)
}

/// Computes the full derivation space on the window: solves the Leibniz
/// system, then measures on the interior subwindow how much of the
/// nullspace is spanned by inner derivations `ad(g)` of core generators.
/// For W(2,2) the remainder is checked against the outer derivation `D`.
pub fn solve_derivation_space(algebra: AlgebraId, window: i64) -> DerivationSpace {
    assert!(window >= 3, "window must be >= 3");
    let gens = core_generators(algebra, window);
    let span = span_symbols(algebra, window);
    let interior = interior_generators(algebra, window);

    let sys = leibniz_system(algebra, window);
    let result = linalg::solve(&sys);

    let basis: Vec<GenericDerivation> = result
        .nullspace
        .iter()
        .map(|v| {
            let images = gens
                .iter()
                .enumerate()
                .map(|(gi, g)| {
                    let terms = span
                        .iter()
                        .enumerate()
                        .map(|(si, s)| (*s, v[gi * span.len() + si].clone()));
                    (*g, Element::from_terms(algebra, terms).unwrap())
                })
                .collect();
            GenericDerivation { algebra, window, images }
        })
        .collect();

    let vec_len = interior.len() * span.len();
    let restricted: Vec<Vec<Rational>> =
        basis.iter().map(|d| restrict_images(&d.images, &interior, &span)).collect();
    let inner: Vec<Vec<Rational>> = gens
        .iter()
        .map(|g| restrict_images(&ad_images(&Element::basis(*g), &interior), &interior, &span))
        .collect();

    let restricted_dim = rank_of_vectors(&restricted, vec_len);
    let inner_dim = rank_of_vectors(&inner, vec_len);
    let outer_dim = restricted_dim - inner_dim;

    let outer_matches_d = (algebra == AlgebraId::W22).then(|| {
        let d_images: BTreeMap<BasisSymbol, Element> = interior
            .iter()
            .map(|g| (*g, outer_d(&Element::basis(*g)).unwrap()))
            .collect();
        let d_vec = restrict_images(&d_images, &interior, &span);
        let mut with_null = restricted.clone();
        with_null.push(d_vec.clone());
        let mut with_inner = inner.clone();
        with_inner.push(d_vec);
        rank_of_vectors(&with_null, vec_len) == restricted_dim
            && rank_of_vectors(&with_inner, vec_len) == inner_dim + 1
    });

    DerivationSpace {
        algebra,
        window,
        basis,
        restricted_dim,
        inner_dim,
        outer_dim,
        outer_matches_d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn l(m: i64) -> Element {
        Element::basis(BasisSymbol::L(m))
    }
    fn i(m: i64) -> Element {
        Element::basis(BasisSymbol::I(m))
    }
    fn e(n: i64) -> Element {
        Element::basis(BasisSymbol::e(n))
    }

    #[test]
    fn outer_d_values() {
        assert!(outer_d(&l(3)).unwrap().is_zero());
        assert_eq!(outer_d(&i(3)).unwrap(), i(3));
        let x = l(0).scale(&rat(2)).sub(&i(-2).scale(&rat(5))).unwrap();
        assert_eq!(outer_d(&x).unwrap(), i(-2).scale(&rat(-5)));
        assert!(outer_d(&e(1)).is_err());
    }

    #[test]
    fn apply_w22_examples() {
        let ad_l0 = W22Derivation::inner(l(0));
        assert_eq!(ad_l0.apply(&l(5)).unwrap(), l(5).scale(&rat(-5)));

        // ad(L_1) + 2D applied to I_0: [L_1, I_0] + 2 I_0 = I_1 + 2 I_0
        let d = W22Derivation::new(l(1), rat(2));
        assert_eq!(d.apply(&i(0)).unwrap(), i(1).add(&i(0).scale(&rat(2))).unwrap());

        assert!(W22Derivation::zero().apply(&l(7).add(&i(-3)).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn apply_thin_examples() {
        // alpha = (1): d(e_j) = (j-2) e_j
        let d = ThinDerivation::new(vec![rat(1)], vec![]);
        assert_eq!(d.apply(&e(5)).unwrap(), e(5).scale(&rat(3)));

        // alpha = (0,-1,1), beta = (2): d(e_1 + e_2) = e_2 + e_3
        let d = ThinDerivation::new(vec![rat(0), rat(-1), rat(1)], vec![rat(2)]);
        let x = e(1).add(&e(2)).unwrap();
        assert_eq!(d.apply(&x).unwrap(), e(2).add(&e(3)).unwrap());

        // alpha = (0), beta = (0, 1) acts as ad(e_1) on every e_j, j >= 2
        let d = ThinDerivation::new(vec![rat(0)], vec![rat(0), rat(1)]);
        for j in 2..=12 {
            assert_eq!(d.apply(&e(j)).unwrap(), e(1).bracket(&e(j)).unwrap());
        }
        assert!(d.apply(&e(1)).unwrap().is_zero());
    }

    #[test]
    fn inner_thin_derivations_have_closed_form() {
        // ad(e_k) for k >= 2 is alpha = -unit_{k+1}, beta = ().
        for k in 2..=8 {
            let mut alpha = vec![rat(0); k as usize + 1];
            alpha[k as usize] = rat(-1);
            let d = ThinDerivation::new(alpha, vec![]);
            assert_eq!(d.apply(&e(1)).unwrap(), e(k).bracket(&e(1)).unwrap());
            for j in 2..=10 {
                assert_eq!(d.apply(&e(j)).unwrap(), e(k).bracket(&e(j)).unwrap());
            }
        }
    }

    fn w22_probe_pairs(range: i64) -> Vec<(Element, Element)> {
        let mut gens = Vec::new();
        for m in -range..=range {
            gens.push(l(m));
            gens.push(i(m));
        }
        let mut pairs = Vec::new();
        for a in &gens {
            for b in &gens {
                pairs.push((a.clone(), b.clone()));
            }
        }
        pairs
    }

    #[test]
    fn leibniz_holds_for_w22_derivations() {
        let pairs = w22_probe_pairs(4);
        let report = leibniz_check(&W22Derivation::inner(l(2)), &pairs).unwrap();
        assert!(report.pass());
        // D itself is a derivation.
        struct OuterD;
        impl ElementMap for OuterD {
            fn algebra(&self) -> AlgebraId {
                AlgebraId::W22
            }
            fn apply(&self, x: &Element) -> Result<Element, Error> {
                outer_d(x)
            }
        }
        assert!(leibniz_check(&OuterD, &pairs).unwrap().pass());
    }

    #[test]
    fn leibniz_detects_fake_outer_map() {
        // D'(L_m) = L_m, D'(I_m) = I_m is not a derivation.
        struct Identity;
        impl ElementMap for Identity {
            fn algebra(&self) -> AlgebraId {
                AlgebraId::W22
            }
            fn apply(&self, x: &Element) -> Result<Element, Error> {
                Ok(x.clone())
            }
        }
        let report = leibniz_check(&Identity, &[(l(1), l(2))]).unwrap();
        assert!(!report.pass());
        // D'([L1,L2]) = -L3 while [D'L1,L2] + [L1,D'L2] = -2L3.
        let viol: Vec<_> = report.violations().collect();
        assert_eq!(viol.len(), 1);
        assert_eq!(viol[0].residual, l(3));
    }

    #[test]
    fn generic_derivation_window_overflow() {
        let d = GenericDerivation {
            algebra: AlgebraId::Thin,
            window: 3,
            images: (1..=3).map(|n| (BasisSymbol::e(n), Element::zero(AlgebraId::Thin))).collect(),
        };
        assert!(d.apply(&e(2)).unwrap().is_zero());
        assert_eq!(
            d.apply(&e(5)),
            Err(Error::WindowOverflow { symbol: BasisSymbol::e(5), window: 3 })
        );
        // A probe pair whose bracket escapes the window is unverifiable.
        let err = leibniz_check(&d, &[(e(1), e(3))]).unwrap_err();
        assert!(matches!(err, Error::WindowOverflow { .. }));
    }

    #[test]
    fn w22_space_contains_inner_and_d() {
        let space = solve_derivation_space(AlgebraId::W22, 4);
        assert_eq!(space.outer_dim, 1);
        assert_eq!(space.outer_matches_d, Some(true));
        // Every ad(L_k), ad(I_k) for |k| <= 2, restricted to the interior,
        // lies in the restricted nullspace span.
        let interior = interior_generators(AlgebraId::W22, 4);
        let span = span_symbols(AlgebraId::W22, 4);
        let restricted: Vec<Vec<Rational>> = space
            .basis
            .iter()
            .map(|d| restrict_images(&d.images, &interior, &span))
            .collect();
        let base_rank = rank_of_vectors(&restricted, interior.len() * span.len());
        assert_eq!(base_rank, space.restricted_dim);
        for k in -2..=2 {
            for g in [l(k), i(k)] {
                let vec = restrict_images(&ad_images(&g, &interior), &interior, &span);
                let mut with = restricted.clone();
                with.push(vec);
                assert_eq!(
                    rank_of_vectors(&with, interior.len() * span.len()),
                    base_rank,
                    "ad({g}) escapes the windowed derivation space"
                );
            }
        }
    }

    #[test]
    fn thin_space_has_shift_form() {
        let space = solve_derivation_space(AlgebraId::Thin, 6);
        assert!(!space.basis.is_empty());
        let interior_max = (6 + 1) / 2 + 1;
        for d in &space.basis {
            let alpha_1 = d.image(BasisSymbol::e(1)).unwrap().coeff(BasisSymbol::e(1));
            // For interior j, coefficient of e_{i+j-2} in image(e_j), after
            // subtracting the diagonal (j-2) alpha_1, must be j-independent.
            for i in 2..=(2 * 6 + 2 - interior_max) {
                let mut values = Vec::new();
                for j in 2..=interior_max {
                    let mut c = d.image(BasisSymbol::e(j)).unwrap().coeff(BasisSymbol::e(i + j - 2));
                    if i == 2 {
                        c -= rat(j - 2) * &alpha_1;
                    }
                    values.push(c);
                }
                assert!(values.windows(2).all(|w| w[0] == w[1]), "shift form fails at i={i}");
            }
        }
    }

    #[test]
    fn monotone_consistency_thin() {
        // Interior restrictions of the N+1 space contain the N space
        // (same interior for N = 6, 7).
        let small = solve_derivation_space(AlgebraId::Thin, 6);
        let large = solve_derivation_space(AlgebraId::Thin, 7);
        // Compare on the smaller window's interior.
        let interior = interior_generators(AlgebraId::Thin, 6);
        let span = span_symbols(AlgebraId::Thin, 7);
        let vec_len = interior.len() * span.len();
        let large_restricted: Vec<Vec<Rational>> = large
            .basis
            .iter()
            .map(|d| restrict_images(&d.images, &interior, &span))
            .collect();
        let base = rank_of_vectors(&large_restricted, vec_len);
        for d in &small.basis {
            let v = restrict_images(&d.images, &interior, &span);
            let mut with = large_restricted.clone();
            with.push(v);
            assert_eq!(rank_of_vectors(&with, vec_len), base);
        }
    }

    fn coeff() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=4).prop_map(|(n, d)| frac(n, d))
    }

    fn thin_derivation() -> impl Strategy<Value = ThinDerivation> {
        (
            proptest::collection::vec(coeff(), 0..5),
            proptest::collection::vec(coeff(), 0..4),
        )
            .prop_map(|(alpha, beta)| ThinDerivation::new(alpha, beta))
    }

    fn w22_derivation() -> impl Strategy<Value = W22Derivation> {
        (proptest::collection::vec(((any::<bool>(), -4i64..=4), coeff()), 0..5), coeff()).prop_map(
            |(terms, outer)| {
                let inner = Element::from_terms(
                    AlgebraId::W22,
                    terms.into_iter().map(|((is_l, m), c)| {
                        (if is_l { BasisSymbol::L(m) } else { BasisSymbol::I(m) }, c)
                    }),
                )
                .unwrap();
                W22Derivation::new(inner, outer)
            },
        )
    }

    fn thin_element() -> impl Strategy<Value = Element> {
        proptest::collection::vec((1i64..=50, coeff()), 0..5).prop_map(|ts| {
            Element::from_terms(AlgebraId::Thin, ts.into_iter().map(|(n, c)| (BasisSymbol::e(n), c)))
                .unwrap()
        })
    }

    fn w22_element() -> impl Strategy<Value = Element> {
        proptest::collection::vec(((any::<bool>(), -6i64..=6), coeff()), 0..5).prop_map(|ts| {
            Element::from_terms(
                AlgebraId::W22,
                ts.into_iter().map(|((is_l, m), c)| {
                    (if is_l { BasisSymbol::L(m) } else { BasisSymbol::I(m) }, c)
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn w22_derivations_satisfy_leibniz(
            d in w22_derivation(),
            x in w22_element(),
            y in w22_element(),
        ) {
            let report = leibniz_check(&d, &[(x, y)]).unwrap();
            prop_assert!(report.pass());
        }

        #[test]
        fn thin_derivations_satisfy_leibniz(
            d in thin_derivation(),
            x in thin_element(),
            y in thin_element(),
        ) {
            let report = leibniz_check(&d, &[(x, y)]).unwrap();
            prop_assert!(report.pass());
        }
    }
}
