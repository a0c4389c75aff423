//! Test-side helpers kept independent of the library's solver internals:
//! a dense Gaussian eliminator used as a rank oracle, and seeded element
//! samplers.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use w22local::algebra::{AlgebraId, BasisSymbol, Element};
use w22local::rational::{frac, Rational};

/// Row rank by textbook dense Gaussian elimination (partial pivoting on the
/// first nonzero entry), sharing no code with the library's sparse solver.
pub fn dense_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / &pivot;
            for c in col..width {
                let delta = &factor * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.gen_range(-8..=8), rng.gen_range(1..=5))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn thin_element(rng: &mut ChaCha8Rng, max_index: i64, max_terms: usize) -> Element {
    let n = rng.gen_range(0..=max_terms);
    Element::from_terms(
        AlgebraId::Thin,
        (0..n).map(|_| (BasisSymbol::e(rng.gen_range(1..=max_index)), rational(rng))),
    )
    .unwrap()
}

/// Thin element in general position: nonzero `e_1` coefficient. Elements
/// with vanishing `e_1` coefficient are the degenerate stratum on which an
/// Ω map with λ ≠ 0 is not 2-local.
pub fn generic_thin_element(rng: &mut ChaCha8Rng, max_index: i64, max_terms: usize) -> Element {
    let rest = thin_element(rng, max_index, max_terms);
    let adjust = nonzero_rational(rng) - rest.coeff(BasisSymbol::e(1));
    rest.add(&Element::term(adjust, BasisSymbol::e(1))).unwrap()
}

pub fn w22_element(rng: &mut ChaCha8Rng, max_index: i64, max_terms: usize) -> Element {
    let n = rng.gen_range(0..=max_terms);
    Element::from_terms(
        AlgebraId::W22,
        (0..n).map(|_| {
            let m = rng.gen_range(-max_index..=max_index);
            let sym = if rng.gen_bool(0.5) { BasisSymbol::L(m) } else { BasisSymbol::I(m) };
            (sym, rational(rng))
        }),
    )
    .unwrap()
}
