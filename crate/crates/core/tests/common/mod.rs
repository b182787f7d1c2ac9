//! Deterministic random inputs for the integration suites: states,
//! unitaries, and complete projector families from a seeded generator, so
//! every run exercises identical cases.

#![allow(dead_code)] // each integration test binary uses a subset

use num_complex::Complex64;
use preclusion::ndarray::Array2;
use preclusion::{Projector, StateVector, UnitaryMatrix};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// A normalized random state of the given dimension.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            let amps = amps.into_iter().map(|a| a / norm).collect();
            return StateVector::new(amps).expect("normalized by construction");
        }
    }
}

/// Orthonormalize the columns of `mat` in place (modified Gram-Schmidt with
/// one re-orthogonalization pass). Panics if the columns are numerically
/// dependent, which has negligible probability for random input.
fn orthonormalize_columns(mat: &mut Array2<Complex64>) {
    let dim = mat.nrows();
    for j in 0..dim {
        // Two projection sweeps: the second removes the roundoff the first
        // leaves behind, which is what pushes U*U - I below 1e-12.
        for _ in 0..2 {
            for i in 0..j {
                let mut overlap = Complex64::new(0.0, 0.0);
                for r in 0..dim {
                    overlap += mat[(r, i)].conj() * mat[(r, j)];
                }
                for r in 0..dim {
                    let correction = overlap * mat[(r, i)];
                    mat[(r, j)] -= correction;
                }
            }
        }
        let norm = (0..dim).map(|r| mat[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-8, "random matrix had dependent columns");
        for r in 0..dim {
            mat[(r, j)] /= norm;
        }
    }
}

/// A Haar-ish random unitary: random complex entries, orthonormalized.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> UnitaryMatrix {
    let mut mat = Array2::from_shape_fn((dim, dim), |_| random_complex(rng));
    orthonormalize_columns(&mut mat);
    UnitaryMatrix::new(mat).expect("orthonormalized columns form a unitary")
}

/// A random orthogonal projector of rank 1..dim (from a random orthonormal
/// set).
pub fn random_projector(rng: &mut ChaCha8Rng, dim: usize) -> Projector {
    let rank = rng.random_range(1..=dim);
    let unitary = random_unitary(rng, dim);
    let columns = basis_columns(&unitary, 0, rank);
    Projector::from_orthonormal(&columns).expect("orthonormal columns form a projector")
}

/// A complete orthogonal projector family: the columns of one random
/// unitary, partitioned into contiguous groups. The members are mutually
/// orthogonal and sum to the identity.
pub fn random_projector_family(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Projector> {
    let unitary = random_unitary(rng, dim);
    // Random composition of `dim` into nonempty parts.
    let mut cuts: Vec<usize> = vec![0, dim];
    for boundary in 1..dim {
        if rng.random_bool(0.5) {
            cuts.push(boundary);
        }
    }
    cuts.sort_unstable();
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let columns = basis_columns(&unitary, w[0], w[1] - w[0]);
            Projector::from_orthonormal(&columns).expect("orthonormal columns form a projector")
        })
        .collect()
}

/// Extract `count` consecutive columns of a unitary as state vectors.
fn basis_columns(unitary: &UnitaryMatrix, start: usize, count: usize) -> Vec<StateVector> {
    let mat = unitary.matrix();
    let dim = mat.nrows();
    (start..start + count)
        .map(|j| {
            let amps: Vec<Complex64> = (0..dim).map(|r| mat[(r, j)]).collect();
            StateVector::new(amps).expect("unitary columns are normalized")
        })
        .collect()
}
