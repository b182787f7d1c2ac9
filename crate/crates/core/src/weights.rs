//! Finite-dimensional states, projectors, unitaries, and branch weights.
//!
//! The central quantity is the weight of an event: the expectation value of a
//! projector in a normalized state, `<psi|P|psi>`. It is always a real number
//! in [0, 1], and for a complete family of orthogonal projectors the weights
//! sum to one. Both the Schroedinger route (evolve the state, then project)
//! and the Heisenberg route (conjugate the projector by the evolution, state
//! fixed) are provided; they agree to numerical precision.
//!
//! All invariants are validated eagerly at construction time against a fixed
//! tolerance, so the arithmetic functions can assume well-formed inputs.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for every construction-time invariant check
/// (normalization, hermiticity, idempotence, unitarity, realness).
pub const TOLERANCE: f64 = 1e-12;

/// A normalized state vector in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Array1<Complex64>,
}

impl StateVector {
    /// Build a state from amplitudes, checking normalization within 1e-12.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let deviation = (norm_sq - 1.0).abs();
        if deviation > TOLERANCE {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amps: Array1::from(amps) })
    }

    /// The i-th computational basis state of a dim-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if index >= dim {
            return Err(Error::DimensionMismatch { left: index, right: dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps: Array1::from(amps) })
    }

    /// Internal constructor for states produced by checked unitaries, whose
    /// norm can drift by at most dim * 1e-12 from the unitarity tolerance.
    pub(crate) fn from_evolution(amps: Array1<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amps.as_slice().expect("amplitudes are contiguous")
    }

    pub(crate) fn array(&self) -> &Array1<Complex64> {
        &self.amps
    }
}

/// Max absolute entry of M - M_dagger (hermiticity defect).
fn hermiticity_defect(mat: &Array2<Complex64>) -> f64 {
    let dim = mat.nrows();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            worst = worst.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max absolute entry of M*M - M (idempotence defect).
fn idempotence_defect(mat: &Array2<Complex64>) -> f64 {
    let squared = mat.dot(mat);
    let mut worst = 0.0f64;
    for (a, b) in squared.iter().zip(mat.iter()) {
        worst = worst.max((a - b).norm());
    }
    worst
}

/// An orthogonal projector: a Hermitian, idempotent matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    mat: Array2<Complex64>,
}

impl Projector {
    /// Validate hermiticity and idempotence within 1e-12 and wrap the matrix.
    pub fn new(mat: Array2<Complex64>) -> Result<Self> {
        if mat.nrows() == 0 {
            return Err(Error::ZeroDimension);
        }
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch { left: mat.nrows(), right: mat.ncols() });
        }
        let h = hermiticity_defect(&mat);
        if h > TOLERANCE {
            return Err(Error::NotAProjector {
                reason: format!("not hermitian, max |M - M*| entry = {h:.3e}"),
            });
        }
        let q = idempotence_defect(&mat);
        if q > TOLERANCE {
            return Err(Error::NotAProjector {
                reason: format!("not idempotent, max |M*M - M| entry = {q:.3e}"),
            });
        }
        Ok(Self { mat })
    }

    /// Rank-1 projector |i><i| onto a basis state.
    pub fn onto_basis(dim: usize, index: usize) -> Result<Self> {
        let e = StateVector::basis(dim, index)?;
        Self::from_orthonormal(&[e])
    }

    /// Projector onto the span of an orthonormal set, sum of |v><v|.
    ///
    /// The result is validated like any other projector, so a set that is not
    /// actually orthonormal is rejected (it fails idempotence).
    pub fn from_orthonormal(states: &[StateVector]) -> Result<Self> {
        let dim = match states.first() {
            Some(s) => s.dim(),
            None => return Err(Error::ZeroDimension),
        };
        let mut mat = Array2::zeros((dim, dim));
        for s in states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { left: s.dim(), right: dim });
            }
            for i in 0..dim {
                for j in 0..dim {
                    mat[(i, j)] += s.amps[i] * s.amps[j].conj();
                }
            }
        }
        Self::new(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }
}

/// A unitary evolution operator, U_dagger * U = I within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    mat: Array2<Complex64>,
}

impl UnitaryMatrix {
    pub fn new(mat: Array2<Complex64>) -> Result<Self> {
        if mat.nrows() == 0 {
            return Err(Error::ZeroDimension);
        }
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch { left: mat.nrows(), right: mat.ncols() });
        }
        let dim = mat.nrows();
        let gram = dagger(&mat).dot(&mat);
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((gram[(i, j)] - expected).norm());
            }
        }
        if worst > TOLERANCE {
            return Err(Error::NotUnitary { deviation: worst });
        }
        Ok(Self { mat })
    }

    /// The identity evolution; the conventional choice at the initial time.
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { mat: Array2::eye(dim) })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    /// Schroedinger-picture action on a state: |psi> -> U|psi>.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: state.dim() });
        }
        Ok(StateVector::from_evolution(self.mat.dot(state.array())))
    }
}

fn dagger(mat: &Array2<Complex64>) -> Array2<Complex64> {
    mat.t().mapv(|z| z.conj())
}

/// Real expectation value of a Hermitian matrix, with realness and range
/// checks shared by the two weight routes.
fn real_expectation(state: &StateVector, mat: &Array2<Complex64>) -> Result<f64> {
    let projected = mat.dot(state.array());
    let value: Complex64 = state
        .amps
        .iter()
        .zip(projected.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    if value.im.abs() > TOLERANCE {
        return Err(Error::NonRealWeight { imaginary: value.im });
    }
    let w = value.re;
    if !(-TOLERANCE..=1.0 + TOLERANCE).contains(&w) {
        return Err(Error::WeightOutOfRange { value: w });
    }
    // Only roundoff-level excursions reach this point; snap them into range.
    Ok(w.clamp(0.0, 1.0))
}

/// The weight of the event described by `event` in `state`: <psi|P|psi>.
pub fn weight(state: &StateVector, event: &Projector) -> Result<f64> {
    if state.dim() != event.dim() {
        return Err(Error::DimensionMismatch { left: state.dim(), right: event.dim() });
    }
    real_expectation(state, event.matrix())
}

/// The same weight computed in the Heisenberg picture: the projector is
/// conjugated by the evolution (P -> U_dagger P U) and evaluated in the
/// *initial* state. Agrees with `weight(U psi, P)` to numerical precision,
/// but deliberately takes the operator route so the two can be compared.
pub fn heisenberg_weight(
    initial: &StateVector,
    evolution: &UnitaryMatrix,
    event: &Projector,
) -> Result<f64> {
    if initial.dim() != evolution.dim() {
        return Err(Error::DimensionMismatch { left: initial.dim(), right: evolution.dim() });
    }
    if evolution.dim() != event.dim() {
        return Err(Error::DimensionMismatch { left: evolution.dim(), right: event.dim() });
    }
    let evolved_event = dagger(evolution.matrix())
        .dot(event.matrix())
        .dot(evolution.matrix());
    real_expectation(initial, &evolved_event)
}

/// Whether `state` already lies in the event's subspace: P|psi> = |psi>
/// within 1e-12, entry by entry.
pub fn is_post_measurement_eigenstate(state: &StateVector, event: &Projector) -> Result<bool> {
    if state.dim() != event.dim() {
        return Err(Error::DimensionMismatch { left: state.dim(), right: event.dim() });
    }
    let projected = event.matrix().dot(state.array());
    let worst = projected
        .iter()
        .zip(state.amps.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    Ok(worst <= TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent second route for <psi|M|psi>: plain nested loops over
    /// Vec-of-Vec storage, no shared matrix code.
    fn naive_expectation(amps: &[Complex64], mat: &[Vec<Complex64>]) -> Complex64 {
        let dim = amps.len();
        let mut total = c(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                total += amps[i].conj() * mat[i][j] * amps[j];
            }
        }
        total
    }

    fn rows(mat: &Array2<Complex64>) -> Vec<Vec<Complex64>> {
        (0..mat.nrows())
            .map(|i| (0..mat.ncols()).map(|j| mat[(i, j)]).collect())
            .collect()
    }

    #[test]
    fn eigenstate_has_weight_one() {
        let psi = StateVector::basis(3, 1).unwrap();
        let p = Projector::onto_basis(3, 1).unwrap();
        assert_eq!(weight(&psi, &p).unwrap(), 1.0);
        assert!(is_post_measurement_eigenstate(&psi, &p).unwrap());
    }

    #[test]
    fn orthogonal_state_has_weight_zero() {
        let psi = StateVector::basis(3, 0).unwrap();
        let p = Projector::onto_basis(3, 2).unwrap();
        assert_eq!(weight(&psi, &p).unwrap(), 0.0);
        assert!(!is_post_measurement_eigenstate(&psi, &p).unwrap());
    }

    #[test]
    fn qubit_weight_is_squared_amplitude() {
        // |c1|^2 = 0.3: the weight of the outcome-1 projector.
        let psi = StateVector::new(vec![c(0.3f64.sqrt(), 0.0), c(0.7f64.sqrt(), 0.0)]).unwrap();
        let p = Projector::onto_basis(2, 0).unwrap();
        assert!((weight(&psi, &p).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn weight_matches_naive_oracle_on_rank_two_projector() {
        // dim 4 state with mixed phases; projector onto span{e1, e3}.
        let raw = [c(0.5, 0.1), c(-0.3, 0.4), c(0.2, -0.2), c(0.1, 0.0)];
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = raw.iter().map(|z| z / norm).collect();
        let psi = StateVector::new(amps.clone()).unwrap();
        let p = Projector::from_orthonormal(&[
            StateVector::basis(4, 1).unwrap(),
            StateVector::basis(4, 3).unwrap(),
        ])
        .unwrap();
        let expected = naive_expectation(&amps, &rows(p.matrix()));
        assert!(expected.im.abs() < 1e-15);
        assert!((weight(&psi, &p).unwrap() - expected.re).abs() < 1e-14);
    }

    #[test]
    fn heisenberg_route_matches_naive_oracle() {
        // 90-degree rotation in a 2-dim space sends e0 to e1.
        let u = UnitaryMatrix::new(ndarray::array![
            [c(0.0, 0.0), c(-1.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let psi = StateVector::basis(2, 0).unwrap();
        let p = Projector::onto_basis(2, 1).unwrap();
        // U e0 = e1, so the evolved weight of outcome 1 is exactly 1.
        assert!((heisenberg_weight(&psi, &u, &p).unwrap() - 1.0).abs() < 1e-15);
        // And the naive oracle on U_dagger P U agrees.
        let conj = u.matrix().t().mapv(|z| z.conj()).dot(p.matrix()).dot(u.matrix());
        let expected = naive_expectation(psi.amplitudes(), &rows(&conj));
        assert!((heisenberg_weight(&psi, &u, &p).unwrap() - expected.re).abs() < 1e-15);
    }

    #[test]
    fn identity_evolution_changes_nothing() {
        let psi = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let u = UnitaryMatrix::identity(2).unwrap();
        let p = Projector::onto_basis(2, 0).unwrap();
        let direct = weight(&psi, &p).unwrap();
        assert_eq!(heisenberg_weight(&psi, &u, &p).unwrap(), direct);
        assert_eq!(weight(&u.apply(&psi).unwrap(), &p).unwrap(), direct);
    }

    #[test]
    fn global_phase_leaves_weights_unchanged() {
        let phase = c(0.0, 1.3).exp();
        let amps = vec![c(0.6, 0.0), c(0.0, 0.8)];
        let rotated: Vec<Complex64> = amps.iter().map(|z| z * phase).collect();
        let psi = StateVector::new(amps).unwrap();
        let psi_rot = StateVector::new(rotated).unwrap();
        let p = Projector::onto_basis(2, 1).unwrap();
        let a = weight(&psi, &p).unwrap();
        let b = weight(&psi_rot, &p).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn eigenstate_detection_on_subspace() {
        // Any unit vector inside span{e1, e2} is a post-measurement state of
        // that subspace's projector.
        let p = Projector::from_orthonormal(&[
            StateVector::basis(3, 1).unwrap(),
            StateVector::basis(3, 2).unwrap(),
        ])
        .unwrap();
        let inside = StateVector::new(vec![c(0.0, 0.0), c(0.6, 0.0), c(0.8, 0.0)]).unwrap();
        let outside = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.0), c(0.8, 0.0)]).unwrap();
        assert!(is_post_measurement_eigenstate(&inside, &p).unwrap());
        assert!(!is_post_measurement_eigenstate(&outside, &p).unwrap());
    }

    #[test]
    fn rejects_denormalized_state() {
        let err = StateVector::new(vec![c(1.0, 0.0), c(0.1, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
    }

    #[test]
    fn rejects_non_idempotent_matrix() {
        // Hermitian but not idempotent: 2 * |0><0|.
        let mat = ndarray::array![[c(2.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        let err = Projector::new(mat).unwrap_err();
        match err {
            Error::NotAProjector { reason } => assert!(reason.contains("idempotent")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_non_hermitian_matrix() {
        let mat = ndarray::array![[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        let err = Projector::new(mat).unwrap_err();
        match err {
            Error::NotAProjector { reason } => assert!(reason.contains("hermitian")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_non_unitary_matrix() {
        let mat = ndarray::array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]];
        assert!(matches!(UnitaryMatrix::new(mat), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let psi = StateVector::basis(2, 0).unwrap();
        let p = Projector::onto_basis(3, 0).unwrap();
        assert!(matches!(weight(&psi, &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn complete_family_weights_sum_to_one() {
        let raw = [c(0.4, 0.3), c(-0.2, 0.5), c(0.1, -0.6)];
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi = StateVector::new(raw.iter().map(|z| z / norm).collect()).unwrap();
        let total: f64 = (0..3)
            .map(|i| weight(&psi, &Projector::onto_basis(3, i).unwrap()).unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
