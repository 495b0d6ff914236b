//! Distances and closeness measures between density operators.
//!
//! The operational route: measure both states in every basis of a complete
//! mutually unbiased set, take the squared Euclidean distance of the two
//! outcome-probability vectors per basis, and sum. The algebraic route:
//! the squared Hilbert-Schmidt norm of the difference. [`total_distance`]
//! computes both and reports their deviation — they agree for any valid
//! complete set, which is the point.
//!
//! Fidelity is carried alongside for comparison. On pure states the two
//! orderings coincide (`D = 2 − 2F`); on mixed states they do not, because
//! the distance also feels the purity of the test state. [`ordering_check`]
//! hunts for pairs where the two measures rank states differently.

use num_complex::Complex64;

use crate::bloch::{purity, DensityOperator};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mub::{MeasurementBasis, MubSet};

/// Two-sided dead zone for ordering comparisons: differences of fidelity or
/// distance inside it are ties, never violations.
pub const ORDERING_DEAD_ZONE: f64 = 1e-9;

/// Entries this far below zero are clamped; anything lower is an error.
const PROB_CLAMP: f64 = 1e-12;

/// Tolerance on the sum of a probability vector.
const PROB_SUM_TOL: f64 = 1e-9;

/// A length-d probability vector (exact Born probabilities or empirical
/// frequencies).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates and normalizes representation: entries in `[-1e−12, …)` are
    /// clamped to zero, the sum must be 1 within 1e−9.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let mut clamped = probs;
        for p in &mut clamped {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if *p < -PROB_CLAMP {
                return Err(Error::InvalidProbability { value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::ProbabilityNotNormalized { sum });
        }
        Ok(Self { probs: clamped })
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Outcome of [`total_distance`]: the per-basis distances, their sum, and the
/// squared Hilbert-Schmidt distance it should equal.
#[derive(Clone, Debug)]
pub struct DistanceReport {
    /// Basis label and single-measurement distance, in basis order.
    pub per_basis: Vec<(String, f64)>,
    /// Sum of the per-basis distances.
    pub total: f64,
    /// `‖ρ1 − ρ2‖²`.
    pub hs_distance_sq: f64,
    /// `|total − hs_distance_sq|`; reported, not enforced.
    pub deviation: f64,
}

/// Born probabilities of `rho` under one measurement basis.
pub fn born_probabilities(
    rho: &DensityOperator,
    basis: &MeasurementBasis,
) -> Result<ProbabilityVector> {
    if rho.dim() != basis.dim() {
        return Err(Error::ShapeMismatch {
            expected_rows: basis.dim(),
            expected_cols: basis.dim(),
            rows: rho.dim(),
            cols: rho.dim(),
        });
    }
    let d = rho.dim();
    let m = rho.matrix();
    let probs = basis
        .projectors()
        .iter()
        .map(|p| {
            // Tr(P ρ) = Σ_jk P_jk ρ_kj; real for Hermitian inputs
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..d {
                for k in 0..d {
                    acc += p[(j, k)] * m[(k, j)];
                }
            }
            acc.re
        })
        .collect();
    ProbabilityVector::new(probs)
}

/// Squared Euclidean distance `|p1 − p2|²` between two probability vectors;
/// bounded by 2.
pub fn single_distance(p1: &ProbabilityVector, p2: &ProbabilityVector) -> Result<f64> {
    if p1.dim() != p2.dim() {
        return Err(Error::ShapeMismatch {
            expected_rows: p1.dim(),
            expected_cols: 1,
            rows: p2.dim(),
            cols: 1,
        });
    }
    Ok(p1
        .probs()
        .iter()
        .zip(p2.probs())
        .map(|(a, b)| (a - b) * (a - b))
        .sum())
}

/// Squared Hilbert-Schmidt distance `‖ρ1 − ρ2‖²`.
pub fn hs_distance_sq(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::ShapeMismatch {
            expected_rows: rho1.dim(),
            expected_cols: rho1.dim(),
            rows: rho2.dim(),
            cols: rho2.dim(),
        });
    }
    linalg::hs_norm_sq(&(rho1.matrix() - rho2.matrix()))
}

/// Total operational distance: the sum of single distances over a complete
/// set of mutually unbiased measurements, reported next to `‖ρ1 − ρ2‖²`.
///
/// The caller is responsible for `m` being a verified set (see
/// [`crate::mub::verify_mub`]); for a valid set the deviation between the two
/// routes is pure floating-point noise regardless of which set was chosen.
pub fn total_distance(
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    m: &MubSet,
) -> Result<DistanceReport> {
    if rho1.dim() != m.dim() || rho2.dim() != m.dim() {
        return Err(Error::ShapeMismatch {
            expected_rows: m.dim(),
            expected_cols: m.dim(),
            rows: rho1.dim().max(rho2.dim()),
            cols: rho1.dim().min(rho2.dim()),
        });
    }
    let mut per_basis = Vec::with_capacity(m.bases().len());
    let mut total = 0.0;
    for basis in m.bases() {
        let p1 = born_probabilities(rho1, basis)?;
        let p2 = born_probabilities(rho2, basis)?;
        let d_alpha = single_distance(&p1, &p2)?;
        total += d_alpha;
        per_basis.push((basis.label().to_string(), d_alpha));
    }
    let hs = hs_distance_sq(rho1, rho2)?;
    Ok(DistanceReport {
        per_basis,
        total,
        hs_distance_sq: hs,
        deviation: (total - hs).abs(),
    })
}

/// Total information content `n · ‖ρ − 𝟙/d‖²`: the operational distance of a
/// state from the completely random one, up to the normalization `n`.
pub fn information_content(rho: &DensityOperator, n: f64) -> Result<f64> {
    if !n.is_finite() || n <= 0.0 {
        return Err(Error::NonPositiveNormalization { value: n });
    }
    let random = DensityOperator::maximally_mixed(rho.dim());
    Ok(n * hs_distance_sq(rho, &random)?)
}

/// Uhlmann fidelity `(Tr √(√ρ1 ρ2 √ρ1))²`, clamped to `[0, 1]`.
///
/// The middle square root is taken spectrally: eigenvalues of
/// `√ρ1 ρ2 √ρ1` are clamped to be nonnegative and their roots summed, which
/// is stabler than a nested PSD square root of a near-singular product.
pub fn fidelity(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::ShapeMismatch {
            expected_rows: rho1.dim(),
            expected_cols: rho1.dim(),
            rows: rho2.dim(),
            cols: rho2.dim(),
        });
    }
    let tol = linalg::DEFAULT_TOL;
    let s1 = linalg::psd_sqrt(rho1.matrix(), tol)?;
    let inner = s1.mul(rho2.matrix()).mul(&s1).hermitized();
    let eig = linalg::eigh(&inner, tol)?;
    // Eigenvalues at the roundoff floor would contribute √ε ≈ 1e−8 each to
    // the trace; zero them instead of square-rooting noise.
    let lmax = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let floor = lmax * inner.rows() as f64 * f64::EPSILON;
    let tr: f64 = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > floor { l.sqrt() } else { 0.0 })
        .sum();
    Ok((tr * tr).clamp(0.0, 1.0))
}

fn require_pure(sigma: &DensityOperator) -> Result<()> {
    let p = purity(sigma);
    if (p - 1.0).abs() > 1e-9 {
        return Err(Error::NotPure { purity: p });
    }
    Ok(())
}

/// Fidelity against a pure reference: `Tr(σ ρ) = ⟨σ|ρ|σ⟩`.
///
/// Agrees with [`fidelity`] whenever `σ` is pure, at a fraction of the cost.
pub fn fidelity_pure(sigma: &DensityOperator, rho: &DensityOperator) -> Result<f64> {
    require_pure(sigma)?;
    if sigma.dim() != rho.dim() {
        return Err(Error::ShapeMismatch {
            expected_rows: sigma.dim(),
            expected_cols: sigma.dim(),
            rows: rho.dim(),
            cols: rho.dim(),
        });
    }
    Ok(linalg::hs_inner(sigma.matrix(), rho.matrix())?.re)
}

/// Both sides of the identity `‖σ − ρ‖² = P(σ) + P(ρ) − 2 Tr(σρ)` for a pure
/// reference `σ`: returns `(lhs, rhs)`.
pub fn purity_fidelity_relation(
    sigma: &DensityOperator,
    rho: &DensityOperator,
) -> Result<(f64, f64)> {
    let f = fidelity_pure(sigma, rho)?;
    let lhs = hs_distance_sq(sigma, rho)?;
    let rhs = purity(sigma) + purity(rho) - 2.0 * f;
    Ok((lhs, rhs))
}

/// One pair of test states whose fidelity ordering and distance ordering
/// disagree.
#[derive(Clone, Debug)]
pub struct OrderingViolation {
    pub i: usize,
    pub j: usize,
    pub fidelity_i: f64,
    pub fidelity_j: f64,
    pub distance_i: f64,
    pub distance_j: f64,
}

/// Result of [`ordering_check`]: per-state fidelities and distances against
/// the reference, plus every pair on which the two measures disagree.
#[derive(Clone, Debug)]
pub struct OrderingReport {
    pub fidelities: Vec<f64>,
    pub distances: Vec<f64>,
    pub violations: Vec<OrderingViolation>,
}

impl OrderingReport {
    /// True iff the fidelity and the distance induce the same ordering on
    /// this test set (no violating pair).
    pub fn is_equivalent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For a pure reference `σ`, compares the rankings that fidelity and total
/// distance assign to the test states.
///
/// Higher fidelity should mean lower distance; a pair violates when both the
/// fidelity difference and the distance difference exceed the dead zone and
/// point the same way.
pub fn ordering_check(
    sigma: &DensityOperator,
    tests: &[DensityOperator],
    m: &MubSet,
) -> Result<OrderingReport> {
    require_pure(sigma)?;
    let mut fidelities = Vec::with_capacity(tests.len());
    let mut distances = Vec::with_capacity(tests.len());
    for rho in tests {
        fidelities.push(fidelity_pure(sigma, rho)?);
        distances.push(total_distance(sigma, rho, m)?.total);
    }
    let mut violations = Vec::new();
    for i in 0..tests.len() {
        for j in (i + 1)..tests.len() {
            let df = fidelities[i] - fidelities[j];
            let dd = distances[j] - distances[i];
            if df.abs() <= ORDERING_DEAD_ZONE || dd.abs() <= ORDERING_DEAD_ZONE {
                continue;
            }
            if df.signum() != dd.signum() {
                violations.push(OrderingViolation {
                    i,
                    j,
                    fidelity_i: fidelities[i],
                    fidelity_j: fidelities[j],
                    distance_i: distances[i],
                    distance_j: distances[j],
                });
            }
        }
    }
    Ok(OrderingReport {
        fidelities,
        distances,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::validate_state;
    use crate::linalg::ComplexMatrix;
    use crate::mub::standard_mub;
    use crate::sampler::{random_mixed, random_pure, RngSeed};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_state(entries: &[f64]) -> DensityOperator {
        validate_state(&ComplexMatrix::from_real_diag(entries), 1e-9).unwrap()
    }

    /// ρ = (𝟙 + x σx + z σz)/2
    fn qubit_state(x: f64, z: f64) -> DensityOperator {
        let m = ComplexMatrix::from_rows(&[
            vec![c((1.0 + z) / 2.0, 0.0), c(x / 2.0, 0.0)],
            vec![c(x / 2.0, 0.0), c((1.0 - z) / 2.0, 0.0)],
        ])
        .unwrap();
        validate_state(&m, 1e-9).unwrap()
    }

    #[test]
    fn born_probabilities_examples() {
        let m = standard_mub(2).unwrap();
        let z0 = DensityOperator::basis_state(2, 0);

        let p = born_probabilities(&z0, &m.bases()[0]).unwrap();
        assert!((p.probs()[0] - 1.0).abs() < 1e-15);
        assert!(p.probs()[1].abs() < 1e-15);

        // eigenstate of one basis is uniform in a complementary one
        let p = born_probabilities(&z0, &m.bases()[1]).unwrap();
        assert!((p.probs()[0] - 0.5).abs() < 1e-15);
        assert!((p.probs()[1] - 0.5).abs() < 1e-15);

        // the completely random state is uniform in every basis
        let mixed = DensityOperator::maximally_mixed(3);
        let m3 = standard_mub(3).unwrap();
        for basis in m3.bases() {
            let p = born_probabilities(&mixed, basis).unwrap();
            for &x in p.probs() {
                assert!((x - 1.0 / 3.0).abs() < 1e-14);
            }
        }

        // outputs are normalized to 1e−10 on random states
        for t in 0..20u64 {
            let rho = random_mixed(3, RngSeed(97_000 + t)).unwrap();
            for basis in m3.bases() {
                let p = born_probabilities(&rho, basis).unwrap();
                let sum: f64 = p.probs().iter().sum();
                assert!((sum - 1.0).abs() <= 1e-10);
                assert!(p.probs().iter().all(|&x| x >= 0.0));
            }
        }
    }

    #[test]
    fn single_distance_examples() {
        let p = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        let q = ProbabilityVector::new(vec![0.0, 1.0]).unwrap();
        let u = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(single_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(single_distance(&p, &q).unwrap(), 2.0);
        assert!((single_distance(&p, &u).unwrap() - 0.5).abs() < 1e-15);
        let r3 = ProbabilityVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            single_distance(&p, &r3),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.5 - 1e-13, 1e-13]).is_ok());
        // tiny negative is clamped
        let p = ProbabilityVector::new(vec![1.0, -1e-13, 1e-13]).unwrap();
        assert_eq!(p.probs()[1], 0.0);
        assert!(matches!(
            ProbabilityVector::new(vec![1.0, -1e-3]),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(matches!(
            ProbabilityVector::new(vec![0.4, 0.4]),
            Err(Error::ProbabilityNotNormalized { .. })
        ));
    }

    #[test]
    fn total_distance_identical_states_is_zero() {
        let m = standard_mub(3).unwrap();
        let rho = random_mixed(3, RngSeed(5)).unwrap();
        let report = total_distance(&rho, &rho, &m).unwrap();
        assert_eq!(report.total, 0.0);
        assert_eq!(report.hs_distance_sq, 0.0);
    }

    #[test]
    fn total_distance_orthogonal_qubits() {
        // |0⟩⟨0| vs |1⟩⟨1| over the Pauli set: (2, 0, 0), total 2
        let m = standard_mub(2).unwrap();
        let z0 = DensityOperator::basis_state(2, 0);
        let z1 = DensityOperator::basis_state(2, 1);
        let report = total_distance(&z0, &z1, &m).unwrap();
        assert_eq!(report.per_basis.len(), 3);
        assert!((report.per_basis[0].1 - 2.0).abs() < 1e-12);
        assert!(report.per_basis[1].1.abs() < 1e-12);
        assert!(report.per_basis[2].1.abs() < 1e-12);
        assert!((report.total - 2.0).abs() < 1e-12);
        assert!(report.deviation < 1e-12);
        let sum: f64 = report.per_basis.iter().map(|(_, v)| v).sum();
        assert!((sum - report.total).abs() <= 1e-12);
    }

    #[test]
    fn total_distance_pure_vs_random() {
        let m = standard_mub(2).unwrap();
        let pure = random_pure(2, RngSeed(9)).unwrap();
        let mixed = DensityOperator::maximally_mixed(2);
        let report = total_distance(&pure, &mixed, &m).unwrap();
        assert!((report.total - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hs_distance_examples() {
        let a = diag_state(&[0.7, 0.3]);
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((hs_distance_sq(&a, &mixed).unwrap() - 0.08).abs() < 1e-15);
        assert_eq!(hs_distance_sq(&a, &a).unwrap(), 0.0);
        let z0 = DensityOperator::basis_state(2, 0);
        let z1 = DensityOperator::basis_state(2, 1);
        assert!((hs_distance_sq(&z0, &z1).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn information_content_examples() {
        let mixed = DensityOperator::maximally_mixed(4);
        assert_eq!(information_content(&mixed, 3.0).unwrap(), 0.0);

        let pure2 = random_pure(2, RngSeed(3)).unwrap();
        assert!((information_content(&pure2, 1.0).unwrap() - 0.5).abs() < 1e-12);

        let pure3 = random_pure(3, RngSeed(4)).unwrap();
        assert!((information_content(&pure3, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);

        assert!(matches!(
            information_content(&pure2, 0.0),
            Err(Error::NonPositiveNormalization { .. })
        ));
        assert!(matches!(
            information_content(&pure2, -1.0),
            Err(Error::NonPositiveNormalization { .. })
        ));
    }

    #[test]
    fn information_content_matches_distance_from_random_state() {
        for d in [2usize, 3, 5] {
            let m = standard_mub(d).unwrap();
            let random = DensityOperator::maximally_mixed(d);
            for t in 0..20u64 {
                let rho = random_mixed(d, RngSeed(70_000 + t).derive(d as u64)).unwrap();
                let i = information_content(&rho, 1.0).unwrap();
                let dtot = total_distance(&rho, &random, &m).unwrap().total;
                assert!((i - dtot).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn fidelity_examples() {
        let rho = random_mixed(3, RngSeed(17)).unwrap();
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);

        let z0 = DensityOperator::basis_state(2, 0);
        let z1 = DensityOperator::basis_state(2, 1);
        assert!(fidelity(&z0, &z1).unwrap() < 1e-12);

        let mixed = DensityOperator::maximally_mixed(2);
        let pure = random_pure(2, RngSeed(21)).unwrap();
        assert!((fidelity(&mixed, &pure).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn fidelity_pure_examples() {
        let z0 = DensityOperator::basis_state(2, 0);
        assert!((fidelity_pure(&z0, &z0).unwrap() - 1.0).abs() < 1e-15);

        let rho = diag_state(&[0.7, 0.3]);
        assert!((fidelity_pure(&z0, &rho).unwrap() - 0.7).abs() < 1e-15);

        let plus = DensityOperator::from_ket(&[c(1., 0.), c(1., 0.)]).unwrap();
        assert!((fidelity_pure(&z0, &plus).unwrap() - 0.5).abs() < 1e-15);

        // mixed reference is rejected
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            fidelity_pure(&mixed, &rho),
            Err(Error::NotPure { .. })
        ));
    }

    #[test]
    fn fidelity_agrees_with_pure_form() {
        for t in 0..20u64 {
            let sigma = random_pure(3, RngSeed(80_000 + t)).unwrap();
            let rho = random_mixed(3, RngSeed(81_000 + t)).unwrap();
            let full = fidelity(&sigma, &rho).unwrap();
            let fast = fidelity_pure(&sigma, &rho).unwrap();
            assert!((full - fast).abs() <= 1e-9, "trial {t}: {full} vs {fast}");

            let psi = random_pure(3, RngSeed(81_500 + t)).unwrap();
            let full = fidelity(&sigma, &psi).unwrap();
            let fast = fidelity_pure(&sigma, &psi).unwrap();
            assert!(
                (full - fast).abs() <= 1e-9,
                "pure pair {t}: {full} vs {fast}"
            );
        }
    }

    #[test]
    fn purity_fidelity_relation_examples() {
        let z0 = DensityOperator::basis_state(2, 0);
        let (lhs, rhs) = purity_fidelity_relation(&z0, &z0).unwrap();
        assert!(lhs.abs() < 1e-15 && rhs.abs() < 1e-12);

        let rho = diag_state(&[0.7, 0.3]);
        let (lhs, rhs) = purity_fidelity_relation(&z0, &rho).unwrap();
        assert!((lhs - 0.18).abs() < 1e-12);
        assert!((rhs - 0.18).abs() < 1e-12);

        let z1 = DensityOperator::basis_state(2, 1);
        let (lhs, rhs) = purity_fidelity_relation(&z0, &z1).unwrap();
        assert!((lhs - 2.0).abs() < 1e-12 && (rhs - 2.0).abs() < 1e-12);

        for t in 0..30u64 {
            let sigma = random_pure(3, RngSeed(82_000 + t)).unwrap();
            let rho = random_mixed(3, RngSeed(83_000 + t)).unwrap();
            let (lhs, rhs) = purity_fidelity_relation(&sigma, &rho).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10);
        }
    }

    #[test]
    fn ordering_on_pure_states_has_no_violations() {
        let m = standard_mub(2).unwrap();
        let sigma = random_pure(2, RngSeed(1)).unwrap();
        let tests: Vec<DensityOperator> = (0..40)
            .map(|t| random_pure(2, RngSeed(90_000 + t)).unwrap())
            .collect();
        let report = ordering_check(&sigma, &tests, &m).unwrap();
        assert!(report.is_equivalent(), "{:?}", report.violations);
    }

    #[test]
    fn ordering_counterexample_on_mixed_states() {
        // σ = |0⟩⟨0|, ρ1 = diag(0.7, 0.3), ρ2 = (𝟙 + 0.8σx + 0.5σz)/2:
        // ρ2 is closer in fidelity yet farther in distance.
        let m = standard_mub(2).unwrap();
        let sigma = DensityOperator::basis_state(2, 0);
        let rho1 = diag_state(&[0.7, 0.3]);
        let rho2 = qubit_state(0.8, 0.5);
        let report = ordering_check(&sigma, &[rho1, rho2], &m).unwrap();

        assert!((report.fidelities[0] - 0.70).abs() < 1e-9);
        assert!((report.fidelities[1] - 0.75).abs() < 1e-9);
        assert!((report.distances[0] - 0.18).abs() < 1e-9);
        assert!((report.distances[1] - 0.445).abs() < 1e-9);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.i, v.j), (0, 1));
    }

    #[test]
    fn ordering_single_state_trivially_equivalent() {
        let m = standard_mub(2).unwrap();
        let sigma = DensityOperator::basis_state(2, 0);
        let tests = vec![diag_state(&[0.6, 0.4])];
        let report = ordering_check(&sigma, &tests, &m).unwrap();
        assert!(report.is_equivalent());
    }

    #[test]
    fn equivalence_of_routes_across_dimensions_and_rotations() {
        use crate::mub::rotate_mub;
        use crate::sampler::haar_unitary;
        for d in [2usize, 3, 5, 7] {
            let standard = standard_mub(d).unwrap();
            let mut sets = vec![standard.clone()];
            for r in 0..2u64 {
                let u = haar_unitary(d, RngSeed(300 + r).derive(d as u64)).unwrap();
                sets.push(rotate_mub(&standard, &u).unwrap());
            }
            for t in 0..50u64 {
                let rho1 = random_mixed(d, RngSeed(84_000 + t).derive(d as u64)).unwrap();
                let rho2 = random_pure(d, RngSeed(85_000 + t).derive(d as u64)).unwrap();
                for set in &sets {
                    let report = total_distance(&rho1, &rho2, set).unwrap();
                    assert!(report.deviation <= 1e-9, "d={d} t={t}");
                }
            }
        }
    }

    #[test]
    fn distance_bounds_and_saturation() {
        // 0 ≤ total ≤ 2; the ceiling is reached exactly by orthogonal pure pairs
        for d in [2usize, 3, 5] {
            let m = standard_mub(d).unwrap();
            let z0 = DensityOperator::basis_state(d, 0);
            let z1 = DensityOperator::basis_state(d, 1);
            let report = total_distance(&z0, &z1, &m).unwrap();
            assert!((report.total - 2.0).abs() <= 1e-12);

            for t in 0..30u64 {
                let rho1 = random_mixed(d, RngSeed(86_000 + t).derive(d as u64)).unwrap();
                let rho2 = random_mixed(d, RngSeed(87_000 + t).derive(d as u64)).unwrap();
                let r = total_distance(&rho1, &rho2, &m).unwrap();
                assert!(r.total >= 0.0 && r.total <= 2.0 + 1e-9);
                // mixed pairs stay strictly inside the ceiling
                assert!(r.total < 2.0 - 1e-3);
            }

            // non-orthogonal pure pairs also stay below it: D = 2 − 2F < 2
            for t in 0..30u64 {
                let a = random_pure(d, RngSeed(95_000 + t).derive(d as u64)).unwrap();
                let b = random_pure(d, RngSeed(96_000 + t).derive(d as u64)).unwrap();
                let f = fidelity_pure(&a, &b).unwrap();
                let total = total_distance(&a, &b, &m).unwrap().total;
                assert!(f > 1e-6, "Haar pair happened to be orthogonal");
                assert!(total < 2.0 - 1e-6);
            }
        }
    }

    #[test]
    fn sqrt_total_distance_is_a_metric() {
        // symmetry and triangle inequality on random triples
        let m = standard_mub(3).unwrap();
        for t in 0..30u64 {
            let a = random_mixed(3, RngSeed(88_000 + t)).unwrap();
            let b = random_mixed(3, RngSeed(88_500 + t)).unwrap();
            let c = random_pure(3, RngSeed(89_000 + t)).unwrap();
            let dab = total_distance(&a, &b, &m).unwrap().total.sqrt();
            let dba = total_distance(&b, &a, &m).unwrap().total.sqrt();
            let dac = total_distance(&a, &c, &m).unwrap().total.sqrt();
            let dcb = total_distance(&c, &b, &m).unwrap().total.sqrt();
            assert!((dab - dba).abs() <= 1e-9);
            assert!(dab <= dac + dcb + 1e-9);
        }
    }

    #[test]
    fn fidelity_range_and_symmetry() {
        for d in [2usize, 3] {
            for t in 0..50u64 {
                let a = random_mixed(d, RngSeed(91_000 + t).derive(d as u64)).unwrap();
                let b = random_mixed(d, RngSeed(92_000 + t).derive(d as u64)).unwrap();
                let fab = fidelity(&a, &b).unwrap();
                let fba = fidelity(&b, &a).unwrap();
                assert!((0.0..=1.0).contains(&fab));
                assert!((fab - fba).abs() <= 1e-8, "d={d} t={t}: {fab} vs {fba}");
            }
        }
    }

    #[test]
    fn pure_pairs_satisfy_two_minus_two_f() {
        for d in [2usize, 3, 5] {
            for t in 0..100u64 {
                let a = random_pure(d, RngSeed(93_000 + t).derive(d as u64)).unwrap();
                let b = random_pure(d, RngSeed(94_000 + t).derive(d as u64)).unwrap();
                let f = fidelity_pure(&a, &b).unwrap();
                let dist = hs_distance_sq(&a, &b).unwrap();
                assert!((dist - (2.0 - 2.0 * f)).abs() <= 1e-10);
            }
        }
    }
}
