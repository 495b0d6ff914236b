//! Random-state generation and finite-shot measurement simulation.
//!
//! Everything here is a deterministic function of its inputs and an
//! [`RngSeed`]: same seed, same build, same outputs, bit for bit. The
//! generator is ChaCha12 keyed through `seed_from_u64`; independent
//! sub-streams (one per measurement basis and system, for instance) are
//! derived with a splitmix64 mix of the parent seed and a stream index, so
//! parallel runs never share generator state.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::bloch::{decode, gell_mann_basis, validate_state, BlochVector, DensityOperator};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::metric::{born_probabilities, hs_distance_sq, ProbabilityVector};
use crate::mub::{standard_mub, MeasurementBasis, MubSet};

/// Identifier of the RNG scheme, embedded in output metadata so another
/// implementation can reproduce the distributions (bit-exact streams are only
/// promised within one build).
pub const RNG_ALGORITHM: &str =
    "ChaCha12(seed_from_u64); substreams: splitmix64(seed XOR splitmix64(stream))";

/// Seed for every sampling operation in this module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngSeed {
    /// Deterministic child seed for an independent sub-stream.
    pub fn derive(self, stream: u64) -> RngSeed {
        RngSeed(splitmix64(self.0 ^ splitmix64(stream)))
    }

    fn rng(self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.0)
    }
}

fn standard_complex(rng: &mut ChaCha12Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state `|ψ⟩⟨ψ|`: a normalized vector of complex standard
/// normals.
pub fn random_pure(d: usize, seed: RngSeed) -> Result<DensityOperator> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    let mut rng = seed.rng();
    loop {
        let amps: Vec<Complex64> = (0..d).map(|_| standard_complex(&mut rng)).collect();
        if amps.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-12 {
            return DensityOperator::from_ket(&amps);
        }
    }
}

/// Ginibre-induced random mixed state `ρ = GG†/Tr(GG†)` with `G` a d×d
/// complex standard-normal matrix.
pub fn random_mixed(d: usize, seed: RngSeed) -> Result<DensityOperator> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    let mut rng = seed.rng();
    loop {
        let mut g = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] = standard_complex(&mut rng);
            }
        }
        let h = g.mul(&g.adjoint());
        let tr = h.trace().re;
        if tr > 1e-9 {
            return validate_state(&h.scale(1.0 / tr).hermitized(), 1e-10);
        }
    }
}

/// Haar-random unitary: modified Gram-Schmidt orthonormalization of a Ginibre
/// matrix's columns (the triangular factor then has a positive real diagonal,
/// which is exactly the condition for Haar distribution of the result).
pub fn haar_unitary(d: usize, seed: RngSeed) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    let mut rng = seed.rng();
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| (0..d).map(|_| standard_complex(&mut rng)).collect())
        .collect();
    for j in 0..d {
        // two orthogonalization passes keep the Gram residue at roundoff
        for _ in 0..2 {
            for i in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let col_i = &head[i];
                let col_j = &mut tail[0];
                let proj: Complex64 = col_i
                    .iter()
                    .zip(col_j.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (x, y) in col_j.iter_mut().zip(col_i) {
                    *x -= y * proj;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-150, "Ginibre column collapsed");
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    Ok(u)
}

/// Counts from repeated independent measurement of one basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotRecord {
    pub basis_label: String,
    pub counts: Vec<u64>,
    pub shots: u64,
}

impl ShotRecord {
    /// Empirical outcome frequencies `counts / shots`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.shots as f64)
            .collect()
    }

    pub fn probability_vector(&self) -> Result<ProbabilityVector> {
        ProbabilityVector::new(self.frequencies())
    }
}

/// Draws one multinomial sample by the conditional-binomial method.
fn multinomial(rng: &mut ChaCha12Rng, n: u64, probs: &[f64]) -> Vec<u64> {
    let k = probs.len();
    let mut counts = vec![0u64; k];
    let mut remaining = n;
    let mut rest = 1.0f64;
    for i in 0..k {
        if remaining == 0 {
            break;
        }
        if i == k - 1 {
            counts[i] = remaining;
            break;
        }
        let p = if rest > 0.0 {
            (probs[i] / rest).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let c = if p >= 1.0 {
            remaining
        } else if p <= 0.0 {
            0
        } else {
            Binomial::new(remaining, p)
                .expect("probability is in (0, 1)")
                .sample(rng)
        };
        counts[i] = c;
        remaining -= c;
        rest -= probs[i];
    }
    counts
}

/// Simulates `n` independent measurements of `rho` in `basis`; the counts are
/// multinomial with the Born probabilities.
pub fn simulate_shots(
    rho: &DensityOperator,
    basis: &MeasurementBasis,
    n: u64,
    seed: RngSeed,
) -> Result<ShotRecord> {
    let p = born_probabilities(rho, basis)?;
    let mut rng = seed.rng();
    let counts = multinomial(&mut rng, n, p.probs());
    Ok(ShotRecord {
        basis_label: basis.label().to_string(),
        counts,
        shots: n,
    })
}

/// Finite-shot estimate of the total operational distance next to the exact
/// value.
#[derive(Clone, Debug)]
pub struct ShotEstimate {
    /// Plug-in estimate: `Σ_α |f_α(1) − f_α(2)|²` over the complete set.
    pub estimate: f64,
    /// `‖ρ1 − ρ2‖²`.
    pub exact: f64,
}

fn estimate_impl(
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    m: &MubSet,
    n_per_basis: u64,
    seed: RngSeed,
    bias_corrected: bool,
) -> Result<ShotEstimate> {
    let mut estimate = 0.0;
    for (alpha, basis) in m.bases().iter().enumerate() {
        let s1 = simulate_shots(rho1, basis, n_per_basis, seed.derive(2 * alpha as u64))?;
        let s2 = simulate_shots(rho2, basis, n_per_basis, seed.derive(2 * alpha as u64 + 1))?;
        let f1 = s1.frequencies();
        let f2 = s2.frequencies();
        estimate += f1
            .iter()
            .zip(&f2)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
        if bias_corrected {
            let n = n_per_basis as f64;
            let var_terms: f64 = f1
                .iter()
                .zip(&f2)
                .map(|(a, b)| (a * (1.0 - a) + b * (1.0 - b)) / n)
                .sum();
            estimate -= var_terms;
        }
    }
    Ok(ShotEstimate {
        estimate,
        exact: hs_distance_sq(rho1, rho2)?,
    })
}

/// Plug-in estimate of the total operational distance from simulated counts:
/// independent `n_per_basis`-shot runs on each state and basis, empirical
/// frequencies substituted for the Born probabilities.
///
/// The plug-in estimator is biased upward by O(1/n) (the frequency noise adds
/// in quadrature), so for identical states the estimate is small but
/// generically positive. With a single shot the raw value can reach
/// 2(d+1); it is reported as-is, never clamped.
pub fn estimate_total_distance(
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    m: &MubSet,
    n_per_basis: u64,
    seed: RngSeed,
) -> Result<ShotEstimate> {
    estimate_impl(rho1, rho2, m, n_per_basis, seed, false)
}

/// Variant of [`estimate_total_distance`] that subtracts the estimated
/// multinomial variance terms `Σ f(1−f)/n` per system, removing most of the
/// O(1/n) upward bias (the result can then dip below zero for very close
/// states).
pub fn estimate_total_distance_corrected(
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    m: &MubSet,
    n_per_basis: u64,
    seed: RngSeed,
) -> Result<ShotEstimate> {
    estimate_impl(rho1, rho2, m, n_per_basis, seed, true)
}

/// One polarizer setting of the tomography scenario.
#[derive(Clone, Debug)]
pub struct TomographySetting {
    /// Polarizer label: "horizontal", "diagonal-45", or "right-circular".
    pub setting: String,
    /// Measurement basis it realizes ("z", "x", "y").
    pub basis_label: String,
    pub counts: [Vec<u64>; 2],
    pub frequencies: [Vec<f64>; 2],
}

/// Report of the qubit polarization-tomography scenario.
#[derive(Clone, Debug)]
pub struct TomographyReport {
    pub shots_per_setting: u64,
    /// Total detected events over the three polarizer settings; plays the
    /// role of the overall intensity normalization in the optical setup
    /// (frequencies are self-normalized per setting).
    pub total_shots: u64,
    pub settings: Vec<TomographySetting>,
    /// Reconstructed Stokes/Bloch vectors (x, y, z) per system.
    pub stokes: [[f64; 3]; 2],
    /// Whether the raw reconstruction left the Bloch ball and was rescaled
    /// onto it.
    pub rescaled: [bool; 2],
    /// Physical states reconstructed from the (projected) Stokes vectors.
    pub reconstructed: [DensityOperator; 2],
    /// Plug-in estimate of the total operational distance from the observed
    /// frequencies.
    pub estimate: f64,
    /// Exact `‖ρ1 − ρ2‖²`.
    pub exact: f64,
}

/// Projects a qubit Stokes vector into the Bloch ball: vectors with norm
/// above 1 are rescaled onto the sphere (the closest physical state).
fn project_qubit_bloch(s: [f64; 3]) -> ([f64; 3], bool) {
    let norm = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
    if norm > 1.0 {
        ([s[0] / norm, s[1] / norm, s[2] / norm], true)
    } else {
        (s, false)
    }
}

/// Simulates polarization tomography of two qubit ensembles: three polarizer
/// settings (horizontal = z basis, 45° = x basis, right-circular = y basis),
/// `n` shots per setting and system.
///
/// Reports the per-setting frequencies, the reconstructed Stokes vectors and
/// states (projected into the Bloch ball if shot noise pushed them out), and
/// the estimated vs exact operational distance.
pub fn tomography_scenario(
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    n: u64,
    seed: RngSeed,
) -> Result<TomographyReport> {
    if rho1.dim() != 2 || rho2.dim() != 2 {
        return Err(Error::NotAQubit {
            dim: rho1.dim().max(rho2.dim()),
        });
    }
    let mub = standard_mub(2)?;
    let setting_names = ["horizontal", "diagonal-45", "right-circular"];
    let systems = [rho1, rho2];

    let mut settings = Vec::with_capacity(3);
    let mut estimate = 0.0;
    // Stokes components indexed (x, y, z); bases arrive in (z, x, y) order.
    let mut stokes = [[0.0f64; 3]; 2];
    for (b_idx, basis) in mub.bases().iter().enumerate() {
        let mut counts: [Vec<u64>; 2] = [Vec::new(), Vec::new()];
        let mut freqs: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for (s_idx, rho) in systems.iter().enumerate() {
            let rec = simulate_shots(rho, basis, n, seed.derive((2 * b_idx + s_idx) as u64))?;
            freqs[s_idx] = rec.frequencies();
            counts[s_idx] = rec.counts;
            let diff = freqs[s_idx][0] - freqs[s_idx][1];
            let coord = match basis.label() {
                "x" => 0,
                "y" => 1,
                _ => 2,
            };
            stokes[s_idx][coord] = diff;
        }
        estimate += freqs[0]
            .iter()
            .zip(&freqs[1])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>();
        settings.push(TomographySetting {
            setting: setting_names[b_idx].to_string(),
            basis_label: basis.label().to_string(),
            counts,
            frequencies: freqs,
        });
    }

    let ob = gell_mann_basis(2)?;
    let mut rescaled = [false; 2];
    let mut reconstructed = Vec::with_capacity(2);
    for s_idx in 0..2 {
        let (proj, was_rescaled) = project_qubit_bloch(stokes[s_idx]);
        rescaled[s_idx] = was_rescaled;
        let v = BlochVector::new(2, proj.to_vec())?;
        let matrix = decode(&v, &ob)?;
        reconstructed.push(validate_state(&matrix, 1e-9)?);
    }
    let reconstructed: [DensityOperator; 2] = match reconstructed.try_into() {
        Ok(arr) => arr,
        Err(_) => unreachable!("exactly two reconstructions"),
    };

    Ok(TomographyReport {
        shots_per_setting: n,
        total_shots: 3 * 2 * n,
        settings,
        stokes,
        rescaled,
        reconstructed,
        estimate,
        exact: hs_distance_sq(rho1, rho2)?,
    })
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// distinct positive points.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{encode, purity};
    use crate::metric::total_distance;

    #[test]
    fn random_pure_is_pure_and_on_the_bloch_sphere() {
        for d in [2usize, 3, 5, 7] {
            let basis = gell_mann_basis(d).unwrap();
            for t in 0..20u64 {
                let rho = random_pure(d, RngSeed(t).derive(d as u64)).unwrap();
                assert!((purity(&rho) - 1.0).abs() < 1e-12);
                assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
                let v = encode(&rho, &basis).unwrap();
                assert!((v.norm_sq() - (d as f64 - 1.0)).abs() < 1e-10);
            }
        }
        assert!(matches!(
            random_pure(1, RngSeed(0)),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn random_mixed_is_a_valid_state() {
        for d in [2usize, 3, 5] {
            for t in 0..20u64 {
                let rho = random_mixed(d, RngSeed(100 + t).derive(d as u64)).unwrap();
                let p = purity(&rho);
                assert!(p >= 1.0 / d as f64 - 1e-12 && p <= 1.0 + 1e-12);
                // validate_state already ran inside; spot-check the spectrum floor
                let eig = crate::linalg::eigh(rho.matrix(), 1e-10).unwrap();
                assert!(eig.eigenvalues[0] >= -1e-10);
                assert!((eig.eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            }
        }
        assert!(matches!(
            random_mixed(0, RngSeed(0)),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn samplers_are_deterministic() {
        let a = random_pure(3, RngSeed(42)).unwrap();
        let b = random_pure(3, RngSeed(42)).unwrap();
        assert_eq!(a.matrix().entries(), b.matrix().entries());

        let c = random_mixed(4, RngSeed(42)).unwrap();
        let d = random_mixed(4, RngSeed(42)).unwrap();
        assert_eq!(c.matrix().entries(), d.matrix().entries());

        let e = random_pure(3, RngSeed(43)).unwrap();
        assert!(a.matrix().max_abs_diff(e.matrix()) > 1e-3);
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        for d in [2usize, 3, 5, 11] {
            let u = haar_unitary(d, RngSeed(7).derive(d as u64)).unwrap();
            let dev = u
                .adjoint()
                .mul(&u)
                .max_abs_diff(&ComplexMatrix::identity(d));
            assert!(dev < 1e-12, "d={d}: {dev:.3e}");
        }
        let a = haar_unitary(5, RngSeed(1)).unwrap();
        let b = haar_unitary(5, RngSeed(1)).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn deterministic_outcome_gives_deterministic_counts() {
        let m = standard_mub(2).unwrap();
        let z0 = DensityOperator::basis_state(2, 0);
        for n in [1u64, 10, 1000] {
            let rec = simulate_shots(&z0, &m.bases()[0], n, RngSeed(5)).unwrap();
            assert_eq!(rec.counts, vec![n, 0]);
        }
    }

    #[test]
    fn shot_counts_always_sum_to_n() {
        let m = standard_mub(3).unwrap();
        let rho = random_mixed(3, RngSeed(8)).unwrap();
        for (t, basis) in m.bases().iter().enumerate() {
            let rec = simulate_shots(&rho, basis, 999, RngSeed(t as u64)).unwrap();
            assert_eq!(rec.counts.iter().sum::<u64>(), 999);
            assert_eq!(rec.counts.len(), 3);
        }
    }

    #[test]
    fn balanced_state_counts_concentrate() {
        // 5σ binomial bound at n = 10⁶, p = 1/2
        let m = standard_mub(2).unwrap();
        let mixed = DensityOperator::maximally_mixed(2);
        let n = 1_000_000u64;
        let rec = simulate_shots(&mixed, &m.bases()[0], n, RngSeed(31)).unwrap();
        let bound = 5.0 * ((n as f64) * 0.25).sqrt();
        for &c in &rec.counts {
            assert!((c as f64 - n as f64 / 2.0).abs() < bound, "{rec:?}");
        }
    }

    #[test]
    fn shots_are_reproducible() {
        let m = standard_mub(2).unwrap();
        let rho = random_mixed(2, RngSeed(77)).unwrap();
        let a = simulate_shots(&rho, &m.bases()[1], 12345, RngSeed(9)).unwrap();
        let b = simulate_shots(&rho, &m.bases()[1], 12345, RngSeed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn estimator_bias_on_identical_states() {
        let m = standard_mub(2).unwrap();
        let z0 = DensityOperator::basis_state(2, 0);
        let est = estimate_total_distance(&z0, &z0, &m, 1000, RngSeed(13)).unwrap();
        assert_eq!(est.exact, 0.0);
        // z basis contributes exactly zero; x and y add O(1/n) noise
        assert!(est.estimate > 0.0 && est.estimate < 0.05, "{est:?}");
    }

    #[test]
    fn estimator_converges_on_orthogonal_pair() {
        let m = standard_mub(2).unwrap();
        let z0 = DensityOperator::basis_state(2, 0);
        let z1 = DensityOperator::basis_state(2, 1);
        let est = estimate_total_distance(&z0, &z1, &m, 1_000_000, RngSeed(17)).unwrap();
        assert!((est.exact - 2.0).abs() < 1e-12);
        assert!((est.estimate - 2.0).abs() < 0.01, "{est:?}");
    }

    #[test]
    fn single_shot_estimate_stays_in_raw_range() {
        let m = standard_mub(3).unwrap();
        let a = random_mixed(3, RngSeed(19)).unwrap();
        let b = random_mixed(3, RngSeed(20)).unwrap();
        for t in 0..50u64 {
            let est = estimate_total_distance(&a, &b, &m, 1, RngSeed(t)).unwrap();
            assert!(est.estimate >= 0.0 && est.estimate <= 2.0 * 4.0);
        }
    }

    #[test]
    fn corrected_estimator_reduces_bias() {
        let m = standard_mub(2).unwrap();
        let a = random_mixed(2, RngSeed(23)).unwrap();
        let b = random_mixed(2, RngSeed(24)).unwrap();
        let n = 1000u64;
        let seeds = 200u64;
        let (mut plain_sum, mut corr_sum) = (0.0, 0.0);
        let mut exact = 0.0;
        for s in 0..seeds {
            let p = estimate_total_distance(&a, &b, &m, n, RngSeed(s)).unwrap();
            let q = estimate_total_distance_corrected(&a, &b, &m, n, RngSeed(s)).unwrap();
            plain_sum += p.estimate;
            corr_sum += q.estimate;
            exact = p.exact;
        }
        let plain_bias = (plain_sum / seeds as f64 - exact).abs();
        let corr_bias = (corr_sum / seeds as f64 - exact).abs();
        assert!(
            corr_bias < plain_bias,
            "corrected bias {corr_bias:.2e} should beat plug-in bias {plain_bias:.2e}"
        );
    }

    #[test]
    fn estimator_is_deterministic() {
        let m = standard_mub(2).unwrap();
        let a = random_mixed(2, RngSeed(25)).unwrap();
        let b = random_pure(2, RngSeed(26)).unwrap();
        let x = estimate_total_distance(&a, &b, &m, 5000, RngSeed(3)).unwrap();
        let y = estimate_total_distance(&a, &b, &m, 5000, RngSeed(3)).unwrap();
        assert_eq!(x.estimate.to_bits(), y.estimate.to_bits());
    }

    #[test]
    fn rms_error_scales_as_inverse_sqrt_n() {
        let a = random_mixed(2, RngSeed(27)).unwrap();
        let b = random_mixed(2, RngSeed(28)).unwrap();
        let m = standard_mub(2).unwrap();
        let shots = [1_000u64, 10_000, 100_000, 1_000_000];
        let seeds = 25u64;
        let mut points = Vec::new();
        for &n in &shots {
            let mut sq = 0.0;
            for s in 0..seeds {
                let est = estimate_total_distance(&a, &b, &m, n, RngSeed(s).derive(n)).unwrap();
                sq += (est.estimate - est.exact).powi(2);
            }
            points.push((n as f64, (sq / seeds as f64).sqrt()));
        }
        let slope = log_log_slope(&points).unwrap();
        assert!(
            (slope + 0.5).abs() <= 0.1,
            "slope {slope:.3} out of range: {points:?}"
        );
    }

    #[test]
    fn frequencies_are_unbiased() {
        // mean frequency over 100 seeds within 3σ of the Born probabilities
        let m = standard_mub(3).unwrap();
        let rho = random_mixed(3, RngSeed(29)).unwrap();
        let basis = &m.bases()[2];
        let p = born_probabilities(&rho, basis).unwrap();
        let n = 10_000u64;
        let seeds = 100u64;
        let mut mean = [0.0; 3];
        for s in 0..seeds {
            let f = simulate_shots(&rho, basis, n, RngSeed(s).derive(999)).unwrap();
            for (m_i, f_i) in mean.iter_mut().zip(f.frequencies()) {
                *m_i += f_i / seeds as f64;
            }
        }
        for (i, (&avg, &prob)) in mean.iter().zip(p.probs()).enumerate() {
            let sigma = (prob * (1.0 - prob) / (n * seeds) as f64).sqrt();
            assert!(
                (avg - prob).abs() <= 3.0 * sigma + 1e-12,
                "outcome {i}: mean {avg} vs born {prob} (3σ = {:.2e})",
                3.0 * sigma
            );
        }
    }

    #[test]
    fn tomography_rejects_non_qubits() {
        let a = random_mixed(3, RngSeed(1)).unwrap();
        let b = random_mixed(3, RngSeed(2)).unwrap();
        assert!(matches!(
            tomography_scenario(&a, &b, 100, RngSeed(0)),
            Err(Error::NotAQubit { dim: 3 })
        ));
    }

    #[test]
    fn tomography_identical_random_states_estimate_shrinks() {
        let mixed = DensityOperator::maximally_mixed(2);
        let small = tomography_scenario(&mixed, &mixed, 1_000, RngSeed(5)).unwrap();
        let large = tomography_scenario(&mixed, &mixed, 1_000_000, RngSeed(5)).unwrap();
        assert_eq!(small.exact, 0.0);
        assert!(large.estimate < small.estimate);
        assert!(large.estimate < 1e-4, "{:?}", large.estimate);
    }

    #[test]
    fn tomography_exact_distance_of_h_and_diag_polarization() {
        // horizontal vs 45°: pure states with overlap 1/2, so distance 1
        let h = DensityOperator::basis_state(2, 0);
        let diag = DensityOperator::from_ket(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)])
            .unwrap();
        let rep = tomography_scenario(&h, &diag, 1000, RngSeed(6)).unwrap();
        assert!((rep.exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tomography_reconstructs_basis_state() {
        let z0 = DensityOperator::basis_state(2, 0);
        let mixed = DensityOperator::maximally_mixed(2);
        let rep = tomography_scenario(&z0, &mixed, 1_000_000, RngSeed(7)).unwrap();
        let s = rep.stokes[0];
        assert!(s[0].abs() < 0.01 && s[1].abs() < 0.01 && (s[2] - 1.0).abs() < 0.01);
        // reconstruction is a valid state close to the input
        assert!(rep.reconstructed[0].matrix().max_abs_diff(z0.matrix()) < 0.01);
    }

    #[test]
    fn bloch_projection_is_idempotent_on_valid_vectors() {
        let (inside, moved) = project_qubit_bloch([0.3, -0.2, 0.5]);
        assert_eq!(inside, [0.3, -0.2, 0.5]);
        assert!(!moved);
        let (outside, moved) = project_qubit_bloch([0.8, 0.0, 0.8]);
        assert!(moved);
        let norm = (outside[0].powi(2) + outside[1].powi(2) + outside[2].powi(2)).sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tomography_estimate_matches_direct_plug_in() {
        // the scenario's estimate is the same plug-in statistic produced by
        // estimate_total_distance with the same seed layout
        let a = random_mixed(2, RngSeed(33)).unwrap();
        let b = random_pure(2, RngSeed(34)).unwrap();
        let m = standard_mub(2).unwrap();
        let rep = tomography_scenario(&a, &b, 10_000, RngSeed(12)).unwrap();
        let est = estimate_total_distance(&a, &b, &m, 10_000, RngSeed(12)).unwrap();
        assert!((rep.estimate - est.estimate).abs() < 1e-15);
        // and the exact value matches the measurement-route total
        let total = total_distance(&a, &b, &m).unwrap().total;
        assert!((rep.exact - total).abs() < 1e-10);
    }

    #[test]
    fn derive_produces_distinct_streams() {
        let base = RngSeed(1);
        let mut seen = std::collections::HashSet::new();
        for stream in 0..1000 {
            assert!(seen.insert(base.derive(stream).0));
        }
        assert!(!seen.contains(&base.0));
    }

    #[test]
    fn log_log_slope_recovers_power_law() {
        let pts: Vec<(f64, f64)> = [1e3, 1e4, 1e5]
            .iter()
            .map(|&x: &f64| (x, 3.0 * x.powf(-0.5)))
            .collect();
        let slope = log_log_slope(&pts).unwrap();
        assert!((slope + 0.5).abs() < 1e-12);
        assert!(log_log_slope(&[(10.0, 1.0)]).is_none());
    }
}
