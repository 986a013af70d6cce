//! Ideal Bose gas in a hard-wall box of unit side (hbar = m = k_B = 1).

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Riemann zeta(3/2).
pub const ZETA_3_2: f64 = 2.612_375_348_685_488;

/// Regime limits of the exhaustive canonical enumerator.
pub const CANONICAL_MAX_PARTICLES: usize = 6;
pub const CANONICAL_MAX_MODES: usize = 8;

const SOLVER_MAX_ITERATIONS: usize = 4000;
const SOLVER_RELATIVE_TOLERANCE: f64 = 1e-12;
/// Convergence demanded by callers; the solver aims tighter.
pub const PARTICLE_NUMBER_TOLERANCE: f64 = 1e-9;

/// Energy of a box eigenstate, `(pi^2 / 2) * sum n_i^2`.
pub fn box_energy(quantum_numbers: &[u32]) -> f64 {
    0.5 * PI * PI * quantum_numbers.iter().map(|&n| (n as f64) * (n as f64)).sum::<f64>()
}

/// A single-particle eigenstate of the trap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mode {
    pub quantum_numbers: Vec<u32>,
    pub energy: f64,
}

impl Mode {
    /// Box eigenstate with the standard hard-wall energy.
    pub fn box_mode(quantum_numbers: Vec<u32>) -> Result<Self> {
        if quantum_numbers.is_empty() || quantum_numbers.len() > 3 {
            return Err(Error::InvalidParameter(format!(
                "box modes have 1 to 3 quantum numbers, got {}",
                quantum_numbers.len()
            )));
        }
        if quantum_numbers.contains(&0) {
            return Err(Error::InvalidParameter("box quantum numbers start at 1".into()));
        }
        let energy = box_energy(&quantum_numbers);
        Ok(Mode {
            quantum_numbers,
            energy,
        })
    }

    /// A mode with an arbitrary energy, for toy spectra.
    pub fn with_energy(quantum_numbers: Vec<u32>, energy: f64) -> Self {
        Mode {
            quantum_numbers,
            energy,
        }
    }

    pub fn dimension(&self) -> usize {
        self.quantum_numbers.len()
    }
}

/// All box modes with `1 <= n_i <= cutoff`, ascending in energy with ties
/// broken lexicographically.
pub fn box_modes(dimension: usize, cutoff: u32) -> Result<Vec<Mode>> {
    if !(1..=3).contains(&dimension) {
        return Err(Error::InvalidParameter(format!(
            "trap dimension must be 1, 2 or 3, got {dimension}"
        )));
    }
    if cutoff == 0 {
        return Err(Error::InvalidParameter("mode cutoff must be at least 1".into()));
    }
    let mut numbers: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..dimension {
        numbers = numbers
            .into_iter()
            .flat_map(|prefix| {
                (1..=cutoff).map(move |n| {
                    let mut q = prefix.clone();
                    q.push(n);
                    q
                })
            })
            .collect();
    }
    let mut modes: Vec<Mode> = numbers
        .into_iter()
        .map(|q| {
            let energy = box_energy(&q);
            Mode {
                quantum_numbers: q,
                energy,
            }
        })
        .collect();
    modes.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then_with(|| a.quantum_numbers.cmp(&b.quantum_numbers))
    });
    Ok(modes)
}

/// Something that can sum Bose occupations for a given chemical potential.
///
/// The chemical potential enters through the gap `E0 - mu > 0`, which keeps
/// low-temperature solves free of cancellation.
pub trait Spectrum {
    fn ground_energy(&self) -> f64;

    /// `sum_k 1 / (exp((E_k - mu) / T) - 1)` with `mu = E0 - gap`.
    fn occupancy(&self, gap: f64, temperature: f64) -> f64;
}

fn bose(excitation: f64, gap: f64, temperature: f64) -> f64 {
    1.0 / ((excitation + gap) / temperature).exp_m1()
}

impl Spectrum for [Mode] {
    fn ground_energy(&self) -> f64 {
        self.iter().map(|m| m.energy).fold(f64::INFINITY, f64::min)
    }

    fn occupancy(&self, gap: f64, temperature: f64) -> f64 {
        let e0 = self.ground_energy();
        self.iter().map(|m| bose(m.energy - e0, gap, temperature)).sum()
    }
}

/// The full (untruncated) spectrum of the unit box, split into an explicit
/// list of modes with `n_i <= cutoff` and everything above it.
#[derive(Debug, Clone)]
pub struct BoxSpectrum {
    dimension: usize,
    cutoff: u32,
    modes: Vec<Mode>,
}

impl BoxSpectrum {
    pub fn new(dimension: usize, cutoff: u32) -> Result<Self> {
        let modes = box_modes(dimension, cutoff)?;
        Ok(BoxSpectrum {
            dimension,
            cutoff,
            modes,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// The explicit modes (every `n_i <= cutoff`).
    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Occupancy of all modes with some `n_i > cutoff`.
    ///
    /// Expands each Bose factor as `sum_j exp(-j x_k)`; the sum over modes of
    /// each term factorizes into one-axis sums. With `S = S_in + S_out` split
    /// at the cutoff, the tail is `S^d - S_in^d`, expanded binomially so no
    /// cancellation occurs.
    pub fn tail_occupancy(&self, gap: f64, temperature: f64) -> f64 {
        let d = self.dimension as i32;
        let e0 = box_energy(&vec![1; self.dimension]);
        // Per-axis share of the ground energy and gap, keeps every exponent negative.
        let shift = (e0 - gap) / self.dimension as f64;
        let mut total = 0.0;
        for j in 1..=1_000_000u32 {
            let beta = j as f64 / temperature;
            let axis_term = |n: u32| (-beta * (0.5 * PI * PI * (n as f64).powi(2) - shift)).exp();
            let inside: f64 = (1..=self.cutoff).map(axis_term).sum();
            let mut outside = 0.0;
            let mut n = self.cutoff + 1;
            loop {
                let t = axis_term(n);
                outside += t;
                if t <= outside * 1e-18 || t == 0.0 {
                    break;
                }
                n += 1;
            }
            let term = match d {
                1 => outside,
                2 => 2.0 * inside * outside + outside * outside,
                _ => 3.0 * inside * inside * outside + 3.0 * inside * outside * outside + outside * outside * outside,
            };
            total += term;
            if term <= total * 1e-17 || term == 0.0 {
                break;
            }
        }
        total
    }
}

impl Spectrum for BoxSpectrum {
    fn ground_energy(&self) -> f64 {
        self.modes[0].energy
    }

    fn occupancy(&self, gap: f64, temperature: f64) -> f64 {
        self.modes.occupancy(gap, temperature) + self.tail_occupancy(gap, temperature)
    }
}

fn check_thermal_inputs(particle_number: f64, temperature: f64) -> Result<()> {
    if !(particle_number > 0.0 && particle_number.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "particle number must be positive, got {particle_number}"
        )));
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(())
}

/// Solves `occupancy(E0 - gap) = N` for the gap by bisection on `ln gap`.
///
/// The initial upper gap is `max(10 T, 10 E0 + 1)`, doubled until the
/// occupancy falls below `N`; the lower gap starts at `T / (2N)` (ground
/// occupancy ~ 2N) and is halved until the occupancy exceeds `N`.
pub fn solve_gap<S: Spectrum + ?Sized>(spectrum: &S, particle_number: f64, temperature: f64) -> Result<f64> {
    check_thermal_inputs(particle_number, temperature)?;
    let e0 = spectrum.ground_energy();
    if !e0.is_finite() {
        return Err(Error::InvalidParameter("empty mode list".into()));
    }
    let f = |gap: f64| spectrum.occupancy(gap, temperature) - particle_number;
    let fail = |lo: f64, hi: f64, iterations: usize| Error::SolverFailure {
        mu_low: e0 - hi,
        mu_high: e0 - lo,
        iterations,
    };

    let mut iterations = 0;
    let mut hi = (10.0 * temperature).max(10.0 * e0.abs() + 1.0);
    while f(hi) > 0.0 {
        hi *= 2.0;
        iterations += 1;
        if iterations > 200 || !hi.is_finite() {
            return Err(fail(0.0, hi, iterations));
        }
    }
    let mut lo = (temperature / (2.0 * particle_number)).min(hi);
    while f(lo) < 0.0 {
        lo *= 0.5;
        iterations += 1;
        if iterations > 2000 || lo == 0.0 {
            return Err(fail(lo, hi, iterations));
        }
    }

    while iterations < SOLVER_MAX_ITERATIONS {
        let mid = (lo * hi).sqrt();
        let r = f(mid);
        if r.abs() <= SOLVER_RELATIVE_TOLERANCE * particle_number {
            return Ok(mid);
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if hi / lo - 1.0 < 4.0 * f64::EPSILON {
            break;
        }
    }
    let best = if f(lo).abs() < f(hi).abs() { lo } else { hi };
    if f(best).abs() <= PARTICLE_NUMBER_TOLERANCE * particle_number {
        Ok(best)
    } else {
        Err(fail(lo, hi, iterations))
    }
}

/// Grand-canonical chemical potential for the given modes.
pub fn solve_chemical_potential(modes: &[Mode], particle_number: f64, temperature: f64) -> Result<f64> {
    let gap = solve_gap(modes, particle_number, temperature)?;
    Ok(modes.ground_energy() - gap)
}

/// Bose-Einstein occupations `1 / (exp((E_k - mu) / T) - 1)`.
pub fn occupations(modes: &[Mode], mu: f64, temperature: f64) -> Result<Vec<f64>> {
    let e0 = modes.ground_energy();
    if modes.is_empty() {
        return Err(Error::InvalidParameter("empty mode list".into()));
    }
    if !(mu < e0) {
        return Err(Error::ChemicalPotentialTooHigh { mu, ground_energy: e0 });
    }
    check_thermal_inputs(1.0, temperature)?;
    Ok(occupations_from_gap(modes, e0 - mu, temperature))
}

fn occupations_from_gap(modes: &[Mode], gap: f64, temperature: f64) -> Vec<f64> {
    let e0 = modes.ground_energy();
    modes.iter().map(|m| bose(m.energy - e0, gap, temperature)).collect()
}

/// Exact canonical mean occupations by enumerating every configuration
/// with `sum n_k = N`, weighted by `exp(-E_total / T)`.
pub fn canonical_occupations_bruteforce(modes: &[Mode], particle_number: usize, temperature: f64) -> Result<Vec<f64>> {
    if particle_number == 0 || particle_number > CANONICAL_MAX_PARTICLES {
        return Err(Error::RegimeExceeded(format!(
            "canonical enumeration needs 1 <= N <= {CANONICAL_MAX_PARTICLES}, got {particle_number}"
        )));
    }
    if modes.is_empty() || modes.len() > CANONICAL_MAX_MODES {
        return Err(Error::RegimeExceeded(format!(
            "canonical enumeration needs 1 to {CANONICAL_MAX_MODES} modes, got {}",
            modes.len()
        )));
    }
    check_thermal_inputs(particle_number as f64, temperature)?;

    let e0 = modes.ground_energy();
    let m = modes.len();
    let mut weighted = vec![0.0; m];
    let mut partition_function = 0.0;
    let mut config = vec![0usize; m];

    // Walks all compositions of N into m parts.
    #[allow(clippy::too_many_arguments)]
    fn visit(
        slot: usize,
        remaining: usize,
        config: &mut [usize],
        modes: &[Mode],
        e0: f64,
        temperature: f64,
        weighted: &mut [f64],
        z: &mut f64,
    ) {
        if slot + 1 == config.len() {
            config[slot] = remaining;
            let excitation: f64 = config
                .iter()
                .zip(modes)
                .map(|(&n, mode)| n as f64 * (mode.energy - e0))
                .sum();
            let w = (-excitation / temperature).exp();
            *z += w;
            for (acc, &n) in weighted.iter_mut().zip(config.iter()) {
                *acc += n as f64 * w;
            }
            return;
        }
        for n in (0..=remaining).rev() {
            config[slot] = n;
            visit(slot + 1, remaining - n, config, modes, e0, temperature, weighted, z);
        }
    }
    visit(
        0,
        particle_number,
        &mut config,
        modes,
        e0,
        temperature,
        &mut weighted,
        &mut partition_function,
    );
    Ok(weighted.into_iter().map(|w| w / partition_function).collect())
}

/// Ideal-gas condensation temperature `2 pi (N / (V zeta(3/2)))^(2/3)` in a
/// three-dimensional box.
pub fn critical_temperature(particle_number: f64, volume: f64, dimension: usize) -> Result<f64> {
    if dimension != 3 {
        return Err(Error::InvalidParameter(format!(
            "no condensation temperature for an ideal gas in {dimension}D at fixed density"
        )));
    }
    if !(particle_number >= 1.0) || !(volume > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need N >= 1 and positive volume, got N = {particle_number}, V = {volume}"
        )));
    }
    Ok(2.0 * PI * (particle_number / (volume * ZETA_3_2)).powf(2.0 / 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    GrandCanonical,
    CanonicalBruteforce,
}

/// Occupations of an explicit mode list at one temperature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalState {
    pub temperature: f64,
    pub particle_number: f64,
    /// `None` for the canonical enumerator.
    pub chemical_potential: Option<f64>,
    /// Aligned with the mode list the state was built from.
    pub occupations: Vec<f64>,
    pub ensemble: Ensemble,
    /// `1 - sum(occupations) / N`: weight living above the mode cutoff.
    pub tail_weight: f64,
}

impl ThermalState {
    /// Grand-canonical state of the full box with `N` particles, resolved
    /// on the explicit modes of `spectrum`.
    pub fn grand_canonical(spectrum: &BoxSpectrum, particle_number: f64, temperature: f64) -> Result<Self> {
        let gap = solve_gap(spectrum, particle_number, temperature)?;
        let occupations = occupations_from_gap(spectrum.modes(), gap, temperature);
        let explicit: f64 = occupations.iter().sum();
        Ok(ThermalState {
            temperature,
            particle_number,
            chemical_potential: Some(spectrum.ground_energy() - gap),
            occupations,
            ensemble: Ensemble::GrandCanonical,
            tail_weight: (1.0 - explicit / particle_number).max(0.0),
        })
    }

    /// Grand-canonical state where the given modes are the whole spectrum.
    pub fn grand_canonical_truncated(modes: &[Mode], particle_number: f64, temperature: f64) -> Result<Self> {
        let gap = solve_gap(modes, particle_number, temperature)?;
        Ok(ThermalState {
            temperature,
            particle_number,
            chemical_potential: Some(modes.ground_energy() - gap),
            occupations: occupations_from_gap(modes, gap, temperature),
            ensemble: Ensemble::GrandCanonical,
            tail_weight: 0.0,
        })
    }

    pub fn canonical(modes: &[Mode], particle_number: usize, temperature: f64) -> Result<Self> {
        Ok(ThermalState {
            temperature,
            particle_number: particle_number as f64,
            chemical_potential: None,
            occupations: canonical_occupations_bruteforce(modes, particle_number, temperature)?,
            ensemble: Ensemble::CanonicalBruteforce,
            tail_weight: 0.0,
        })
    }

    /// `<n_0> / N` for the lowest mode.
    pub fn condensate_fraction(&self) -> f64 {
        self.occupations[0] / self.particle_number
    }

    /// Occupations divided by their own sum (trace-1 weights on the explicit modes).
    pub fn normalized_weights(&self) -> Vec<f64> {
        let total: f64 = self.occupations.iter().sum();
        self.occupations.iter().map(|n| n / total).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF_PI2: f64 = 0.5 * PI * PI;

    #[test]
    fn one_dimensional_spectrum() {
        let modes = box_modes(1, 3).unwrap();
        let e: Vec<f64> = modes.iter().map(|m| m.energy / HALF_PI2).collect();
        assert_eq!(e.len(), 3);
        for (got, want) in e.iter().zip([1.0, 4.0, 9.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn single_three_dimensional_mode() {
        let modes = box_modes(3, 1).unwrap();
        assert_eq!(modes.len(), 1);
        assert!((modes[0].energy - 3.0 * HALF_PI2).abs() < 1e-12);
    }

    #[test]
    fn three_dimensional_cutoff_two() {
        // Brute enumeration: sums of three squares from {1, 4}.
        let modes = box_modes(3, 2).unwrap();
        assert_eq!(modes.len(), 8);
        assert!((modes[0].energy - 3.0 * HALF_PI2).abs() < 1e-12);
        let first_excited: Vec<_> = modes[1..4].iter().map(|m| m.quantum_numbers.clone()).collect();
        assert_eq!(first_excited, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        for m in &modes[1..4] {
            assert!((m.energy - 6.0 * HALF_PI2).abs() < 1e-12);
        }
        assert!(modes[4].energy > modes[3].energy);
    }

    #[test]
    fn zero_cutoff_rejected() {
        assert!(box_modes(1, 0).is_err());
        assert!(box_modes(4, 2).is_err());
    }

    #[test]
    fn single_mode_closed_form_mu() {
        let modes = vec![Mode::with_energy(vec![1], 0.0)];
        let mu = solve_chemical_potential(&modes, 5.0, 1.0).unwrap();
        assert!((mu + (6.0f64 / 5.0).ln()).abs() < 1e-10);
        assert!((mu + 0.182_321_6).abs() < 1e-7);
    }

    #[test]
    fn cold_limit_saturates_ground_mode() {
        let modes = box_modes(1, 8).unwrap();
        let n = 100.0;
        let t = 1e-3;
        let mu = solve_chemical_potential(&modes, n, t).unwrap();
        assert!(mu < modes[0].energy);
        assert!(modes[0].energy - mu < 1e-4);
        let occ = occupations(&modes, mu, t).unwrap();
        assert!((occ[0] - n).abs() < 1e-6);
    }

    #[test]
    fn bisection_meets_particle_number() {
        let modes = box_modes(1, 8).unwrap();
        let mu = solve_chemical_potential(&modes, 100.0, 50.0).unwrap();
        let total: f64 = occupations(&modes, mu, 50.0).unwrap().iter().sum();
        assert!((total - 100.0).abs() < 1e-7);
    }

    #[test]
    fn occupation_values() {
        let modes = vec![Mode::with_energy(vec![1], 0.0), Mode::with_energy(vec![2], 1.0)];
        let occ = occupations(&modes, -0.5, 1.0).unwrap();
        assert!((occ[0] - 1.0 / (0.5f64.exp() - 1.0)).abs() < 1e-14);
        assert!((occ[0] - 1.541_494).abs() < 1e-6);
        assert!((occ[1] - 0.287_216_9).abs() < 1e-7);

        // E - mu = T ln 2 gives exactly one particle.
        let t = 3.0;
        let one = occupations(&[Mode::with_energy(vec![1], 2.0)], 2.0 - t * 2f64.ln(), t).unwrap();
        assert!((one[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn occupations_reject_mu_at_ground() {
        let modes = box_modes(1, 2).unwrap();
        assert!(matches!(
            occupations(&modes, modes[0].energy, 1.0),
            Err(Error::ChemicalPotentialTooHigh { .. })
        ));
    }

    #[test]
    fn frozen_gas_has_no_occupation() {
        let modes = box_modes(1, 4).unwrap();
        let occ = occupations(&modes, modes[0].energy - 1.0, 1e-3).unwrap();
        assert!(occ.iter().all(|&n| n < 1e-300));
    }

    #[test]
    fn canonical_single_particle_is_boltzmann() {
        let modes = box_modes(1, 4).unwrap();
        let t = 20.0;
        let occ = canonical_occupations_bruteforce(&modes, 1, t).unwrap();
        let z: f64 = modes.iter().map(|m| (-m.energy / t).exp()).sum();
        for (n, m) in occ.iter().zip(&modes) {
            assert!((n - (-m.energy / t).exp() / z).abs() < 1e-14);
        }
    }

    #[test]
    fn canonical_two_particles_two_levels() {
        let modes = vec![Mode::with_energy(vec![1], 0.0), Mode::with_energy(vec![2], 1.0)];
        let occ = canonical_occupations_bruteforce(&modes, 2, 1.0).unwrap();
        let e1 = (-1.0f64).exp();
        let e2 = (-2.0f64).exp();
        let expected = (2.0 + e1) / (1.0 + e1 + e2);
        assert!((occ[0] - expected).abs() < 1e-14);
        assert!((occ[0] - 1.575_210).abs() < 1e-6);
        assert!((occ.iter().sum::<f64>() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_cold_limit() {
        let modes = box_modes(1, 5).unwrap();
        let occ = canonical_occupations_bruteforce(&modes, 4, 1e-2).unwrap();
        assert!((occ[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_regime_bounds() {
        let modes = box_modes(1, 9).unwrap();
        assert!(canonical_occupations_bruteforce(&modes, 2, 1.0).is_err());
        let modes = box_modes(1, 3).unwrap();
        assert!(canonical_occupations_bruteforce(&modes, 7, 1.0).is_err());
    }

    #[test]
    fn critical_temperature_values() {
        let v = 1.0;
        let tc = critical_temperature(ZETA_3_2 * v, v, 3).unwrap();
        assert!((tc - 2.0 * PI).abs() < 1e-12);
        let tc4 = critical_temperature(1e4, 1.0, 3).unwrap();
        assert!((tc4 - 1_537.527_233_813).abs() < 1e-6);
        let ratio = critical_temperature(2e4, 1.0, 3).unwrap() / tc4;
        assert!((ratio - 2f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!(critical_temperature(10.0, 1.0, 1).is_err());
    }

    #[test]
    fn tail_matches_explicit_enumeration() {
        // Tail of cutoff 3 against explicit modes far past the cutoff.
        for &(dim, t) in &[(1usize, 400.0), (2, 300.0), (3, 150.0)] {
            let small = BoxSpectrum::new(dim, 3).unwrap();
            let big = box_modes(dim, if dim == 1 { 200 } else { 40 }).unwrap();
            let gap = 2.5;
            let e0 = small.ground_energy();
            let explicit_tail: f64 = big
                .iter()
                .filter(|m| m.quantum_numbers.iter().any(|&n| n > 3))
                .map(|m| bose(m.energy - e0, gap, t))
                .sum();
            let tail = small.tail_occupancy(gap, t);
            assert!(
                ((tail - explicit_tail) / explicit_tail).abs() < 1e-10,
                "{dim}D: {tail} vs {explicit_tail}"
            );
        }
    }

    #[test]
    fn full_spectrum_state_reports_tail() {
        let spectrum = BoxSpectrum::new(3, 8).unwrap();
        let n = 1e4;
        let tc = critical_temperature(n, 1.0, 3).unwrap();
        let cold = ThermalState::grand_canonical(&spectrum, n, 0.1 * tc).unwrap();
        let hot = ThermalState::grand_canonical(&spectrum, n, 2.0 * tc).unwrap();
        assert!(cold.tail_weight < 0.01);
        assert!(hot.tail_weight > 0.5);
        let total = spectrum.occupancy(
            spectrum.ground_energy() - hot.chemical_potential.unwrap(),
            hot.temperature,
        );
        assert!(((total - n) / n).abs() < 1e-7);
    }
}
