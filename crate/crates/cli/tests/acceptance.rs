//! Acceptance gate: `cargo test -p odlro-cli --test acceptance` prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use odlro_cli::commands::run_sweep;
use odlro_cli::config::RunConfig;
use odlro_core::bose_gas::{box_modes, canonical_occupations_bruteforce, Mode, ThermalState};
use odlro_core::fock_extraction::{analytic_extraction_negativity, extracted_state};
use odlro_core::geometry::{gram_matrices, PartitionSpec};
use odlro_core::negativity::{
    negativity_analytic, negativity_gapped, negativity_ground_state_gapped, pt_oracle, ChiVector,
};
use odlro_core::odlro::{odlro_detect, rho1_position, SpectrumInput};
use odlro_core::quadrature::adaptive_simpson;
use odlro_core::sweep::{GridSpacing, PreparedSweep, SweepSetup, TemperatureGrid};
use odlro_core::validate::{large_separation_value, random_partitions, ENSEMBLE_TEMPERATURES};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn run(id: u32, title: &str, budget: Duration, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let ok = v.ok && in_time;
    println!(
        "{} criterion {id} ({title}): {}; {:.2} s of {} s budget",
        if ok { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

fn criterion_1() -> Verdict {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let g = PI * i as f64 / 99.0;
        let d = (extracted_state(g).negativity().negativity - analytic_extraction_negativity(g)).abs();
        worst = worst.max(d);
    }
    let peak = analytic_extraction_negativity(FRAC_PI_2);
    let peak_oracle = extracted_state(FRAC_PI_2).negativity().negativity;
    let ok = worst <= 1e-12 && (peak - 0.5).abs() <= 1e-12 && (peak_oracle - 0.5).abs() <= 1e-12;
    verdict(
        ok,
        format!("max |formula - eigensolver| = {worst:.1e}, N(pi/2) = {peak}"),
    )
}

fn criterion_2() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for (dim, grid) in [
        (1usize, TemperatureGrid::new(1.0, 1e4, 5, GridSpacing::Log).unwrap()),
        (3, TemperatureGrid::new(0.1, 3.0, 6, GridSpacing::Log).unwrap()),
    ] {
        for cutoff in [2u32, 4, 8] {
            for n in [1e2, 1e4] {
                let sweep = PreparedSweep::new(SweepSetup {
                    dimension: dim,
                    cutoff,
                    particle_number: n,
                    partition: PartitionSpec::half_box(),
                })
                .unwrap();
                for t in grid.values() {
                    let case = format!("dim {dim}, cutoff {cutoff}, N {n}, T {t}");
                    let p = match sweep.evaluate(sweep.absolute_temperature(t), true) {
                        Ok(p) => p,
                        Err(e) => return verdict(false, format!("{case}: {e}")),
                    };
                    let oracle = match p.oracle.unwrap() {
                        Ok(r) => r,
                        Err(e) => return verdict(false, format!("{case}: oracle {e}")),
                    };
                    let formula = 0.5 * p.chi_norm_squared.sqrt();
                    let d = (formula - oracle.value).abs();
                    if d > 1e-9 || oracle.negative_eigenvalue_count != Some(1) {
                        return verdict(
                            false,
                            format!(
                                "{case}: formula {formula} vs oracle {} ({:?} negative eigenvalues)",
                                oracle.value, oracle.negative_eigenvalue_count
                            ),
                        );
                    }
                    worst = worst.max(d);
                    points += 1;
                }
            }
        }
    }
    verdict(
        true,
        format!("{points} points, max diff {worst:.1e}, one negative eigenvalue each"),
    )
}

fn criterion_3() -> Verdict {
    // T = 0 fixture, closed form fed by quadrature-computed probabilities.
    let modes = box_modes(1, 4).unwrap();
    let part = PartitionSpec::new(0.25, 0.75).unwrap();
    let grams = gram_matrices(&modes, &part).unwrap();
    let mut ground = vec![0.0; modes.len()];
    ground[0] = 1.0;
    let gapped = negativity_gapped(&ChiVector::new(&ground, &grams).unwrap(), &grams)
        .unwrap()
        .value;
    let density = |x: f64| 2.0 * (PI * x).sin().powi(2);
    let pa = adaptive_simpson(density, 0.0, 0.25, 1e-14);
    let pb = adaptive_simpson(density, 0.75, 1.0, 1e-14);
    let pc = adaptive_simpson(density, 0.25, 0.75, 1e-14);
    let closed = negativity_ground_state_gapped(pa, pb, pc).unwrap().value;
    if (gapped - closed).abs() > 1e-12 || (gapped - 9.964e-3).abs() > 5e-7 {
        return verdict(false, format!("gapped formula {gapped} vs T = 0 form {closed}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let partitions: Vec<_> = random_partitions(&mut rng, 20, 4)
        .into_iter()
        .filter(|p| !p.is_adjacent())
        .collect();
    let mut worst: f64 = 0.0;
    for p in &partitions {
        let grams = gram_matrices(&modes, p).unwrap();
        for t in [2.0, 10.0, 40.0, 150.0, 600.0] {
            let occ = ThermalState::grand_canonical_truncated(&modes, 100.0, t)
                .unwrap()
                .occupations;
            let chi = ChiVector::new(&occ, &grams).unwrap();
            let formula = negativity_analytic(&chi, &grams, p).unwrap().value;
            let oracle = pt_oracle(&occ, &modes, p, &grams).unwrap().value;
            let d = (formula - oracle).abs();
            if d > 1e-9 {
                return verdict(false, format!("a {}, b {}, T {t}: {formula} vs {oracle}", p.a(), p.b()));
            }
            worst = worst.max(d);
        }
    }
    verdict(
        partitions.len() == 10,
        format!(
            "T = 0: {gapped:.6e} (diff {:.1e}); {} gapped partitions x 5 T, max diff {worst:.1e}",
            (gapped - closed).abs(),
            partitions.len()
        ),
    )
}

fn criterion_4() -> Verdict {
    let cfg = RunConfig::default();
    let out = run_sweep(&cfg, false).unwrap();
    let table = &out.tables[0];
    let col = |name: &str| -> Vec<f64> {
        table
            .column(name)
            .unwrap()
            .into_iter()
            .map(|c| c.as_f64().unwrap_or(f64::NAN))
            .collect()
    };
    let (t, neg) = (col("T_over_Tc"), col("negativity_analytic"));
    let max_slope = t
        .windows(2)
        .zip(neg.windows(2))
        .map(|(tw, nw)| ((nw[1] - nw[0]) / (tw[1] - tw[0])).abs())
        .fold(0.0, f64::max);

    let sweep = PreparedSweep::new(cfg.sweep_setup()).unwrap();
    let cold = sweep.evaluate(sweep.absolute_temperature(0.25), false).unwrap();
    let hot = sweep.evaluate(sweep.absolute_temperature(2.0), false).unwrap();
    let gap_to_half_cf = (cold.analytic.value - 0.5 * cold.condensate_fraction()).abs();
    let ratio = cold.analytic.value / hot.analytic.value;
    let lowest = (neg[0] - 0.5).abs();
    let ok = out.row_errors == 0
        && gap_to_half_cf <= 0.05
        && ratio >= 5.0
        && (0.5..=1.5).contains(&max_slope)
        && lowest <= 0.05;
    verdict(
        ok,
        format!(
            "N(0.25) = {:.4} vs cf/2 = {:.4}; N(0.25)/N(2) = {ratio:.1}; max |dN/d(T/Tc)| = {max_slope:.3}; N(0.1) = {:.4}",
            cold.analytic.value,
            0.5 * cold.condensate_fraction(),
            neg[0]
        ),
    )
}

fn criterion_5() -> Verdict {
    let mut worst_sum: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for cutoff in [4u32, 6] {
        let modes = box_modes(1, cutoff).unwrap();
        for n in 1..=4usize {
            for t in ENSEMBLE_TEMPERATURES {
                let canonical = canonical_occupations_bruteforce(&modes, n, t).unwrap();
                worst_sum = worst_sum.max((canonical.iter().sum::<f64>() - n as f64).abs());
                let gc = ThermalState::grand_canonical_truncated(&modes, n as f64, t).unwrap();
                worst_gap = worst_gap.max((canonical[0] / n as f64 - gc.condensate_fraction()).abs());
            }
        }
    }
    verdict(
        worst_sum <= 1e-12 && worst_gap <= 0.15,
        format!("max |sum n - N| = {worst_sum:.1e}, max condensate-fraction gap = {worst_gap:.3}"),
    )
}

fn criterion_6() -> Verdict {
    let modes: Vec<Mode> = box_modes(1, 6).unwrap();
    let cold = ThermalState::grand_canonical_truncated(&modes, 100.0, 0.01).unwrap();
    let value = rho1_position(&cold.occupations, &modes, &[0.25], &[0.75]);
    let at_zero = odlro_detect(
        SpectrumInput::IdealGas {
            occupations: &cold.occupations,
            particle_number: cold.particle_number,
        },
        0.1,
    )
    .unwrap();
    let uniform = odlro_detect(SpectrumInput::Eigenvalues(&[1.0; 16]), 0.1).unwrap();

    let sweep = PreparedSweep::new(RunConfig::default().sweep_setup()).unwrap();
    let grid: Vec<f64> = TemperatureGrid::new(0.1, 3.0, 50, GridSpacing::Log)
        .unwrap()
        .values()
        .into_iter()
        .filter(|t| (0.1..=1.3).contains(t))
        .collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&t| {
            let state = sweep.thermal_state(sweep.absolute_temperature(t)).unwrap();
            large_separation_value(&sweep, &state.occupations)
        })
        .collect();
    let monotone = values.windows(2).all(|w| w[0] > w[1]);
    let ok = (value - 1.0).abs() <= 1e-6
        && (at_zero.alpha - 1.0).abs() <= 1e-12
        && at_zero.flag
        && uniform.alpha == 1.0 / 16.0
        && !uniform.flag
        && monotone;
    verdict(
        ok,
        format!(
            "rho1(0.25, 0.75) V = {value:.9}; alpha(T=0) = {} ({}); alpha(uniform 16) = {} ({}); \
             large-separation rho1 rises monotonically from {:.4} to {:.4} over T/Tc in [{:.2}, {:.2}]",
            at_zero.alpha,
            at_zero.flag,
            uniform.alpha,
            uniform.flag,
            values.last().unwrap(),
            values[0],
            grid[0],
            grid.last().unwrap()
        ),
    )
}

fn criterion_7() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_odlro-lab");
    let clean = Command::new(bin).args(["validate", "--quiet"]).output().unwrap();
    let faulty = Command::new(bin)
        .args(["validate", "--quiet", "--inject-fault", "gram-psd"])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&clean.stdout);
    let passes = stdout.lines().filter(|l| l.starts_with("PASS")).count();
    let fails = stdout.lines().filter(|l| l.starts_with("FAIL")).count();
    let fault_stderr = String::from_utf8_lossy(&faulty.stderr);
    let ok = clean.status.success()
        && fails == 0
        && passes > 0
        && !faulty.status.success()
        && fault_stderr.contains("gram matrix");
    verdict(
        ok,
        format!(
            "validate exit {:?} with {passes} properties passing; injected Gram fault exit {:?}",
            clean.status.code(),
            faulty.status.code()
        ),
    )
}

fn main() {
    let results = [
        run(1, "extraction protocol", Duration::from_secs(1), criterion_1),
        run(2, "adjacent oracle equivalence", Duration::from_secs(120), criterion_2),
        run(3, "gapped partition consistency", Duration::from_secs(60), criterion_3),
        run(4, "condensation crossover", Duration::from_secs(300), criterion_4),
        run(5, "ensemble oracle", Duration::from_secs(60), criterion_5),
        run(6, "ODLRO diagnostics", Duration::from_secs(60), criterion_6),
        run(7, "structural invariants", Duration::from_secs(300), criterion_7),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
