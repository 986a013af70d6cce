//! Slab partitions `A | C | B` of the unit box and the overlap data they induce.
//!
//! Region A is `[0, a]`, the gap C is `[a, b]` and B is `[b, 1]` along the
//! split axis. Box eigenfunctions factorize, so every integral reduces to the
//! split axis; the other axes contribute Kronecker deltas.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bose_gas::Mode;
use crate::error::{Error, Result};
use crate::linalg::min_symmetric_eigenvalue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    A,
    B,
    C,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Region::A => "A",
            Region::B => "B",
            Region::C => "C",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    a: f64,
    b: f64,
    axis: usize,
}

impl PartitionSpec {
    /// Split along the first axis.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_axis(a, b, 0)
    }

    pub fn with_axis(a: f64, b: f64, axis: usize) -> Result<Self> {
        if !(a > 0.0 && a <= b && b < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "partition needs 0 < a <= b < 1, got a = {a}, b = {b}"
            )));
        }
        if axis > 2 {
            return Err(Error::InvalidParameter(format!("split axis {axis} out of range")));
        }
        Ok(PartitionSpec { a, b, axis })
    }

    pub fn half_box() -> Self {
        PartitionSpec {
            a: 0.5,
            b: 0.5,
            axis: 0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    /// No gap region.
    pub fn is_adjacent(&self) -> bool {
        self.a == self.b
    }

    pub fn is_half_box(&self) -> bool {
        self.a == 0.5 && self.b == 0.5
    }

    pub fn bounds(&self, region: Region) -> (f64, f64) {
        match region {
            Region::A => (0.0, self.a),
            Region::C => (self.a, self.b),
            Region::B => (self.b, 1.0),
        }
    }
}

/// `prod_i sqrt(2) sin(n_i pi x_i)`.
pub fn mode_wavefunction_value(mode: &Mode, x: &[f64]) -> f64 {
    mode.quantum_numbers
        .iter()
        .zip(x)
        .map(|(&n, &xi)| SQRT_2 * (n as f64 * PI * xi).sin())
        .product()
}

/// Primitive of `2 sin(n pi x) sin(m pi x)`.
fn product_primitive(n: u32, m: u32, x: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    if n == m {
        x - (2.0 * PI * n * x).sin() / (2.0 * PI * n)
    } else {
        ((n - m) * PI * x).sin() / ((n - m) * PI) - ((n + m) * PI * x).sin() / ((n + m) * PI)
    }
}

/// `int_lo^hi 2 sin(n pi x) sin(m pi x) dx`.
pub fn split_axis_integral(n: u32, m: u32, lo: f64, hi: f64) -> f64 {
    product_primitive(n, m, hi) - product_primitive(n, m, lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionProbabilities {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RegionProbabilities {
    pub fn get(&self, region: Region) -> f64 {
        match region {
            Region::A => self.a,
            Region::B => self.b,
            Region::C => self.c,
        }
    }
}

fn split_number(mode: &Mode, partition: &PartitionSpec) -> Result<u32> {
    mode.quantum_numbers.get(partition.axis).copied().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "split axis {} does not exist for a {}D mode",
            partition.axis,
            mode.dimension()
        ))
    })
}

/// Probability of finding the particle of `mode` in each region.
pub fn partition_probabilities(mode: &Mode, partition: &PartitionSpec) -> Result<RegionProbabilities> {
    let n = split_number(mode, partition)?;
    let at = |x| product_primitive(n, n, x);
    // The primitive vanishes at 0 and equals 1 at 1.
    let (fa, fb) = (at(partition.a), at(partition.b));
    Ok(RegionProbabilities {
        a: fa,
        b: 1.0 - fb,
        c: fb - fa,
    })
}

/// Unnormalized overlap `int_M phi_k phi_l` over a region.
pub fn region_integral(k: &Mode, l: &Mode, region: Region, partition: &PartitionSpec) -> Result<f64> {
    if k.dimension() != l.dimension() {
        return Err(Error::DimensionMismatch {
            expected: k.dimension(),
            found: l.dimension(),
        });
    }
    let (n, m) = (split_number(k, partition)?, split_number(l, partition)?);
    let transverse_equal = k
        .quantum_numbers
        .iter()
        .zip(&l.quantum_numbers)
        .enumerate()
        .all(|(i, (p, q))| i == partition.axis || p == q);
    if !transverse_equal {
        return Ok(0.0);
    }
    let (lo, hi) = partition.bounds(region);
    Ok(split_axis_integral(n, m, lo, hi))
}

/// Overlap of the normalized restrictions, `<M_k|M_l>`.
pub fn overlap(k: &Mode, l: &Mode, region: Region, partition: &PartitionSpec) -> Result<f64> {
    if region == Region::C {
        return Err(Error::InvalidParameter(
            "overlaps are defined for regions A and B".into(),
        ));
    }
    let pk = partition_probabilities(k, partition)?.get(region);
    let pl = partition_probabilities(l, partition)?.get(region);
    for (p, mode) in [(pk, k), (pl, l)] {
        if !(p > 0.0) {
            return Err(Error::EmptyRegion {
                region,
                mode: mode.quantum_numbers[partition.axis] as usize,
            });
        }
    }
    if k == l {
        return Ok(1.0);
    }
    let raw = region_integral(k, l, region, partition)?;
    Ok((raw / (pk * pl).sqrt()).clamp(-1.0, 1.0))
}

/// Partition probabilities and normalized Gram matrices for a mode list.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSet {
    pub p_a: Vec<f64>,
    pub p_b: Vec<f64>,
    pub p_c: Vec<f64>,
    pub gram_a: DMatrix<f64>,
    pub gram_b: DMatrix<f64>,
}

pub fn gram_matrices(modes: &[Mode], partition: &PartitionSpec) -> Result<GramSet> {
    if modes.is_empty() {
        return Err(Error::InvalidParameter("empty mode list".into()));
    }
    let n = modes.len();
    let probs = modes
        .iter()
        .map(|m| partition_probabilities(m, partition))
        .collect::<Result<Vec<_>>>()?;
    let mut gram_a = DMatrix::<f64>::identity(n, n);
    let mut gram_b = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let ga = overlap(&modes[i], &modes[j], Region::A, partition)?;
            let gb = overlap(&modes[i], &modes[j], Region::B, partition)?;
            gram_a[(i, j)] = ga;
            gram_a[(j, i)] = ga;
            gram_b[(i, j)] = gb;
            gram_b[(j, i)] = gb;
        }
    }
    let grams = GramSet {
        p_a: probs.iter().map(|p| p.a).collect(),
        p_b: probs.iter().map(|p| p.b).collect(),
        p_c: probs.iter().map(|p| p.c).collect(),
        gram_a,
        gram_b,
    };
    if partition.is_half_box() {
        let split: Vec<u32> = modes.iter().map(|m| m.quantum_numbers[partition.axis]).collect();
        let err = grams.mirror_error(&split);
        if err > 1e-12 {
            return Err(Error::InvariantViolation(format!(
                "half-box mirror identity off by {err:e}"
            )));
        }
    }
    Ok(grams)
}

impl GramSet {
    pub fn len(&self) -> usize {
        self.p_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_a.is_empty()
    }

    /// Largest gap weight; zero for adjacent partitions.
    pub fn max_gap_weight(&self) -> f64 {
        self.p_c.iter().copied().fold(0.0, f64::max)
    }

    /// `max |gram_b - (-1)^(n+m) gram_a|` given split-axis quantum numbers.
    pub fn mirror_error(&self, split_numbers: &[u32]) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let sign = if (split_numbers[i] + split_numbers[j]).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                worst = worst.max((self.gram_b[(i, j)] - sign * self.gram_a[(i, j)]).abs());
            }
        }
        worst
    }

    /// Element-wise product `gram_a o gram_b`.
    pub fn hadamard(&self) -> DMatrix<f64> {
        self.gram_a.component_mul(&self.gram_b)
    }

    /// Checks probability sums, symmetry, unit diagonals, entry bounds and
    /// positive semidefiniteness (min eigenvalue >= -1e-10) of both Grams and
    /// of their Hadamard product.
    pub fn check_invariants(&self) -> Result<()> {
        for k in 0..self.len() {
            let s = self.p_a[k] + self.p_b[k] + self.p_c[k];
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::InvariantViolation(format!(
                    "mode {k}: region probabilities sum to {s}"
                )));
            }
        }
        for (name, g) in [("A", &self.gram_a), ("B", &self.gram_b)] {
            let n = g.nrows();
            for i in 0..n {
                if (g[(i, i)] - 1.0).abs() > 1e-12 {
                    return Err(Error::InvariantViolation(format!(
                        "gram {name} diagonal {i} is {}",
                        g[(i, i)]
                    )));
                }
                for j in 0..n {
                    if (g[(i, j)] - g[(j, i)]).abs() > 1e-14 {
                        return Err(Error::InvariantViolation(format!("gram {name} not symmetric")));
                    }
                    if g[(i, j)].abs() > 1.0 + 1e-12 {
                        return Err(Error::InvariantViolation(format!(
                            "gram {name} entry ({i},{j}) = {} outside [-1, 1]",
                            g[(i, j)]
                        )));
                    }
                }
            }
        }
        for (region, g) in [(Region::A, &self.gram_a), (Region::B, &self.gram_b)] {
            let min = min_symmetric_eigenvalue(g);
            if min < -1e-10 {
                return Err(Error::IllConditionedGram {
                    region,
                    min_eigenvalue: min,
                    threshold: -1e-10,
                    modes: g.nrows(),
                });
            }
        }
        let min = min_symmetric_eigenvalue(&self.hadamard());
        if min < -1e-10 {
            return Err(Error::InvariantViolation(format!(
                "hadamard product of grams has eigenvalue {min:e}"
            )));
        }
        Ok(())
    }
}
