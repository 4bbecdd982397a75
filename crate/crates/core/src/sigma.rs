//! Permutations and sigma-points.
//!
//! Permutations are enumerated in the order of Heap's algorithm (iterative
//! form, 0-based): start from the identity and, with counters `c[i]`, swap
//! `a[0] <-> a[i]` when `i` is even and `a[c[i]] <-> a[i]` when `i` is odd.
//! Indices into a [`SigmaPointSet`] refer to this order, so certificates are
//! stable across runs.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{MocError, Result};

/// Default enumeration cap, `10!`.
pub const DEFAULT_CAP: u64 = 3_628_800;

/// Largest `n` whose permutations fit the packed provenance table.
pub const MAX_PACKED_N: usize = 16;

/// Running product magnitudes outside `[SCALE_LOW, SCALE_HIGH]` are flagged.
pub const SCALE_LOW: f64 = 1e-150;
pub const SCALE_HIGH: f64 = 1e150;

/// A bijection on `{0, .., n-1}` stored by its images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(MocError::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// One-line notation, 0-based images separated by spaces: `"1 0 2"`.
    pub fn one_line(&self) -> String {
        self.to_string()
    }

    fn pack(images: &[usize]) -> u64 {
        images
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &v)| acc | ((v as u64) << (4 * i)))
    }

    fn unpack(packed: u64, n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| ((packed >> (4 * i)) & 0xf) as usize).collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = MocError;

    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| MocError::InvalidPermutation(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = MocError;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

/// `n!`, or `None` on overflow.
pub fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn check_capacity(n: usize, cap: u64) -> Result<u128> {
    let needed = factorial(n).unwrap_or(u128::MAX);
    if needed > cap as u128 {
        return Err(MocError::Capacity {
            what: "permutation enumeration",
            needed,
            cap: cap as u128,
        });
    }
    Ok(needed)
}

/// Iterator over all permutations of `0..n` in Heap order.
#[derive(Debug, Clone)]
pub struct Permutations {
    state: HeapState,
    pending: bool,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.pending {
            self.pending = false;
            return Some(Permutation {
                images: self.state.current.clone(),
            });
        }
        if self.state.advance() {
            Some(Permutation {
                images: self.state.current.clone(),
            })
        } else {
            None
        }
    }
}

/// All `n!` permutations, or a capacity error when `n! > cap`.
pub fn enumerate_permutations(n: usize, cap: u64) -> Result<Permutations> {
    check_capacity(n, cap)?;
    Ok(Permutations {
        state: HeapState::new(n),
        pending: true,
    })
}

#[derive(Debug, Clone)]
struct HeapState {
    current: Vec<usize>,
    counters: Vec<usize>,
    level: usize,
}

impl HeapState {
    fn new(n: usize) -> Self {
        HeapState {
            current: (0..n).collect(),
            counters: vec![0; n],
            level: 1,
        }
    }

    /// Steps to the next permutation; false once all have been produced.
    fn advance(&mut self) -> bool {
        let n = self.current.len();
        while self.level < n {
            let i = self.level;
            if self.counters[i] < i {
                if i.is_multiple_of(2) {
                    self.current.swap(0, i);
                } else {
                    self.current.swap(self.counters[i], i);
                }
                self.counters[i] += 1;
                self.level = 1;
                return true;
            }
            self.counters[i] = 0;
            self.level += 1;
        }
        false
    }
}

/// The `n!` sigma-points `z_σ = Π_i (a_i + b_σ(i))` with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaPointSet {
    pub n: usize,
    pub points: Vec<Complex64>,
    pub a_spec: Vec<Complex64>,
    pub b_spec: Vec<Complex64>,
    perms: Vec<u64>,
}

impl SigmaPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Permutation that produced `points[index]`.
    pub fn perm(&self, index: usize) -> Permutation {
        Permutation::unpack(self.perms[index], self.n)
    }

    /// Re-evaluates `z_σ` for the stored permutation at `index`.
    pub fn recompute(&self, index: usize) -> Complex64 {
        sigma_product(&self.a_spec, &self.b_spec, &self.perm(index))
    }

    /// CSV with columns `perm_index,permutation,re,im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "perm_index,permutation,re,im")?;
        for (k, z) in self.points.iter().enumerate() {
            writeln!(out, "{k},{},{},{}", self.perm(k), z.re, z.im)?;
        }
        Ok(())
    }
}

/// `Π_i (a_i + b_σ(i))`, multiplied left to right.
pub fn sigma_product(a: &[Complex64], b: &[Complex64], sigma: &Permutation) -> Complex64 {
    a.iter()
        .zip(sigma.images())
        .fold(Complex64::new(1.0, 0.0), |acc, (&ai, &j)| acc * (ai + b[j]))
}

pub fn sigma_points(a: &[Complex64], b: &[Complex64], cap: u64) -> Result<SigmaPointSet> {
    if a.len() != b.len() {
        return Err(MocError::Dimension(format!(
            "spectra of size {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n > MAX_PACKED_N {
        return Err(MocError::Capacity {
            what: "sigma-point provenance",
            needed: n as u128,
            cap: MAX_PACKED_N as u128,
        });
    }
    let count = check_capacity(n, cap)? as usize;
    let mut points = Vec::with_capacity(count);
    let mut perms = Vec::with_capacity(count);
    let mut state = HeapState::new(n);
    loop {
        let z = a
            .iter()
            .zip(&state.current)
            .fold(Complex64::new(1.0, 0.0), |acc, (&ai, &j)| acc * (ai + b[j]));
        points.push(z);
        perms.push(Permutation::pack(&state.current));
        if !state.advance() {
            break;
        }
    }
    Ok(SigmaPointSet {
        n,
        points,
        a_spec: a.to_vec(),
        b_spec: b.to_vec(),
        perms,
    })
}

/// `θ(σ, π)` on `n + m` points: `σ` on the first block, `π` shifted by `n`
/// on the second.
pub fn compose_theta(sigma: &Permutation, pi: &Permutation) -> Permutation {
    let n = sigma.len();
    let images = sigma
        .images()
        .iter()
        .copied()
        .chain(pi.images().iter().map(|&j| n + j))
        .collect();
    Permutation { images }
}

/// Magnitude range of a sigma-point set and whether any partial product
/// left `[SCALE_LOW, SCALE_HIGH]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub max_abs: f64,
    pub min_abs: f64,
    pub flagged: bool,
}

pub fn scale_guard(set: &SigmaPointSet) -> ScaleReport {
    let n = set.n;
    let (lo, hi) = (SCALE_LOW.ln(), SCALE_HIGH.ln());
    // log|a_i + b_j|, -inf for exact zeros
    let logs: Vec<f64> = (0..n * n)
        .map(|k| (set.a_spec[k / n] + set.b_spec[k % n]).norm().ln())
        .collect();
    let mut flagged = false;
    for &packed in &set.perms {
        let mut running = 0.0;
        for i in 0..n {
            let j = ((packed >> (4 * i)) & 0xf) as usize;
            let l = logs[i * n + j];
            if l == f64::NEG_INFINITY {
                break;
            }
            running += l;
            if running < lo || running > hi {
                flagged = true;
                break;
            }
        }
        if flagged {
            break;
        }
    }
    let (min_abs, max_abs) = set
        .points
        .iter()
        .map(|z| z.norm())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    ScaleReport {
        max_abs,
        min_abs,
        flagged: flagged || !max_abs.is_finite(),
    }
}
