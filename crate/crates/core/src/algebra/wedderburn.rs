//! Numerical splitting of the semisimple quotient into its simple components.
//!
//! A random rational central element `z = Σ λ_i e_i` is sampled; its eigenvalues on
//! the center give the `λ_i`, and Lagrange interpolation in `z` recovers the central
//! idempotents `e_i`. Component sizes come from the numerical rank of `e_i·Ā`.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SemisimpleQuotient;
use crate::error::{Error, Result};
use crate::linalg::{to_f64, Rational};

pub type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Eigenvalues closer than this (relative to their scale) are one cluster.
    pub cluster: f64,
    /// Singular values below this (relative to the largest) count as zero.
    pub rank: f64,
    /// Norm below which a component image is zero.
    pub zero: f64,
    /// How many central elements to try before giving up.
    pub retries: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cluster: 1e-6,
            rank: 1e-8,
            zero: 1e-8,
            retries: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `max ‖e_i e_j − δ_ij e_i‖∞`.
    pub idempotent: f64,
    /// `‖Σ e_i − 1‖∞`.
    pub completeness: f64,
    /// `max |tr(L_{e_i}) − n_i²|`.
    pub trace: f64,
    /// Smallest distance between eigenvalue clusters; absent when `k = 1`.
    pub separation: Option<f64>,
}

/// Simple components of `Ā ≅ M_{n_1}(ℂ) × … × M_{n_k}(ℂ)`.
#[derive(Debug, Clone)]
pub struct WedderburnData {
    pub k: usize,
    pub dims: Vec<usize>,
    pub tolerances: Tolerances,
    pub residuals: Residuals,
    pub seed: u64,
    pub attempts: usize,
    dim: usize,
    eigenvalues: Vec<C64>,
    idempotents: Vec<Vec<C64>>,
    /// Row-major matrices of left multiplication by `e_i`.
    projectors: Vec<Vec<C64>>,
}

impl WedderburnData {
    pub fn idempotent(&self, i: usize) -> &[C64] {
        &self.idempotents[i]
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    /// `e_i · x` for `x` in quotient coordinates.
    pub fn component_image(&self, i: usize, x: &[f64]) -> Vec<C64> {
        let d = self.dim;
        let p = &self.projectors[i];
        (0..d)
            .map(|c| {
                p[c * d..(c + 1) * d]
                    .iter()
                    .zip(x)
                    .filter(|(_, &xb)| xb != 0.0)
                    .map(|(l, &xb)| l * xb)
                    .sum()
            })
            .collect()
    }

    pub fn component_norm(&self, i: usize, x: &[f64]) -> f64 {
        norm(&self.component_image(i, x))
    }

    /// `supp = { i : θ_i ≠ 0 }` as a bitmask over component indices.
    pub fn support(&self, x: &[f64]) -> Support {
        Support(
            (0..self.k)
                .filter(|&i| self.component_norm(i, x) > self.tolerances.zero)
                .fold(0, |acc, i| acc | 1 << i),
        )
    }

    /// Reorders components by `(n_i, zero pattern over the given images)`, making the
    /// labelling independent of the sampled central element in practice.
    pub fn canonicalize(&mut self, images: &[Vec<f64>]) {
        let mut keys: Vec<(usize, Vec<bool>, usize)> = (0..self.k)
            .map(|i| {
                let pattern = images
                    .iter()
                    .map(|x| self.component_norm(i, x) > self.tolerances.zero)
                    .collect();
                (self.dims[i], pattern, i)
            })
            .collect();
        keys.sort();
        let order: Vec<usize> = keys.into_iter().map(|(_, _, i)| i).collect();
        self.dims = order.iter().map(|&i| self.dims[i]).collect();
        self.eigenvalues = order.iter().map(|&i| self.eigenvalues[i]).collect();
        self.idempotents = order.iter().map(|&i| self.idempotents[i].clone()).collect();
        self.projectors = order.iter().map(|&i| self.projectors[i].clone()).collect();
    }
}

/// Set of component indices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Support(pub u64);

impl Support {
    pub fn full(k: usize) -> Self {
        Support(if k >= 64 { u64::MAX } else { (1 << k) - 1 })
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: Support) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Support) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

struct CenterAlgebra {
    k: usize,
    /// `cst[(i * k + j) * k + l]`: coefficient of `Z_l` in `Z_i Z_j`.
    cst: Vec<f64>,
    identity: Vec<f64>,
    /// Center basis in quotient coordinates.
    basis: Vec<Vec<f64>>,
}

impl CenterAlgebra {
    fn new(ss: &SemisimpleQuotient) -> Result<Self> {
        let center = ss.center();
        let k = center.dim();
        let pivots = center.pivots();
        let coords = |v: &[Rational]| -> Result<Vec<f64>> {
            if !center.contains(v)? {
                return Err(Error::InvariantViolated("center is not closed".into()));
            }
            Ok(pivots.iter().map(|&p| to_f64(&v[p])).collect())
        };
        let mut cst = vec![0.0; k * k * k];
        for i in 0..k {
            for j in 0..k {
                let prod = coords(&ss.mul(&center.basis()[i], &center.basis()[j]))?;
                cst[(i * k + j) * k..(i * k + j + 1) * k].copy_from_slice(&prod);
            }
        }
        Ok(Self {
            k,
            cst,
            identity: coords(ss.identity())?,
            basis: center
                .basis()
                .iter()
                .map(|v| v.iter().map(to_f64).collect())
                .collect(),
        })
    }

    fn mul(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let k = self.k;
        let mut out = vec![C64::new(0.0, 0.0); k];
        for i in 0..k {
            for j in 0..k {
                let w = x[i] * y[j];
                for (l, o) in out.iter_mut().enumerate() {
                    *o += w * self.cst[(i * k + j) * k + l];
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `z` on the center.
    fn multiplication_matrix(&self, z: &[f64]) -> DMatrix<f64> {
        let k = self.k;
        DMatrix::from_fn(k, k, |l, j| (0..k).map(|i| z[i] * self.cst[(i * k + j) * k + l]).sum())
    }
}

fn cluster(values: &[C64], tol: f64) -> Vec<C64> {
    let scale = values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut centers: Vec<(C64, usize)> = Vec::new();
    for &v in values {
        match centers.iter_mut().find(|(c, _)| (*c - v).norm() <= tol * scale) {
            Some((c, count)) => {
                *c = (*c * *count as f64 + v) / (*count as f64 + 1.0);
                *count += 1;
            }
            None => centers.push((v, 1)),
        }
    }
    centers.into_iter().map(|(c, _)| c).collect()
}

/// Splits `Ā` into simple components; see the module docs for the method.
pub fn wedderburn_decompose(ss: &SemisimpleQuotient, tol: &Tolerances, seed: u64) -> Result<WedderburnData> {
    let center = CenterAlgebra::new(ss)?;
    let k = center.k;
    if k == 0 {
        return Err(Error::DecompositionFailed("the quotient algebra is zero".into()));
    }
    let d = ss.dim();
    let gamma = ss.structure_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_clusters = 0;
    for attempt in 1..=tol.retries.max(1) {
        let z: Vec<f64> = loop {
            let z: Vec<f64> = (0..k).map(|_| rng.random_range(-9i32..=9) as f64).collect();
            if z.iter().any(|&c| c != 0.0) {
                break z;
            }
        };
        let raw: Vec<C64> = center.multiplication_matrix(&z).complex_eigenvalues().iter().copied().collect();
        let lambdas = cluster(&raw, tol.cluster);
        last_clusters = lambdas.len();
        if lambdas.len() != k {
            continue;
        }
        let separation = lambdas
            .iter()
            .enumerate()
            .flat_map(|(i, a)| lambdas[i + 1..].iter().map(move |b| (a - b).norm()))
            .min_by(f64::total_cmp);

        let zc: Vec<C64> = z.iter().map(|&c| C64::new(c, 0.0)).collect();
        let one: Vec<C64> = center.identity.iter().map(|&c| C64::new(c, 0.0)).collect();
        let mut idems_center = Vec::with_capacity(k);
        for (i, li) in lambdas.iter().enumerate() {
            let mut e = one.clone();
            for (j, lj) in lambdas.iter().enumerate() {
                if i == j {
                    continue;
                }
                let factor: Vec<C64> = zc
                    .iter()
                    .zip(&one)
                    .map(|(zv, ov)| (zv - ov * lj) / (li - lj))
                    .collect();
                e = center.mul(&e, &factor);
            }
            for _ in 0..2 {
                let e2 = center.mul(&e, &e);
                let e3 = center.mul(&e2, &e);
                e = e2.iter().zip(&e3).map(|(a, b)| a * 3.0 - b * 2.0).collect();
            }
            idems_center.push(e);
        }

        let idempotents: Vec<Vec<C64>> = idems_center
            .iter()
            .map(|e| {
                let mut v = vec![C64::new(0.0, 0.0); d];
                for (coef, zb) in e.iter().zip(&center.basis) {
                    for (o, &b) in v.iter_mut().zip(zb) {
                        *o += coef * b;
                    }
                }
                v
            })
            .collect();
        let projectors: Vec<Vec<C64>> = idempotents
            .iter()
            .map(|e| {
                let mut p = vec![C64::new(0.0, 0.0); d * d];
                for (a, ea) in e.iter().enumerate() {
                    if ea.norm() == 0.0 {
                        continue;
                    }
                    for b in 0..d {
                        for c in 0..d {
                            let g = gamma[(a * d + b) * d + c];
                            if g != 0.0 {
                                p[c * d + b] += ea * g;
                            }
                        }
                    }
                }
                p
            })
            .collect();

        let mut wd = WedderburnData {
            k,
            dims: Vec::with_capacity(k),
            tolerances: *tol,
            residuals: Residuals {
                separation,
                ..Residuals::default()
            },
            seed,
            attempts: attempt,
            dim: d,
            eigenvalues: lambdas,
            idempotents,
            projectors,
        };

        for i in 0..k {
            let m = DMatrix::from_row_slice(d, d, &wd.projectors[i]);
            let sv = m.singular_values();
            let top = sv.iter().copied().fold(1.0, f64::max);
            let rank = sv.iter().filter(|&&s| s > tol.rank * top).count();
            let ni = (rank as f64).sqrt().round() as usize;
            if ni * ni != rank || ni == 0 {
                return Err(Error::DecompositionFailed(format!(
                    "component {i} has rank {rank}, not a non-zero perfect square"
                )));
            }
            let trace: f64 = (0..d).map(|c| wd.projectors[i][c * d + c].re).sum();
            wd.residuals.trace = wd.residuals.trace.max((trace - rank as f64).abs());
            wd.dims.push(ni);
        }

        let mut total = vec![C64::new(0.0, 0.0); d];
        for i in 0..k {
            let ei = &wd.idempotents[i];
            for (t, v) in total.iter_mut().zip(ei) {
                *t += v;
            }
            for j in 0..k {
                let ej: Vec<f64> = wd.idempotents[j].iter().map(|z| z.re).collect();
                let ej_im: Vec<f64> = wd.idempotents[j].iter().map(|z| z.im).collect();
                let re = wd.component_image(i, &ej);
                let im = wd.component_image(i, &ej_im);
                let prod: Vec<C64> = re.iter().zip(&im).map(|(r, m)| r + m * C64::new(0.0, 1.0)).collect();
                let diff: Vec<C64> = if i == j {
                    prod.iter().zip(ei).map(|(p, e)| p - e).collect()
                } else {
                    prod
                };
                wd.residuals.idempotent = wd.residuals.idempotent.max(max_abs(&diff));
            }
        }
        let unit: Vec<C64> = ss.identity().iter().map(|x| C64::new(to_f64(x), 0.0)).collect();
        let miss: Vec<C64> = total.iter().zip(&unit).map(|(t, u)| t - u).collect();
        wd.residuals.completeness = max_abs(&miss);

        if wd.residuals.idempotent >= tol.zero || wd.residuals.completeness >= tol.zero {
            return Err(Error::DecompositionFailed(format!(
                "idempotent residuals too large: {:?}",
                wd.residuals
            )));
        }
        let squares: usize = wd.dims.iter().map(|n| n * n).sum();
        if squares != d {
            return Err(Error::DecompositionFailed(format!(
                "Σ n_i² = {squares} but dim Ā = {d}"
            )));
        }
        return Ok(wd);
    }
    Err(Error::DecompositionFailed(format!(
        "found {last_clusters} eigenvalue clusters, expected {k}, after {} samples",
        tol.retries.max(1)
    )))
}
