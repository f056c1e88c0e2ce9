//! The linear representation on `w⊥`, the algebra it spans, its radical,
//! the semisimple quotient and (numerically) its simple components.
//!
//! The representation uses the basis `b_i = q_i − q_{n−1}` of the hyperplane
//! orthogonal to the all-ones vector, with transformations acting on the right
//! of row vectors. Reset transformations act as zero. Everything up to the
//! quotient and its center is exact over the rationals; splitting the quotient
//! into matrix blocks happens in [`wedderburn`].

pub mod monoid;
pub mod wedderburn;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::automaton::{self, Automaton, Transformation, Word};
use crate::error::{Error, Result};
use crate::linalg::{rat, to_f64, Rational, RationalMatrix, RationalSubspace};

pub use monoid::{enumerate_monoid, IdealSearch, MonoidTable, DEFAULT_MONOID_CAP};
pub use wedderburn::{wedderburn_decompose, Residuals, Support, Tolerances, WedderburnData};

/// Flattened integer matrix of `t` acting on `w⊥`, row-major `(n−1)×(n−1)`.
pub fn rep_entries(t: &Transformation) -> Vec<i64> {
    let n = t.degree();
    let d = n.saturating_sub(1);
    let mut out = vec![0i64; d * d];
    if d == 0 {
        return out;
    }
    let anchor = t.apply(n - 1);
    for i in 0..d {
        let img = t.apply(i);
        if img < d {
            out[i * d + img] += 1;
        }
        if anchor < d {
            out[i * d + anchor] -= 1;
        }
    }
    out
}

/// Matrix of the right action of `t` on `w⊥`.
pub fn rep_matrix(a: &Automaton, t: &Transformation) -> Result<RationalMatrix> {
    if t.degree() != a.states() {
        return Err(Error::DimensionMismatch {
            expected: a.states(),
            found: t.degree(),
        });
    }
    let d = a.states() - 1;
    RationalMatrix::from_vec(d, d, rep_entries(t).into_iter().map(rat).collect())
}

#[cfg(test)]
fn flatten(m: &RationalMatrix) -> Vec<Rational> {
    m.as_slice().to_vec()
}

fn unflatten(d: usize, v: Vec<Rational>) -> RationalMatrix {
    RationalMatrix::from_vec(d, d, v).expect("flattened length is d*d")
}

/// The algebra `R` spanned by the represented monoid, as a subspace of flattened matrices.
///
/// Coordinates of a member are its entries at the pivot columns of the RREF basis.
#[derive(Debug, Clone)]
pub struct AlgebraData {
    degree: usize,
    basis: RationalSubspace,
    matrices: Vec<RationalMatrix>,
}

impl AlgebraData {
    /// Span of the given `d × d` matrices, checked to be closed under products.
    pub fn from_matrices(degree: usize, mats: impl IntoIterator<Item = RationalMatrix>) -> Result<Self> {
        let mut basis = RationalSubspace::zero(degree * degree);
        for m in mats {
            if basis.is_full() {
                break;
            }
            if m.rows() != degree || m.cols() != degree {
                return Err(Error::DimensionMismatch {
                    expected: degree,
                    found: m.rows(),
                });
            }
            basis.insert(m.into_vec())?;
        }
        let matrices = basis
            .basis()
            .iter()
            .map(|v| unflatten(degree, v.clone()))
            .collect();
        let alg = AlgebraData {
            degree,
            basis,
            matrices,
        };
        for x in &alg.matrices {
            for y in &alg.matrices {
                if !alg.basis.contains(x.mul(y)?.as_slice())? {
                    return Err(Error::InvariantViolated(
                        "spanned subspace is not closed under multiplication".into(),
                    ));
                }
            }
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Matrix size `n − 1`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &RationalSubspace {
        &self.basis
    }

    pub fn matrices(&self) -> &[RationalMatrix] {
        &self.matrices
    }

    pub fn contains(&self, m: &RationalMatrix) -> Result<bool> {
        self.basis.contains(m.as_slice())
    }

    /// Coordinates of a flattened member (pivot entries; membership is not rechecked).
    pub fn coords_unchecked(&self, flat: &[Rational]) -> Vec<Rational> {
        self.basis.pivots().iter().map(|&p| flat[p].clone()).collect()
    }

    pub fn coordinates(&self, m: &RationalMatrix) -> Result<Vec<Rational>> {
        self.basis
            .coordinates(m.as_slice())?
            .ok_or_else(|| Error::InvariantViolated("matrix is outside the algebra".into()))
    }

    pub fn matrix_of(&self, coords: &[Rational]) -> RationalMatrix {
        unflatten(self.degree, self.basis.combine(coords))
    }
}

/// `R`: span of the matrices of every monoid element.
pub fn algebra_basis(mt: &MonoidTable, a: &Automaton) -> Result<AlgebraData> {
    let d = a.states() - 1;
    let mats = mt
        .elements()
        .iter()
        .map(|t| unflatten(d, rep_entries(t).into_iter().map(rat).collect()));
    AlgebraData::from_matrices(d, mats)
}

/// `Rad(R)` in algebra coordinates.
#[derive(Debug, Clone)]
pub struct RadicalData {
    subspace: RationalSubspace,
}

impl RadicalData {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// Subspace of algebra coordinates.
    pub fn subspace(&self) -> &RationalSubspace {
        &self.subspace
    }

    pub fn contains_coords(&self, coords: &[Rational]) -> Result<bool> {
        self.subspace.contains(coords)
    }
}

/// Radical as the kernel of the trace form `(x, y) ↦ tr(xy)` on `R` (characteristic 0).
///
/// The result is checked to be a two-sided ideal of nilpotent matrices.
pub fn radical(alg: &AlgebraData) -> Result<RadicalData> {
    let d = alg.dim();
    let mats = alg.matrices();
    let mut gram = RationalMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let t = trace_of_product(&mats[i], &mats[j]);
            gram.set(i, j, t.clone());
            gram.set(j, i, t);
        }
    }
    let subspace = crate::linalg::solve_orthogonal(&gram)?;
    let rad = RadicalData { subspace };
    for x in rad.subspace.basis() {
        let xm = alg.matrix_of(x);
        for b in mats {
            for prod in [xm.mul(b)?, b.mul(&xm)?] {
                let c = alg.coordinates(&prod)?;
                if !rad.contains_coords(&c)? {
                    return Err(Error::InvariantViolated("radical is not an ideal".into()));
                }
            }
        }
        let mut power = xm.clone();
        for _ in 1..alg.degree().max(1) {
            power = power.mul(&xm)?;
        }
        if !power.is_zero() {
            return Err(Error::InvariantViolated("radical element is not nilpotent".into()));
        }
    }
    Ok(rad)
}

fn trace_of_product(x: &RationalMatrix, y: &RationalMatrix) -> Rational {
    let d = x.rows();
    let mut acc = Rational::zero();
    for k in 0..d {
        for l in 0..d {
            let (a, b) = (x.get(k, l), y.get(l, k));
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
    }
    acc
}

/// `R/Rad(R)` with exact structure constants and center.
///
/// The complement basis is given by the algebra coordinates that are not
/// pivots of the radical's RREF basis.
#[derive(Debug, Clone)]
pub struct SemisimpleQuotient {
    algebra_dim: usize,
    radical: RationalSubspace,
    complement: Vec<usize>,
    /// `structure[(a * dim + b) * dim + c]`: coefficient of `c_c` in `c_a · c_b`.
    structure: Vec<Rational>,
    identity: Vec<Rational>,
    center: RationalSubspace,
}

impl SemisimpleQuotient {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    /// `ψ` on algebra coordinates.
    pub fn project(&self, coords: &[Rational]) -> Vec<Rational> {
        let mut v = coords.to_vec();
        self.radical.reduce(&mut v).expect("coordinate length matches");
        self.complement.iter().map(|&j| v[j].clone()).collect()
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let w = xa * yb;
                let base = (a * d + b) * d;
                for (c, o) in out.iter_mut().enumerate() {
                    let g = &self.structure[base + c];
                    if !g.is_zero() {
                        *o += &w * g;
                    }
                }
            }
        }
        out
    }

    pub fn identity(&self) -> &[Rational] {
        &self.identity
    }

    pub fn center(&self) -> &RationalSubspace {
        &self.center
    }

    pub fn structure_constants(&self) -> &[Rational] {
        &self.structure
    }

    pub fn structure_f64(&self) -> Vec<f64> {
        self.structure.iter().map(to_f64).collect()
    }

    /// Kernel of the trace form of the regular representation; zero for a semisimple algebra.
    pub fn trace_form_radical(&self) -> RationalSubspace {
        let d = self.dim();
        // trace of left multiplication by c_a
        let traces: Vec<Rational> = (0..d)
            .map(|a| (0..d).map(|c| self.structure[(a * d + c) * d + c].clone()).sum())
            .collect();
        let mut gram = RationalMatrix::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                let base = (a * d + b) * d;
                let t: Rational = (0..d)
                    .filter(|&e| !self.structure[base + e].is_zero())
                    .map(|e| &self.structure[base + e] * &traces[e])
                    .sum();
                gram.set(a, b, t);
            }
        }
        gram.nullspace()
    }
}

pub fn semisimple_quotient(alg: &AlgebraData, rad: &RadicalData) -> Result<SemisimpleQuotient> {
    let dim_r = alg.dim();
    let pivots = rad.subspace().pivots();
    let complement: Vec<usize> = (0..dim_r).filter(|j| !pivots.contains(j)).collect();
    let d = complement.len();
    let mut ss = SemisimpleQuotient {
        algebra_dim: dim_r,
        radical: rad.subspace().clone(),
        complement: complement.clone(),
        structure: vec![Rational::zero(); d * d * d],
        identity: Vec::new(),
        center: RationalSubspace::zero(d),
    };
    let mats = alg.matrices();
    for (a, &ja) in complement.iter().enumerate() {
        for (b, &jb) in complement.iter().enumerate() {
            let prod = alg.coordinates(&mats[ja].mul(&mats[jb])?)?;
            let image = ss.project(&prod);
            for (c, v) in image.into_iter().enumerate() {
                ss.structure[(a * d + b) * d + c] = v;
            }
        }
    }
    ss.identity = ss.project(&alg.coordinates(&RationalMatrix::identity(alg.degree()))?);

    // ψ is multiplicative on every pair of algebra basis vectors
    let unit = |j: usize| {
        let mut v = vec![Rational::zero(); dim_r];
        v[j] = Rational::one();
        v
    };
    for &p in pivots {
        for j in 0..dim_r {
            for (x, y) in [(p, j), (j, p)] {
                let lhs = ss.project(&alg.coordinates(&mats[x].mul(&mats[y])?)?);
                let rhs = ss.mul(&ss.project(&unit(x)), &ss.project(&unit(y)));
                if lhs != rhs {
                    return Err(Error::InvariantViolated(
                        "projection onto the quotient is not multiplicative".into(),
                    ));
                }
            }
        }
    }
    if ss.trace_form_radical().dim() != 0 {
        return Err(Error::InvariantViolated("quotient has a non-zero radical".into()));
    }
    ss.center = center_of(&ss);
    Ok(ss)
}

fn center_of(ss: &SemisimpleQuotient) -> RationalSubspace {
    let d = ss.dim();
    // z·c_b − c_b·z = 0 for every b, one equation per output coordinate
    let mut rows = Vec::with_capacity(d * d);
    for b in 0..d {
        for c in 0..d {
            rows.push(
                (0..d)
                    .map(|a| &ss.structure[(a * d + b) * d + c] - &ss.structure[(b * d + a) * d + c])
                    .collect::<Vec<_>>(),
            );
        }
    }
    let data: Vec<Rational> = rows.into_iter().flatten().collect();
    RationalMatrix::from_vec(d * d, d, data)
        .expect("sizes agree")
        .nullspace()
}

/// Number of simple components of the quotient (dimension of its center).
pub fn center_dim(ss: &SemisimpleQuotient) -> usize {
    ss.center().dim()
}

/// Knobs shared by every stage of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub monoid_cap: usize,
    pub tolerances: Tolerances,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            monoid_cap: DEFAULT_MONOID_CAP,
            tolerances: Tolerances::default(),
        }
    }
}

/// Exact algebraic data of one automaton, with per-element radical flags and quotient images.
#[derive(Debug, Clone)]
pub struct AlgebraicStructure {
    automaton: Automaton,
    monoid: MonoidTable,
    algebra: AlgebraData,
    radical: RadicalData,
    quotient: SemisimpleQuotient,
    radical_flags: Vec<bool>,
    images: Vec<Vec<f64>>,
}

impl AlgebraicStructure {
    pub fn new(a: &Automaton, config: &PipelineConfig) -> Result<Self> {
        let monoid = enumerate_monoid(a, config.monoid_cap)?;
        Self::from_monoid(a, monoid)
    }

    pub fn from_monoid(a: &Automaton, monoid: MonoidTable) -> Result<Self> {
        let algebra = algebra_basis(&monoid, a)?;
        let radical = radical(&algebra)?;
        let quotient = semisimple_quotient(&algebra, &radical)?;
        let mut radical_flags = Vec::with_capacity(monoid.len());
        let mut images = Vec::with_capacity(monoid.len());
        for t in monoid.elements() {
            let flat: Vec<Rational> = rep_entries(t).into_iter().map(rat).collect();
            let psi = quotient.project(&algebra.coords_unchecked(&flat));
            radical_flags.push(psi.iter().all(Zero::is_zero));
            images.push(psi.iter().map(to_f64).collect());
        }
        Ok(Self {
            automaton: a.clone(),
            monoid,
            algebra,
            radical,
            quotient,
            radical_flags,
            images,
        })
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn monoid(&self) -> &MonoidTable {
        &self.monoid
    }

    pub fn algebra(&self) -> &AlgebraData {
        &self.algebra
    }

    pub fn radical(&self) -> &RadicalData {
        &self.radical
    }

    pub fn quotient(&self) -> &SemisimpleQuotient {
        &self.quotient
    }

    pub fn is_semisimple(&self) -> bool {
        self.radical.dim() == 0
    }

    /// Exact radical membership of a monoid element.
    pub fn is_radical(&self, e: usize) -> bool {
        self.radical_flags[e]
    }

    /// `ψ(φ(e))` in quotient coordinates, as floats.
    pub fn quotient_image(&self, e: usize) -> &[f64] {
        &self.images[e]
    }

    pub fn element_of_word(&self, u: &Word) -> Result<usize> {
        self.monoid.element_of_word(u)
    }

    pub fn shortest_radical(&self) -> usize {
        (0..self.monoid.len())
            .find(|&e| self.radical_flags[e])
            .expect("a synchronizing automaton has radical elements")
    }

    /// First radical element (shortlex) that is not reset.
    pub fn shortest_radical_non_reset(&self) -> Option<usize> {
        (0..self.monoid.len()).find(|&e| self.radical_flags[e] && !self.monoid.is_reset(e))
    }

    pub fn wedderburn(&self, tol: &Tolerances, seed: u64) -> Result<WedderburnData> {
        let mut wd = wedderburn_decompose(&self.quotient, tol, seed)?;
        wd.canonicalize(&self.images);
        Ok(wd)
    }
}

fn synchronizing_structure(a: &Automaton) -> Result<AlgebraicStructure> {
    if !automaton::is_synchronizing(a) {
        return Err(Error::NotSynchronizing);
    }
    AlgebraicStructure::new(a, &PipelineConfig::default())
}

/// `Rad(A*) = {0}`, decided exactly.
pub fn is_semisimple(a: &Automaton) -> Result<bool> {
    Ok(synchronizing_structure(a)?.is_semisimple())
}

pub fn is_radical_word(a: &Automaton, u: &Word) -> Result<bool> {
    a.check_word(u)?;
    let s = AlgebraicStructure::new(a, &PipelineConfig::default())?;
    Ok(s.is_radical(s.element_of_word(u)?))
}

/// Shortlex-least radical word.
pub fn shortest_radical_word(a: &Automaton) -> Result<Word> {
    let s = synchronizing_structure(a)?;
    Ok(s.monoid().witness(s.shortest_radical()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{cerny, shortest_reset_word, transformation_of};

    fn structure(a: &Automaton) -> AlgebraicStructure {
        AlgebraicStructure::new(a, &PipelineConfig::default()).unwrap()
    }

    #[test]
    fn rep_matrix_examples() {
        let c3 = cerny(3).unwrap();
        let id = rep_matrix(&c3, &Transformation::identity(3)).unwrap();
        assert_eq!(id, RationalMatrix::identity(2));
        let a = rep_matrix(&c3, &c3.letter(0)).unwrap();
        assert_eq!(a, RationalMatrix::from_i64(&[vec![-1, 1], vec![-1, 0]]));
        let constant = Transformation::from_image(vec![2, 2, 2]);
        assert!(rep_matrix(&c3, &constant).unwrap().is_zero());
        assert!(rep_matrix(&c3, &Transformation::identity(4)).is_err());
    }

    #[test]
    fn representation_is_multiplicative_and_detects_resets() {
        let c4 = cerny(4).unwrap();
        let mt = enumerate_monoid(&c4, 1000).unwrap();
        for (i, s) in mt.elements().iter().enumerate() {
            let rs = rep_matrix(&c4, s).unwrap();
            assert_eq!(rs.is_zero(), s.rank() == 1);
            for t in mt.elements().iter().skip(i % 7).step_by(7) {
                let lhs = rep_matrix(&c4, &s.then(t)).unwrap();
                let rhs = rs.mul(&rep_matrix(&c4, t).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    /// Span the generators, then multiply to closure.
    fn closure_dim(a: &Automaton) -> usize {
        let d = a.states() - 1;
        let mut mats: Vec<RationalMatrix> = vec![RationalMatrix::identity(d)];
        mats.extend((0..a.letters()).map(|l| rep_matrix(a, &a.letter(l)).unwrap()));
        let mut span = RationalSubspace::span(d * d, mats.iter().map(flatten));
        loop {
            let basis: Vec<RationalMatrix> =
                span.basis().iter().map(|v| unflatten(d, v.clone())).collect();
            let before = span.dim();
            for x in &basis {
                for y in &basis {
                    span.insert(flatten(&x.mul(y).unwrap())).unwrap();
                }
            }
            if span.dim() == before {
                return before;
            }
        }
    }

    #[test]
    fn algebra_dimension_matches_closure() {
        for a in [
            cerny(3).unwrap(),
            cerny(4).unwrap(),
            Automaton::from_rows(&[vec![1, 0], vec![1, 2], vec![2, 0]]).unwrap(),
        ] {
            let mt = enumerate_monoid(&a, 1000).unwrap();
            let alg = algebra_basis(&mt, &a).unwrap();
            assert_eq!(alg.dim(), closure_dim(&a));
            assert!(alg.contains(&RationalMatrix::identity(a.states() - 1)).unwrap());
        }
        let idle = Automaton::from_rows(&[vec![0], vec![1]]).unwrap();
        let mt = enumerate_monoid(&idle, 10).unwrap();
        assert_eq!(algebra_basis(&mt, &idle).unwrap().dim(), 1);
    }

    #[test]
    fn radical_examples() {
        let just_id = AlgebraData::from_matrices(2, [RationalMatrix::identity(2)]).unwrap();
        assert_eq!(radical(&just_id).unwrap().dim(), 0);
        let nil = RationalMatrix::from_i64(&[vec![0, 1], vec![0, 0]]);
        let alg = AlgebraData::from_matrices(2, [RationalMatrix::identity(2), nil.clone()]).unwrap();
        let rad = radical(&alg).unwrap();
        assert_eq!(rad.dim(), 1);
        assert!(rad.contains_coords(&alg.coordinates(&nil).unwrap()).unwrap());
        assert!(!rad
            .contains_coords(&alg.coordinates(&RationalMatrix::identity(2)).unwrap())
            .unwrap());
        let c4 = cerny(4).unwrap();
        let s = structure(&c4);
        assert_eq!(s.radical().dim(), 0);
    }

    #[test]
    fn semisimplicity_examples() {
        for n in 3..=6 {
            assert!(is_semisimple(&cerny(n).unwrap()).unwrap(), "n = {n}");
        }
        let constant = Automaton::from_rows(&[vec![0], vec![0]]).unwrap();
        assert!(is_semisimple(&constant).unwrap());
        let perm = Automaton::from_rows(&[vec![1], vec![0]]).unwrap();
        assert!(matches!(is_semisimple(&perm), Err(Error::NotSynchronizing)));
    }

    #[test]
    fn radical_words() {
        let c4 = cerny(4).unwrap();
        let reset = shortest_reset_word(&c4).unwrap().unwrap();
        assert!(is_radical_word(&c4, &reset).unwrap());
        assert!(!is_radical_word(&c4, &Word::empty()).unwrap());
        assert_eq!(shortest_radical_word(&c4).unwrap(), reset);
        let one = Automaton::from_rows(&[vec![0]]).unwrap();
        assert_eq!(shortest_radical_word(&one).unwrap(), Word::empty());
        let s = structure(&c4);
        for e in 0..s.monoid().len() {
            assert_eq!(s.is_radical(e), s.monoid().is_reset(e));
        }
    }

    /// First non-semisimple synchronizing automaton in the exhaustive 3-state binary enumeration.
    fn non_semisimple() -> Automaton {
        let mut found = None;
        for code in 0..729usize {
            let delta: Vec<u8> = (0..6).map(|i| ((code / 3usize.pow(i)) % 3) as u8).collect();
            let a = Automaton::from_table(3, 2, delta).unwrap();
            if automaton::is_synchronizing(&a) && !is_semisimple(&a).unwrap() {
                found = Some(a);
                break;
            }
        }
        found.expect("census contains non-semisimple automata")
    }

    #[test]
    fn radical_power_is_reset() {
        let a = non_semisimple();
        let s = structure(&a);
        assert!(s.radical().dim() > 0);
        let u = shortest_radical_word(&a).unwrap();
        let t = transformation_of(&a, &u.power(a.states() - 1)).unwrap();
        assert_eq!(t.rank(), 1);
        let w = s.shortest_radical_non_reset().expect("radical exceeds resets");
        assert!(!s.monoid().is_reset(w));
    }

    #[test]
    fn quotient_properties() {
        let a = non_semisimple();
        let s = structure(&a);
        let ss = s.quotient();
        assert_eq!(ss.dim(), s.algebra().dim() - s.radical().dim());
        assert_eq!(ss.trace_form_radical().dim(), 0);
        let k = center_dim(ss);
        assert!(k >= 1 && k <= ss.dim());
        let just_id = AlgebraData::from_matrices(1, [RationalMatrix::identity(1)]).unwrap();
        let rad = radical(&just_id).unwrap();
        let q = semisimple_quotient(&just_id, &rad).unwrap();
        assert_eq!(center_dim(&q), 1);
        // identity of the quotient is a two-sided unit
        for j in 0..ss.dim() {
            let mut e = vec![Rational::zero(); ss.dim()];
            e[j] = Rational::one();
            assert_eq!(ss.mul(ss.identity(), &e), e);
            assert_eq!(ss.mul(&e, ss.identity()), e);
        }
    }
}
