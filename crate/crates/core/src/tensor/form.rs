use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{ExponentVector, ExtScalar};
use crate::scalar::Scalar;
use crate::tensor::norms::lp_norm;

/// Norm value known in closed form for a constructed witness.
///
/// `derived` marks values that extend a stated family beyond the instances
/// it was stated for.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticNorm {
    pub value: f64,
    pub derived: bool,
}

/// A finite sequence in `ℓ_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorInLp<S> {
    pub entries: Vec<S>,
    pub p: ExtScalar,
}

impl<S: Scalar> VectorInLp<S> {
    pub fn new(entries: Vec<S>, p: ExtScalar) -> Self {
        VectorInLp { entries, p }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        lp_norm(
            self.entries.iter().map(|z| z.modulus_f64()),
            self.p.to_f64(),
        )
    }

    /// `e_j` (zero-based `j`) of length `n`.
    pub fn basis(n: usize, j: usize, p: ExtScalar) -> Self {
        let mut entries = vec![S::zero(); n];
        entries[j] = S::one();
        VectorInLp { entries, p }
    }
}

/// An m-linear form `T(x¹,…,xᵐ) = Σ_J a_J x¹_{j_1}⋯xᵐ_{j_m}` stored as a dense
/// row-major coefficient array (last index fastest), together with the ℓ_p
/// exponent of each slot's domain.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearForm<S: Scalar = f64> {
    dims: Vec<usize>,
    coeffs: Vec<S>,
    domain_p: ExponentVector,
    analytic_norm: Option<AnalyticNorm>,
}

impl<S: Scalar> MultilinearForm<S> {
    /// Builds a form on the critical domain `ℓ_m × ⋯ × ℓ_m`.
    pub fn new(dims: Vec<usize>, coeffs: Vec<S>) -> Result<Self> {
        let size = checked_size(&dims)?;
        if coeffs.len() != size {
            return Err(Error::Shape(format!(
                "dims {dims:?} need {size} coefficients, got {}",
                coeffs.len()
            )));
        }
        let m = dims.len();
        Ok(MultilinearForm {
            dims,
            coeffs,
            domain_p: ExponentVector::uniform(ExtScalar::integer(m as i64), m),
            analytic_norm: None,
        })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let size = checked_size(&dims)?;
        Self::new(dims, vec![S::zero(); size])
    }

    /// Fills coefficients from a function of the zero-based multi-index.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> S) -> Result<Self> {
        let size = checked_size(&dims)?;
        let mut coeffs = Vec::with_capacity(size);
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..size {
            coeffs.push(f(&idx));
            advance(&mut idx, &dims);
        }
        Self::new(dims, coeffs)
    }

    /// Replaces the domain exponents. Any attached analytic norm is dropped,
    /// since it refers to the previous domain.
    pub fn with_domain(mut self, domain_p: ExponentVector) -> Result<Self> {
        if domain_p.len() != self.arity() {
            return Err(Error::Shape(format!(
                "domain has {} exponents for a {}-linear form",
                domain_p.len(),
                self.arity()
            )));
        }
        domain_p.require_positive()?;
        self.domain_p = domain_p;
        self.analytic_norm = None;
        Ok(self)
    }

    pub(crate) fn with_analytic_norm(mut self, norm: AnalyticNorm) -> Self {
        self.analytic_norm = Some(norm);
        self
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn domain_p(&self) -> &ExponentVector {
        &self.domain_p
    }

    pub fn analytic_norm(&self) -> Option<AnalyticNorm> {
        self.analytic_norm
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.modulus_f64() == 0.0)
    }

    fn offset(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.arity() {
            return Err(Error::Shape(format!(
                "multi-index of length {} for a {}-linear form",
                index.len(),
                self.arity()
            )));
        }
        let mut off = 0;
        for (&j, &n) in index.iter().zip(&self.dims) {
            if j >= n {
                return Err(Error::Shape(format!(
                    "index {j} out of range for dimension {n}"
                )));
            }
            off = off * n + j;
        }
        Ok(off)
    }

    /// `T(e_{j_1}, …, e_{j_m})` for a zero-based multi-index.
    pub fn coefficient(&self, index: &[usize]) -> Result<S> {
        Ok(self.coeffs[self.offset(index)?])
    }

    fn check_args(&self, xs: &[Vec<S>]) -> Result<()> {
        if xs.len() != self.arity() {
            return Err(Error::Shape(format!(
                "{} arguments for a {}-linear form",
                xs.len(),
                self.arity()
            )));
        }
        for (k, (x, &n)) in xs.iter().zip(&self.dims).enumerate() {
            if x.len() != n {
                return Err(Error::Shape(format!(
                    "argument {} has length {}, slot dimension is {n}",
                    k + 1,
                    x.len()
                )));
            }
        }
        Ok(())
    }

    /// `T(x¹, …, xᵐ)`.
    pub fn evaluate(&self, xs: &[Vec<S>]) -> Result<S> {
        self.check_args(xs)?;
        let g = self.contract_unchecked(0, xs);
        Ok(dot(&g, &xs[0]))
    }

    pub fn evaluate_lp(&self, xs: &[VectorInLp<S>]) -> Result<S> {
        let plain: Vec<Vec<S>> = xs.iter().map(|x| x.entries.clone()).collect();
        self.evaluate(&plain)
    }

    /// Contracts every slot except `slot` (zero-based) against `xs`, giving
    /// the vector `g` with `T(x) = Σ_j g_j x^{slot}_j`. Entries of `xs[slot]`
    /// are ignored.
    pub fn contract_except(&self, slot: usize, xs: &[Vec<S>]) -> Result<Vec<S>> {
        if slot >= self.arity() {
            return Err(Error::Shape(format!("slot {slot} out of range")));
        }
        self.check_args(xs)?;
        Ok(self.contract_unchecked(slot, xs))
    }

    pub(crate) fn contract_unchecked(&self, slot: usize, xs: &[Vec<S>]) -> Vec<S> {
        let m = self.arity();
        let mut cur: Vec<S> = self.coeffs.clone();
        // trailing slots, innermost first
        for k in (slot + 1..m).rev() {
            let n = self.dims[k];
            let x = &xs[k];
            cur = cur.chunks_exact(n).map(|row| dot(row, x)).collect();
        }
        // leading slots, outermost first
        for (x, &n) in xs[..slot].iter().zip(&self.dims) {
            let rest = cur.len() / n;
            let mut next = vec![S::zero(); rest];
            for (i, block) in cur.chunks_exact(rest).enumerate() {
                let xi = x[i];
                for (acc, &a) in next.iter_mut().zip(block) {
                    *acc += a * xi;
                }
            }
            cur = next;
        }
        cur
    }

    /// Replaces slot `slot` by a sequence of vectors: the result has
    /// coefficients `T(…, v_j, …)` for `j = 1..vectors.len()` in that slot.
    pub fn apply_sequence(&self, slot: usize, vectors: &[Vec<S>]) -> Result<Self> {
        if slot >= self.arity() {
            return Err(Error::Shape(format!("slot {slot} out of range")));
        }
        let n = self.dims[slot];
        if vectors.is_empty() || vectors.iter().any(|v| v.len() != n) {
            return Err(Error::Shape(format!(
                "sequence vectors must be nonempty with length {n}"
            )));
        }
        let outer: usize = self.dims[..slot].iter().product();
        let inner: usize = self.dims[slot + 1..].iter().product();
        let big_n = vectors.len();
        let mut coeffs = vec![S::zero(); outer * big_n * inner];
        for o in 0..outer {
            let src = &self.coeffs[o * n * inner..(o + 1) * n * inner];
            for (j, v) in vectors.iter().enumerate() {
                let dst = &mut coeffs[(o * big_n + j) * inner..(o * big_n + j + 1) * inner];
                for (a, &va) in v.iter().enumerate() {
                    for (d, &t) in dst.iter_mut().zip(&src[a * inner..(a + 1) * inner]) {
                        *d += t * va;
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims[slot] = big_n;
        let mut out = MultilinearForm::new(dims, coeffs)?;
        out.domain_p = self.domain_p.clone();
        Ok(out)
    }

    /// Reorders slots: slot `k` of the result is slot `perm[k]` of `self`.
    pub fn permute_slots(&self, perm: &[usize]) -> Result<Self> {
        let m = self.arity();
        let mut seen = vec![false; m];
        if perm.len() != m
            || perm
                .iter()
                .any(|&k| k >= m || std::mem::replace(&mut seen[k], true))
        {
            return Err(Error::Shape(format!(
                "{perm:?} is not a permutation of 0..{m}"
            )));
        }
        let dims: Vec<usize> = perm.iter().map(|&k| self.dims[k]).collect();
        let mut src = vec![0usize; m];
        let out = MultilinearForm::from_fn(dims, |idx| {
            for (k, &j) in idx.iter().enumerate() {
                src[perm[k]] = j;
            }
            self.coeffs[self.offset(&src).expect("permuted index in range")]
        })?;
        let domain = ExponentVector::new(perm.iter().map(|&k| self.domain_p[k].clone()).collect());
        let mut out = out.with_domain(domain)?;
        out.analytic_norm = self.analytic_norm;
        Ok(out)
    }

    /// Bilinear transpose.
    pub fn transpose(&self) -> Result<Self> {
        if self.arity() != 2 {
            return Err(Error::Shape("transpose needs a bilinear form".into()));
        }
        self.permute_slots(&[1, 0])
    }

    /// `c · T`; an attached analytic norm is rescaled by `|c|`.
    pub fn scaled(&self, c: S) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|z| *z *= c);
        if let Some(a) = out.analytic_norm.as_mut() {
            a.value *= c.modulus_f64();
        }
        out
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&u, &v)| acc + u * v)
}

fn checked_size(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::Shape("a form needs at least one slot".into()));
    }
    if dims.contains(&0) {
        return Err(Error::Shape(format!(
            "dimensions must be positive, got {dims:?}"
        )));
    }
    dims.iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .ok_or_else(|| Error::Shape(format!("dims {dims:?} overflow")))
}

fn advance(idx: &mut [usize], dims: &[usize]) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return;
        }
        idx[k] = 0;
    }
}

/// Iterates zero-based multi-indices in row-major order.
pub fn multi_indices(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let size: usize = dims.iter().product();
    let mut idx = vec![0usize; dims.len()];
    (0..size).map(move |_| {
        let out = idx.clone();
        advance(&mut idx, dims);
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn identity(n: usize) -> MultilinearForm<f64> {
        MultilinearForm::from_fn(vec![n, n], |j| if j[0] == j[1] { 1.0 } else { 0.0 }).unwrap()
    }

    fn basis(n: usize, j: usize) -> Vec<f64> {
        VectorInLp::<f64>::basis(n, j, ExtScalar::integer(2)).entries
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(
            identity(2).evaluate(&[basis(2, 0), basis(2, 0)]).unwrap(),
            1.0
        );
        let dot3 = MultilinearForm::<f64>::from_fn(vec![2, 2, 2], |j| {
            if j[0] == j[1] && j[1] == j[2] {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let ones = vec![1.0, 1.0];
        assert_eq!(
            dot3.evaluate(&[ones.clone(), ones.clone(), ones.clone()])
                .unwrap(),
            2.0
        );
        assert_eq!(
            dot3.evaluate(&[ones.clone(), vec![0.0, 0.0], ones])
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn shape_errors() {
        assert!(MultilinearForm::<f64>::new(vec![2, 2], vec![0.0; 3]).is_err());
        assert!(MultilinearForm::<f64>::new(vec![], vec![]).is_err());
        assert!(MultilinearForm::<f64>::new(vec![2, 0], vec![]).is_err());
        assert!(MultilinearForm::<f64>::zeros(vec![usize::MAX, 3]).is_err());
        let t = identity(2);
        assert!(matches!(t.evaluate(&[basis(2, 0)]), Err(Error::Shape(_))));
        assert!(matches!(
            t.evaluate(&[basis(2, 0), vec![1.0]]),
            Err(Error::Shape(_))
        ));
        assert!(t.coefficient(&[0, 2]).is_err());
        assert!(t.clone().with_domain("2".parse().unwrap()).is_err());
        assert!(t.with_domain("2,0".parse().unwrap()).is_err());
    }

    #[test]
    fn evaluate_on_basis_reproduces_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let dims = vec![2, 3, 4];
        let t = MultilinearForm::<C64>::from_fn(dims.clone(), |_| C64::gaussian(&mut rng)).unwrap();
        for idx in multi_indices(&dims) {
            let xs: Vec<Vec<C64>> = idx
                .iter()
                .zip(&dims)
                .map(|(&j, &n)| VectorInLp::<C64>::basis(n, j, ExtScalar::integer(3)).entries)
                .collect();
            assert_eq!(t.evaluate(&xs).unwrap(), t.coefficient(&idx).unwrap());
        }
    }

    #[test]
    fn multilinear_in_each_slot() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let dims = vec![3, 2, 4];
        let t = MultilinearForm::<f64>::from_fn(dims.clone(), |_| f64::gaussian(&mut rng)).unwrap();
        let rand_args = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
            dims.iter()
                .map(|&n| (0..n).map(|_| f64::gaussian(rng)).collect())
                .collect()
        };
        for slot in 0..3 {
            let xs = rand_args(&mut rng);
            let ys = rand_args(&mut rng);
            let (a, b): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let mut mixed = xs.clone();
            mixed[slot] = xs[slot]
                .iter()
                .zip(&ys[slot])
                .map(|(u, v)| a * u + b * v)
                .collect();
            let mut only_y = xs.clone();
            only_y[slot] = ys[slot].clone();
            let lhs = t.evaluate(&mixed).unwrap();
            let rhs = a * t.evaluate(&xs).unwrap() + b * t.evaluate(&only_y).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn contraction_matches_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dims = vec![3, 4, 2, 3];
        let t = MultilinearForm::<f64>::from_fn(dims.clone(), |_| f64::gaussian(&mut rng)).unwrap();
        let xs: Vec<Vec<f64>> = dims
            .iter()
            .map(|&n| (0..n).map(|_| f64::gaussian(&mut rng)).collect())
            .collect();
        let full = t.evaluate(&xs).unwrap();
        for slot in 0..4 {
            let g = t.contract_except(slot, &xs).unwrap();
            assert!((dot(&g, &xs[slot]) - full).abs() < 1e-12 * (1.0 + full.abs()));
        }
    }

    #[test]
    fn apply_sequence_evaluates_on_the_sequence() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let dims = vec![3, 4, 2];
        let t = MultilinearForm::<f64>::from_fn(dims.clone(), |_| f64::gaussian(&mut rng)).unwrap();
        let seqs: Vec<Vec<Vec<f64>>> = [2usize, 5, 3]
            .iter()
            .zip(&dims)
            .map(|(&count, &n)| {
                (0..count)
                    .map(|_| (0..n).map(|_| f64::gaussian(&mut rng)).collect())
                    .collect()
            })
            .collect();
        let mut v = t.clone();
        for (k, seq) in seqs.iter().enumerate() {
            v = v.apply_sequence(k, seq).unwrap();
        }
        assert_eq!(v.dims(), &[2, 5, 3]);
        for idx in multi_indices(&[2, 5, 3]) {
            let xs: Vec<Vec<f64>> = idx
                .iter()
                .enumerate()
                .map(|(k, &j)| seqs[k][j].clone())
                .collect();
            let direct = t.evaluate(&xs).unwrap();
            assert!((v.coefficient(&idx).unwrap() - direct).abs() < 1e-12 * (1.0 + direct.abs()));
        }
        assert!(t.apply_sequence(3, &seqs[0]).is_err());
        assert!(t.apply_sequence(0, &[vec![1.0]]).is_err());
    }

    #[test]
    fn permutation_moves_indices() {
        let t = MultilinearForm::<f64>::from_fn(vec![2, 3, 4], |j| {
            (100 * j[0] + 10 * j[1] + j[2]) as f64
        })
        .unwrap()
        .with_domain("3,4,5".parse().unwrap())
        .unwrap();
        let p = t.permute_slots(&[2, 0, 1]).unwrap();
        assert_eq!(p.dims(), &[4, 2, 3]);
        assert_eq!(p.coefficient(&[3, 1, 2]).unwrap(), 123.0);
        assert_eq!(p.domain_p().to_string(), "5,3,4");
        assert!(t.permute_slots(&[0, 0, 1]).is_err());
        assert_eq!(
            identity(3).transpose().unwrap(),
            identity(3).with_domain("2,2".parse().unwrap()).unwrap()
        );
    }
}
