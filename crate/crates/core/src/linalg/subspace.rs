use std::collections::BTreeMap;

use super::LinalgError;
use crate::scalar::RealScalar;

/// Sparse real vector: `(index, value)` pairs sorted by index, no stored zeros.
pub type SparseVec<R> = Vec<(usize, R)>;

pub fn to_sparse<R: RealScalar>(dense: &[R]) -> SparseVec<R> {
    dense.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
}

pub fn to_dense<R: RealScalar>(sparse: &SparseVec<R>, len: usize) -> Vec<R> {
    let mut out = vec![R::zero(); len];
    for (i, v) in sparse {
        out[*i] = v.clone();
    }
    out
}

fn lookup<R>(row: &SparseVec<R>, col: usize) -> Option<&R> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `a - f·b`, dropping entries negligible at `scale`.
fn axpy<R: RealScalar>(a: &SparseVec<R>, f: &R, b: &SparseVec<R>, scale: f64) -> SparseVec<R> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        let (col, val) = if take_a {
            i += 1;
            (a[i - 1].0, a[i - 1].1.clone())
        } else if take_b {
            j += 1;
            (b[j - 1].0, -(f.clone() * b[j - 1].1.clone()))
        } else {
            i += 1;
            j += 1;
            (a[i - 1].0, a[i - 1].1.clone() - f.clone() * b[j - 1].1.clone())
        };
        if !val.is_negligible(scale) {
            out.push((col, val));
        }
    }
    out
}

/// Incremental row echelon form over a real field.
///
/// Rows are inserted one at a time and reduced against the pivots found so
/// far; a row that reduces to zero is linearly dependent and discarded.
/// Exact mode pivots on the first nonzero entry. Float mode pivots on the
/// largest entry and treats anything below `τ·scale` as zero, where `scale`
/// is the largest magnitude seen so far.
#[derive(Clone, Debug)]
pub struct Echelon<R: RealScalar> {
    ncols: usize,
    rows: Vec<SparseVec<R>>,
    pivots: Vec<usize>,
    scale: f64,
}

impl<R: RealScalar> Echelon<R> {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new(), pivots: Vec::new(), scale: 0.0 }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn reduce(&self, mut row: SparseVec<R>) -> SparseVec<R> {
        for (pivot_row, &p) in self.rows.iter().zip(&self.pivots) {
            if let Some(f) = lookup(&row, p) {
                let f = f.clone();
                row = axpy(&row, &f, pivot_row, self.scale);
            }
        }
        row
    }

    /// Inserts a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: SparseVec<R>) -> bool {
        if self.is_full() {
            return false;
        }
        if !R::EXACT {
            let m = row.iter().map(|(_, v)| v.magnitude()).fold(0.0, f64::max);
            self.scale = self.scale.max(m);
        }
        let row: SparseVec<R> = row.into_iter().filter(|(_, v)| !v.is_negligible(self.scale)).collect();
        let reduced = self.reduce(row);
        if reduced.is_empty() {
            return false;
        }
        let pos = if R::EXACT {
            0
        } else {
            let mut best = 0;
            for (k, (_, v)) in reduced.iter().enumerate() {
                if v.magnitude() > reduced[best].1.magnitude() {
                    best = k;
                }
            }
            best
        };
        let (pivot_col, pivot_val) = reduced[pos].clone();
        let normalized: SparseVec<R> = reduced
            .into_iter()
            .map(|(c, v)| if c == pivot_col { (c, R::one()) } else { (c, v / pivot_val.clone()) })
            .collect();
        self.rows.push(normalized);
        self.pivots.push(pivot_col);
        true
    }

    pub fn contains(&self, row: SparseVec<R>) -> bool {
        let row: SparseVec<R> = row.into_iter().filter(|(_, v)| !v.is_negligible(self.scale)).collect();
        self.reduce(row).is_empty()
    }

    /// Back-substitutes to reduced row echelon form.
    pub fn into_rref(mut self) -> Rref<R> {
        let rank = self.rows.len();
        for j in (0..rank).rev() {
            let p = self.pivots[j];
            for i in 0..j {
                if let Some(f) = lookup(&self.rows[i], p) {
                    let f = f.clone();
                    self.rows[i] = axpy(&self.rows[i], &f, &self.rows[j], self.scale);
                }
            }
        }
        Rref { ncols: self.ncols, rows: self.rows, pivots: self.pivots }
    }
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref<R: RealScalar> {
    pub ncols: usize,
    pub rows: Vec<SparseVec<R>>,
    pub pivots: Vec<usize>,
}

impl<R: RealScalar> Rref<R> {
    /// Basis of `{x : rows · x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<R>> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut x = vec![R::zero(); self.ncols];
                x[free] = R::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if let Some(v) = lookup(row, free) {
                        x[p] = -v.clone();
                    }
                }
                x
            })
            .collect()
    }
}

/// Dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix<R: RealScalar> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<R>,
}

impl<R: RealScalar> RealMatrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!("{} entries for a {rows}x{cols} real matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::new(rows, cols, entries.iter().map(|&v| R::from_i64(v)).collect()).expect("shape")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = R::one();
        }
        m
    }

    pub fn row(&self, r: usize) -> &[R] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn apply(&self, x: &[R]) -> Vec<R> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).fold(R::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }
}

/// Linearly independent real vectors spanning a subspace of `R^ambient`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSubspaceBasis<R: RealScalar> {
    ambient: usize,
    vectors: Vec<Vec<R>>,
}

impl<R: RealScalar> RealSubspaceBasis<R> {
    pub fn empty(ambient: usize) -> Self {
        Self { ambient, vectors: Vec::new() }
    }

    /// Keeps a maximal independent subset of `vectors`, in order.
    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<R>>) -> Result<Self, LinalgError> {
        let mut ech = Echelon::new(ambient);
        let mut kept = Vec::new();
        for v in vectors {
            if v.len() != ambient {
                return Err(LinalgError::Shape(format!("vector of length {} in R^{ambient}", v.len())));
            }
            if ech.insert(to_sparse(&v)) {
                kept.push(v);
            }
        }
        Ok(Self { ambient, vectors: kept })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<R>] {
        &self.vectors
    }

    fn echelon(&self) -> Echelon<R> {
        let mut ech = Echelon::new(self.ambient);
        for v in &self.vectors {
            ech.insert(to_sparse(v));
        }
        ech
    }

    pub fn contains(&self, v: &[R]) -> bool {
        v.len() == self.ambient && self.echelon().contains(to_sparse(v))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        let ech = other.echelon();
        self.vectors.iter().all(|v| ech.contains(to_sparse(v)))
    }

    pub fn same_span(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// Dimension of `span(self) + span(other)`.
    pub fn sum_dim(&self, other: &Self) -> Result<usize, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut ech = self.echelon();
        for v in &other.vectors {
            ech.insert(to_sparse(v));
        }
        Ok(ech.rank())
    }
}

/// Basis of `{x : L x = 0}`.
pub fn real_nullspace<R: RealScalar>(l: &RealMatrix<R>) -> RealSubspaceBasis<R> {
    let mut ech = Echelon::new(l.cols);
    for r in 0..l.rows {
        ech.insert(to_sparse(l.row(r)));
        if ech.is_full() {
            break;
        }
    }
    RealSubspaceBasis { ambient: l.cols, vectors: ech.into_rref().nullspace() }
}

/// Null space of the map `x ↦ Σ x_k columns[k]`, with each column given as a
/// sparse vector in some (possibly huge) ambient space. Only rows that carry
/// a nonzero entry are materialized.
pub fn nullspace_of_columns<R: RealScalar>(columns: &[SparseVec<R>]) -> RealSubspaceBasis<R> {
    let n = columns.len();
    let mut rows: BTreeMap<usize, SparseVec<R>> = BTreeMap::new();
    for (k, col) in columns.iter().enumerate() {
        for (i, v) in col {
            rows.entry(*i).or_default().push((k, v.clone()));
        }
    }
    let mut ech = Echelon::new(n);
    for (_, row) in rows {
        ech.insert(row);
        if ech.is_full() {
            break;
        }
    }
    RealSubspaceBasis { ambient: n, vectors: ech.into_rref().nullspace() }
}

/// Rank of a family of sparse vectors.
pub fn span_rank<R: RealScalar>(ambient: usize, vectors: impl IntoIterator<Item = SparseVec<R>>) -> usize {
    let mut ech = Echelon::new(ambient);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Intersection of two spans together with the coefficients of each
/// intersection vector in terms of `b1`.
pub fn intersect_with_coefficients<R: RealScalar>(
    b1: &RealSubspaceBasis<R>,
    b2: &RealSubspaceBasis<R>,
) -> Result<(RealSubspaceBasis<R>, Vec<Vec<R>>), LinalgError> {
    if b1.ambient != b2.ambient {
        return Err(LinalgError::AmbientMismatch(b1.ambient, b2.ambient));
    }
    let mut columns: Vec<SparseVec<R>> = b1.vectors.iter().map(|v| to_sparse(v)).collect();
    columns.extend(b2.vectors.iter().map(|v| to_sparse(v).into_iter().map(|(i, x)| (i, -x)).collect()));
    let null = nullspace_of_columns(&columns);
    let n1 = b1.dim();
    let mut vectors = Vec::new();
    let mut coefficients = Vec::new();
    for sol in null.vectors {
        let alpha = sol[..n1].to_vec();
        let mut v = vec![R::zero(); b1.ambient];
        for (a, bv) in alpha.iter().zip(&b1.vectors) {
            if a.is_zero() {
                continue;
            }
            for (slot, x) in v.iter_mut().zip(bv) {
                *slot += a.clone() * x.clone();
            }
        }
        vectors.push(v);
        coefficients.push(alpha);
    }
    // Independent inputs make the map (α, β) ↦ Σ αᵢ b1ᵢ injective on the null
    // space, so these vectors are already a basis.
    Ok((RealSubspaceBasis { ambient: b1.ambient, vectors }, coefficients))
}

/// Basis of `span(b1) ∩ span(b2)`.
pub fn subspace_intersect<R: RealScalar>(
    b1: &RealSubspaceBasis<R>,
    b2: &RealSubspaceBasis<R>,
) -> Result<RealSubspaceBasis<R>, LinalgError> {
    intersect_with_coefficients(b1, b2).map(|(basis, _)| basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;
    use proptest::prelude::*;

    type Q = Rational;

    fn q(v: i64) -> Q {
        Q::from(v)
    }

    fn basis(ambient: usize, vs: &[&[i64]]) -> RealSubspaceBasis<Q> {
        RealSubspaceBasis::from_spanning(ambient, vs.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn nullspace_of_zero_map_is_everything() {
        let ns = real_nullspace(&RealMatrix::<Q>::zeros(2, 4));
        assert_eq!(ns.dim(), 4);
    }

    #[test]
    fn nullspace_of_identity_is_trivial() {
        assert_eq!(real_nullspace(&RealMatrix::<Q>::identity(3)).dim(), 0);
    }

    #[test]
    fn nullspace_of_difference_row() {
        let ns = real_nullspace(&RealMatrix::<Q>::from_ints(1, 2, &[1, -1]));
        assert_eq!(ns.vectors(), &[vec![q(1), q(1)]]);
    }

    #[test]
    fn float_nullspace_respects_tolerance() {
        let l = RealMatrix::<f64>::new(2, 2, vec![1.0, 1.0, 1.0, 1.0 + 1e-14]).unwrap();
        assert_eq!(real_nullspace(&l).dim(), 1);
        let l = RealMatrix::<f64>::new(2, 2, vec![1.0, 1.0, 1.0, 1.5]).unwrap();
        assert_eq!(real_nullspace(&l).dim(), 0);
    }

    #[test]
    fn intersect_equal_spans() {
        let b = basis(3, &[&[1, 2, 0], &[0, 1, 1]]);
        let i = subspace_intersect(&b, &b).unwrap();
        assert!(i.same_span(&b));
    }

    #[test]
    fn orthogonal_lines_meet_at_origin() {
        let i = subspace_intersect(&basis(2, &[&[1, 0]]), &basis(2, &[&[0, 1]])).unwrap();
        assert_eq!(i.dim(), 0);
    }

    #[test]
    fn coordinate_planes_meet_in_an_axis() {
        let i = subspace_intersect(&basis(3, &[&[1, 0, 0], &[0, 1, 0]]), &basis(3, &[&[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert!(i.same_span(&basis(3, &[&[0, 1, 0]])));
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        assert!(subspace_intersect(&basis(2, &[&[1, 0]]), &basis(3, &[&[1, 0, 0]])).is_err());
    }

    #[test]
    fn columns_nullspace_handles_sparse_ambient() {
        // x0·e_1000 + x1·(e_1000 + e_5) + x2·e_5 = 0  ⇒  x = t(1, -1, 1).
        let cols = vec![vec![(1000, q(1))], vec![(5, q(1)), (1000, q(1))], vec![(5, q(1))]];
        let ns = nullspace_of_columns(&cols);
        assert_eq!(ns.dim(), 1);
        assert!(ns.contains(&[q(1), q(-1), q(1)]));
    }

    fn family(ambient: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-2i64..=2, ambient), 0..=4)
    }

    proptest! {
        #[test]
        fn grassmann_identity(v1 in family(4), v2 in family(4)) {
            let to_q = |f: Vec<Vec<i64>>| f.into_iter().map(|v| v.into_iter().map(q).collect()).collect();
            let b1 = RealSubspaceBasis::from_spanning(4, to_q(v1)).unwrap();
            let b2 = RealSubspaceBasis::from_spanning(4, to_q(v2)).unwrap();
            let inter = subspace_intersect(&b1, &b2).unwrap();
            prop_assert_eq!(b1.dim() + b2.dim(), b1.sum_dim(&b2).unwrap() + inter.dim());
            prop_assert!(inter.is_subspace_of(&b1));
            prop_assert!(inter.is_subspace_of(&b2));
        }

        #[test]
        fn nullspace_vectors_are_annihilated(rows in 1usize..4, cols in 1usize..5, seed in proptest::collection::vec(-3i64..=3, 20)) {
            let l = RealMatrix::<Q>::from_ints(rows, cols, &seed[..rows * cols]);
            let ns = real_nullspace(&l);
            for v in ns.vectors() {
                prop_assert!(l.apply(v).iter().all(|x| x.is_zero()));
            }
            // rank-nullity against an independent rank computation
            let rank = span_rank(cols, (0..rows).map(|r| to_sparse(l.row(r))));
            prop_assert_eq!(rank + ns.dim(), cols);
        }

        #[test]
        fn float_nullspace_residual_within_tolerance(seed in proptest::collection::vec(-3i64..=3, 12)) {
            let l = RealMatrix::<f64>::new(3, 4, seed.iter().map(|&v| v as f64 / 3.0).collect()).unwrap();
            let norm = l.data.iter().map(|v| v.abs()).fold(0.0, f64::max);
            for v in real_nullspace(&l).vectors() {
                let xn = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
                for r in l.apply(v) {
                    prop_assert!(r.abs() <= 1e-10 * norm.max(1.0) * xn.max(1.0) * 4.0);
                }
            }
        }
    }
}
