//! Twisted one-forms `Σ π(aⁱ) [D, π(bᵢ)]_ρ` and their real span.

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Echelon, SparseMatrix};
use crate::realpart::RealPartResult;
use crate::scalar::RealScalar;
use crate::triple::{CheckEntry, FiniteRealTriple};
use crate::twist::TwistData;

fn twisted_commutator_coords<R: RealScalar>(
    t: &FiniteRealTriple<R>,
    rho: Option<&TwistData<R>>,
    b: &[R],
) -> SparseMatrix<R> {
    let d = t.dirac_sparse();
    let pb = t.rep().apply_coords(b);
    let rho_b = match rho {
        Some(rho) => t.rep().apply_coords(&rho.apply_coords(t.spec(), b)),
        None => pb.clone(),
    };
    &(d * &pb) - &(&rho_b * d)
}

fn unit<R: RealScalar>(n: usize, k: usize) -> Vec<R> {
    let mut e = vec![R::zero(); n];
    e[k] = R::one();
    e
}

/// `Σ π(aⁱ) [D, π(bᵢ)]_ρ`, with ρ the identity when absent.
pub fn one_form<R: RealScalar>(
    pairs: &[(AlgebraElement<R>, AlgebraElement<R>)],
    t: &FiniteRealTriple<R>,
    rho: Option<&TwistData<R>>,
) -> Result<ComplexMatrix<R>> {
    if let Some(rho) = rho {
        rho.check_spec(t.spec())?;
    }
    let n = t.hilbert_dim();
    let mut acc = SparseMatrix::zeros(n, n);
    for (a, b) in pairs {
        for x in [a, b] {
            if x.spec() != t.spec() {
                return Err(Error::SpecMismatch(format!("{} vs {}", x.spec().label(), t.spec().label())));
            }
        }
        acc = &acc + &(&t.rep().apply_sparse(a) * &twisted_commutator_coords(t, rho, b.coords()));
    }
    Ok(acc.to_dense())
}

/// Real span of one-forms, kept as an echelon form over the `2n²` real
/// coordinates of an `n × n` operator.
#[derive(Clone, Debug)]
pub struct OneFormSpan<R: RealScalar> {
    pub dimension: usize,
    /// Independent generators `π(eᵢ)[D, π(eⱼ)]_ρ`.
    pub basis: Vec<SparseMatrix<R>>,
    echelon: Echelon<R>,
}

impl<R: RealScalar> OneFormSpan<R> {
    pub fn contains(&self, m: &ComplexMatrix<R>) -> bool {
        self.echelon.contains(SparseMatrix::from_dense(m).to_real_sparse())
    }
}

/// Span over ℝ of `π(eᵢ)[D, π(eⱼ)]_ρ` for all pairs of algebra basis
/// elements. The complex span can be larger.
pub fn omega1_span<R: RealScalar>(t: &FiniteRealTriple<R>, rho: Option<&TwistData<R>>) -> Result<OneFormSpan<R>> {
    if let Some(rho) = rho {
        rho.check_spec(t.spec())?;
    }
    let n = t.hilbert_dim();
    let dim = t.spec().real_dimension();
    let mut echelon = Echelon::new(2 * n * n);
    let mut basis = Vec::new();
    for j in 0..dim {
        let c = twisted_commutator_coords(t, rho, &unit(dim, j));
        if c.nnz() == 0 {
            continue;
        }
        for i in 0..dim {
            let w = t.rep().basis_sparse(i) * &c;
            if w.nnz() > 0 && echelon.insert(w.to_real_sparse()) {
                basis.push(w);
            }
        }
    }
    Ok(OneFormSpan { dimension: basis.len(), basis, echelon })
}

/// `[ω, a°]_{ρ°} = ω a° − ρ°(a°) ω = 0` for every `a` in the basis of `A_J`
/// and every generator `ω = π(eᵢ)[D, π(eⱼ)]_ρ`, using `a° = π(a*)` and
/// `ρ°(a°) = π((ρ⁻¹a)*)`.
pub fn check_twist_commutation<R: RealScalar>(
    t: &FiniteRealTriple<R>,
    rho: &TwistData<R>,
    result: &RealPartResult<R>,
) -> Result<CheckEntry> {
    rho.check_spec(t.spec())?;
    let scale = t.scale();
    let dim = t.spec().real_dimension();
    let mut entry = CheckEntry::new("A_J twist-commutes with one-forms", true, 0.0, "");
    if result.basis.dim() == 0 {
        return Ok(entry);
    }
    let opposites: Vec<(SparseMatrix<R>, SparseMatrix<R>)> = result
        .basis
        .vectors()
        .iter()
        .map(|a| {
            let a_star = AlgebraElement::new(t.spec(), a.clone())?.star();
            let back = AlgebraElement::new(t.spec(), rho.apply_inverse_coords(t.spec(), a))?.star();
            Ok((t.rep().apply_sparse(&a_star), t.rep().apply_sparse(&back)))
        })
        .collect::<Result<_>>()?;
    for j in 0..dim {
        let c = twisted_commutator_coords(t, Some(rho), &unit(dim, j));
        if c.nnz() == 0 {
            continue;
        }
        for i in 0..dim {
            let w = t.rep().basis_sparse(i) * &c;
            for (k, (a_op, rho_a_op)) in opposites.iter().enumerate() {
                let r = &(&w * a_op) - &(rho_a_op * &w);
                entry.residual = entry.residual.max(r.max_abs());
                if entry.passed && !r.is_negligible(scale * scale * scale) {
                    entry.passed = false;
                    entry.detail = format!("A_J element {k}, one-form ({i}, {j})");
                }
            }
        }
    }
    Ok(entry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Representation;
    use crate::linalg::AntilinearOp;
    use crate::realpart::real_part;
    use crate::scalar::Rational;
    use crate::triple::tests::{complex_on_c2, ko0_toy, ko6_toy};
    use crate::twist::twist_by_grading;
    use proptest::prelude::*;

    type Q = Rational;
    type M = ComplexMatrix<Q>;

    fn sigma1() -> M {
        M::from_ints(2, 2, &[(0, 0), (1, 0), (1, 0), (0, 0)])
    }

    fn toy(conjugate_second: bool) -> FiniteRealTriple<Q> {
        FiniteRealTriple::new(complex_on_c2(conjugate_second), sigma1(), None, None, None).unwrap()
    }

    /// Rank of real 8-vectors (re/im of 2×2 matrices) by floating elimination.
    fn float_rank(mut rows: Vec<[f64; 8]>) -> usize {
        let mut rank = 0;
        for col in 0..8 {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][col].abs() > 1e-9) else { continue };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for r in rows.iter_mut().skip(rank + 1) {
                let f = r[col] / pivot[col];
                for c in 0..8 {
                    r[c] -= f * pivot[c];
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn toy_span_matches_brute_force_oracle() {
        // π(z) = diag(z, z̄), D = σ₁: [D, π(w)] = (w̄ − w)[[0, 1], [−1, 0]], so
        // π(z)[D, π(w)] = −2i Im(w) [[0, z], [−z̄, 0]].
        let mut gens = Vec::new();
        for (zr, zi) in [(1.0, 0.0), (0.0, 1.0)] {
            for wi in [0.0, 1.0] {
                let f = -2.0 * wi; // coefficient of i
                                   // i f [[0, z], [−z̄, 0]] entries: (0,1) = i f z, (1,0) = −i f z̄
                let e01 = (-f * zi, f * zr);
                let e10 = (-f * zi, -f * zr);
                gens.push([0.0, 0.0, e01.0, e01.1, e10.0, e10.1, 0.0, 0.0]);
            }
        }
        let oracle = float_rank(gens);
        assert_eq!(oracle, 2);
        assert_eq!(omega1_span(&toy(true), None).unwrap().dimension, oracle);
        // Scalar action commutes with D.
        assert_eq!(omega1_span(&toy(false), None).unwrap().dimension, 0);
    }

    #[test]
    fn zero_dirac_has_no_one_forms() {
        let t = toy(true).with_dirac(M::zeros(2, 2)).unwrap();
        assert_eq!(omega1_span(&t, None).unwrap().dimension, 0);
    }

    #[test]
    fn identity_pair_gives_zero() {
        let t = toy(true);
        let one = AlgebraElement::identity(t.spec());
        let w = one_form(&[(one.clone(), one)], &t, None).unwrap();
        assert!(w.is_exactly_zero());
    }

    #[test]
    fn twist_commutation_on_twisted_toys() {
        for t in [ko0_toy(), ko6_toy(2)] {
            let (doubled, rho) = twist_by_grading(&t, None).unwrap();
            let rp = real_part(&doubled, None).unwrap();
            assert!(check_twist_commutation(&doubled, &rho, &rp).unwrap().passed);
        }
    }

    #[test]
    fn empty_real_part_passes_vacuously() {
        let rep = Representation::<Q>::defining(
            &crate::algebra::AlgebraSpec::new(vec![crate::algebra::BlockKind::Quaternions]).unwrap(),
        )
        .unwrap();
        // J = conj does not commute with the quaternion units i, k: A_J is the real span of 1 and j.
        let t = FiniteRealTriple::new(rep, M::zeros(2, 2), None, Some(AntilinearOp::conjugation(2)), None).unwrap();
        let mut rp = real_part(&t, None).unwrap();
        rp.basis = crate::linalg::RealSubspaceBasis::empty(4);
        let rho = TwistData::identity(1);
        assert!(check_twist_commutation(&t, &rho, &rp).unwrap().passed);
    }

    proptest! {
        #[test]
        fn one_forms_lie_in_the_span(coeffs in proptest::collection::vec(-5i64..5, 8)) {
            let (doubled, rho) = twist_by_grading(&ko6_toy(1), None).unwrap();
            let span = omega1_span(&doubled, Some(&rho)).unwrap();
            let spec = doubled.spec();
            let el = |c: &[i64]| AlgebraElement::new(spec, c.iter().map(|&v| Q::from(v)).collect()).unwrap();
            let pairs = vec![(el(&coeffs[..4]), el(&coeffs[4..]))];
            let w = one_form(&pairs, &doubled, Some(&rho)).unwrap();
            prop_assert!(span.contains(&w));
        }
    }
}
