//! The pre-generator A_{z,z′,ϑ} acting on φ-polynomials.
//!
//! A = ½ Σ_{i,j≥2} ij(φ_{i+j−1} − φ_iφ_j) ∂_i∂_j
//!   + ϑ/2 Σ_{i,j≥1} (i+j+1) φ_iφ_j ∂_{i+j+1}
//!   + ½ Σ_{i≥2} [(1−ϑ)i(i−1)φ_{i−1} + (z+z′)iφ_{i−1} − i(i−1)φ_i − iθφ_i] ∂_i
//!
//! with θ = zz′/ϑ and φ_1 ≡ 1. Only z + z′ and zz′ enter, and both are real
//! in every admissible parameter case.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::partition_count;
use crate::rational::{Rational, Scalar};
use crate::zmeasure::ZParams;

use super::phi::{check_degree, exponents, monomial_basis, times_phi, without_phi, PhiPoly};

/// Largest weighted degree the operator accepts.
pub const MAX_PHI_DEGREE: usize = 16;
/// Largest degree for the dense spectrum check.
pub const MAX_SPECTRUM_DEGREE: usize = 7;

/// The scalars the operator depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorParams<S> {
    pub vartheta: S,
    /// z + z′.
    pub sum_z: S,
    /// θ = zz′/ϑ.
    pub theta: S,
}

impl GeneratorParams<f64> {
    pub fn from_zparams(p: &ZParams) -> Self {
        GeneratorParams { vartheta: p.vartheta().to_f64_lossy(), sum_z: (p.z() + p.zprime()).re, theta: p.theta() }
    }

    /// Parameters that only fix θ (z + z′ = 0 is allowed here since the
    /// spectrum does not depend on it).
    pub fn from_theta(theta: f64, vartheta: f64) -> Self {
        GeneratorParams { vartheta, sum_z: 0.0, theta }
    }
}

impl GeneratorParams<Rational> {
    pub fn from_zparams_exact(p: &ZParams) -> Result<Self> {
        let missing = || Error::Parameter("exact operator needs rational parameters".into());
        Ok(GeneratorParams {
            vartheta: p.vartheta().clone(),
            sum_z: p.sum_z_exact().ok_or_else(missing)?,
            theta: p.theta_exact().ok_or_else(missing)?,
        })
    }
}

fn s<S: Scalar>(n: i64) -> S {
    S::from_i64(n)
}

/// A f, term by term. The weighted degree never increases.
pub fn generator_apply<S: Scalar>(f: &PhiPoly<S>, p: &GeneratorParams<S>) -> Result<PhiPoly<S>> {
    check_degree(f.weighted_degree(), MAX_PHI_DEGREE)?;
    let mut out = PhiPoly::zero();
    for (mono, c) in f.terms() {
        let exps = exponents(mono);
        // second-order part; ordered pairs (i,j) and (j,i) both occur
        for (a, &(i, ei)) in exps.iter().enumerate() {
            for &(j, ej) in &exps[a..] {
                let (mult, rest) = if i == j {
                    if ei < 2 {
                        continue;
                    }
                    ((ei * (ei - 1)) as i64, without_phi(&without_phi(mono, i), i))
                } else {
                    (2 * (ei * ej) as i64, without_phi(&without_phi(mono, i), j))
                };
                // ½ · ij · mult, with mult already counting both orders
                let w = c.clone() * s::<S>((i * j) as i64 * mult);
                out.add_term(times_phi(&rest, i + j - 1), w.clone() * half_of::<S>());
                out.add_term(times_phi(&times_phi(&rest, i), j), -(w * half_of::<S>()));
            }
        }
        for &(k, e) in &exps {
            let rest = without_phi(mono, k);
            let ce = c.clone() * s::<S>(e as i64);
            // ϑ/2 Σ_{i+j=k−1} k φ_iφ_j ∂_k
            if k >= 3 {
                for i in 1..=k - 2 {
                    let j = k - 1 - i;
                    let m = times_phi(&times_phi(&rest, i), j);
                    out.add_term(m, ce.clone() * p.vartheta.clone() * s::<S>(k as i64) * half_of::<S>());
                }
            }
            // drift
            let ki = k as i64;
            let lower = (S::one() - p.vartheta.clone()) * s::<S>(ki * (ki - 1)) + p.sum_z.clone() * s::<S>(ki);
            out.add_term(times_phi(&rest, k - 1), ce.clone() * lower * half_of::<S>());
            let diag = -(s::<S>(ki * (ki - 1)) + p.theta.clone() * s::<S>(ki));
            out.add_term(mono.clone(), ce * diag * half_of::<S>());
        }
    }
    Ok(out)
}

/// ½ in the scalar type, built from integers so that it is exact for rationals.
fn half_of<S: Scalar>() -> S {
    S::from_rational(&Rational::new(1.into(), 2.into()))
}

/// Γ(f, g) = Σ_{i,j≥2} ij(φ_{i+j−1} − φ_iφ_j) ∂_i f ∂_j g, the defect
/// A(fg) − f A g − g A f of a second-order operator.
pub fn carre_du_champ<S: Scalar>(f: &PhiPoly<S>, g: &PhiPoly<S>) -> PhiPoly<S> {
    let fi: Vec<usize> = indices(f);
    let gj: Vec<usize> = indices(g);
    let mut out = PhiPoly::zero();
    for &i in &fi {
        let df = f.derivative(i);
        for &j in &gj {
            let dg = g.derivative(j);
            let coef = PhiPoly::phi(i + j - 1).sub(&PhiPoly::phi(i).mul(&PhiPoly::phi(j)));
            out = out.add(&coef.mul(&df).mul(&dg).scale(&S::from_i64((i * j) as i64)));
        }
    }
    out
}

fn indices<S: Scalar>(f: &PhiPoly<S>) -> Vec<usize> {
    let mut v: Vec<usize> = f.terms().flat_map(|(m, _)| m.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// The matrix of A on [`monomial_basis`]`(max_degree)`; column c holds the
/// image of basis element c.
pub fn generator_matrix(max_degree: usize, p: &GeneratorParams<f64>) -> Result<(Vec<Vec<usize>>, DMatrix<f64>)> {
    check_degree(max_degree, MAX_PHI_DEGREE)?;
    let basis = monomial_basis(max_degree);
    let index: std::collections::HashMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut a = DMatrix::zeros(basis.len(), basis.len());
    for (col, m) in basis.iter().enumerate() {
        let image = generator_apply(&PhiPoly::monomial(m.clone(), 1.0), p)?;
        for (mono, c) in image.terms() {
            let row = index.get(mono).ok_or_else(|| {
                Error::Consistency(format!("A raised the degree of phi monomial {m:?} to {mono:?}"))
            })?;
            a[(*row, col)] = *c;
        }
    }
    Ok((basis, a))
}

/// Predicted versus computed spectrum of A up to a weighted degree.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub max_degree: usize,
    pub theta: f64,
    /// (−λ_m, multiplicity) for m = 0, 2, 3, …, max_degree.
    pub expected: Vec<(f64, usize)>,
    /// Computed eigenvalues, ascending by real part.
    pub computed: Vec<(f64, f64)>,
    /// Number of computed eigenvalues within `tol` of each expected value.
    pub found: Vec<usize>,
    pub max_imag: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Eigenvalues of A up to `max_degree` against {−λ_m} with multiplicity
/// p(m) − p(m−1) (and 1 for the constant).
pub fn spectrum_check(max_degree: usize, p: &GeneratorParams<f64>, tol: f64) -> Result<SpectrumReport> {
    if max_degree > MAX_SPECTRUM_DEGREE {
        return Err(Error::Capacity { what: "spectrum degree", value: max_degree, max: MAX_SPECTRUM_DEGREE });
    }
    let (_, a) = generator_matrix(max_degree, p)?;
    let mut computed: Vec<(f64, f64)> = a.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    computed.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut expected = vec![(0.0, 1)];
    for m in 2..=max_degree {
        let lam = m as f64 * (m as f64 - 1.0 + p.theta) / 2.0;
        expected.push((-lam, (partition_count(m) - partition_count(m - 1)) as usize));
    }
    let found: Vec<usize> = expected
        .iter()
        .map(|(e, _)| computed.iter().filter(|(re, im)| (re - e).abs() <= tol && im.abs() <= tol).count())
        .collect();
    let max_imag = computed.iter().map(|(_, im)| im.abs()).fold(0.0, f64::max);
    let passed = found.iter().zip(&expected).all(|(f, (_, m))| f == m)
        && found.iter().sum::<usize>() == computed.len();
    Ok(SpectrumReport { max_degree, theta: p.theta, expected, computed, found, max_imag, tol, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn exact(sum_z: Rational, theta: Rational, vartheta: Rational) -> GeneratorParams<Rational> {
        GeneratorParams { vartheta, sum_z, theta }
    }

    #[test]
    fn annihilates_constants() {
        let p = exact(int(1), int(2), ratio(1, 2));
        assert!(generator_apply(&PhiPoly::constant(int(5)), &p).unwrap().is_zero());
    }

    #[test]
    fn phi2_image() {
        for (sz, th, vt) in [(int(1), int(1), int(1)), (ratio(2, 3), ratio(5, 7), ratio(1, 2)), (int(3), int(2), int(2))] {
            let p = exact(sz.clone(), th.clone(), vt.clone());
            let img = generator_apply(&PhiPoly::phi(2), &p).unwrap();
            let c0 = (int(1) - &vt) + &sz;
            let want = PhiPoly::constant(c0.clone()).sub(&PhiPoly::phi(2).scale(&(int(1) + &th)));
            assert_eq!(img, want);
            // φ_2 + c is an eigenfunction with eigenvalue −λ_2
            let c = -c0 / (int(1) + &th);
            let f = PhiPoly::phi(2).add(&PhiPoly::constant(c));
            assert_eq!(generator_apply(&f, &p).unwrap(), f.scale(&-(int(1) + &th)));
        }
    }

    #[test]
    fn phi2_squared() {
        let p = exact(ratio(1, 3), ratio(2, 5), int(1));
        let f = PhiPoly::phi(2).mul(&PhiPoly::phi(2));
        let img = generator_apply(&f, &p).unwrap();
        assert!(img.weighted_degree() <= 4);
        // ½·2·2·(φ_3 − φ_2²)·2 from the second-order part
        assert_eq!(img.coeff(&[3]), int(4));
    }

    #[test]
    fn degree_cap() {
        let p = exact(int(1), int(1), int(1));
        let f = PhiPoly::monomial(vec![MAX_PHI_DEGREE + 1], int(1));
        assert!(matches!(generator_apply(&f, &p), Err(Error::Capacity { .. })));
    }

    /// Finite-difference check: φ_i are coordinates, so A f at a point is
    /// Σ b_i ∂_i f + ½ Σ a_ij ∂_i∂_j f, and the coefficients b, a can be read
    /// off from A applied to φ_i and φ_iφ_j.
    #[test]
    fn matches_numeric_action() {
        let p = GeneratorParams { vartheta: 1.5, sum_z: 0.7, theta: 0.9 };
        let x = [0.0, 1.0, 0.31, 0.12, 0.07, 0.03, 0.02, 0.01, 0.006, 0.004, 0.002, 0.001];
        let at = |g: &PhiPoly<f64>| g.eval_with(|i| x[i]);
        let f = PhiPoly::monomial(vec![2, 2, 3], 1.0).add(&PhiPoly::monomial(vec![4, 2], -2.0));
        let lhs = at(&generator_apply(&f, &p).unwrap());
        let mut rhs = 0.0;
        for i in 2..=5 {
            let b = at(&generator_apply(&PhiPoly::phi(i), &p).unwrap());
            let h = 1e-6;
            let mut xp = x;
            xp[i] += h;
            let mut xm = x;
            xm[i] -= h;
            let d = (f.eval_with(|k| xp[k]) - f.eval_with(|k| xm[k])) / (2.0 * h);
            rhs += b * d;
            for j in 2..=5 {
                let a_ij = at(&carre_du_champ(&PhiPoly::phi(i), &PhiPoly::phi(j)));
                let d2 = at(&f.derivative(i).derivative(j));
                rhs += 0.5 * a_ij * d2;
            }
        }
        assert!((lhs - rhs).abs() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn carre_du_champ_is_product_defect() {
        let p = exact(ratio(1, 3), ratio(2, 9), int(1));
        let phis: Vec<PhiPoly<Rational>> = vec![
            PhiPoly::phi(2),
            PhiPoly::phi(3),
            PhiPoly::phi(2).mul(&PhiPoly::phi(3)).add(&PhiPoly::constant(ratio(1, 2))),
        ];
        for f in &phis {
            for g in &phis {
                let a = |h: &PhiPoly<Rational>| generator_apply(h, &p).unwrap();
                let defect = a(&f.mul(g)).sub(&f.mul(&a(g))).sub(&g.mul(&a(f)));
                assert_eq!(defect, carre_du_champ(f, g));
            }
        }
    }

    #[test]
    fn spectrum_small_degrees() {
        let r = spectrum_check(2, &GeneratorParams::from_theta(1.0, 1.0), 1e-8).unwrap();
        assert!(r.passed);
        assert_eq!(r.computed.len(), 2);
        assert!((r.computed[0].0 + 2.0).abs() < 1e-12);
        let r = spectrum_check(3, &GeneratorParams::from_theta(1.0, 1.0), 1e-8).unwrap();
        assert_eq!(r.expected[2].1, 1);
        assert!(r.passed);
    }

    #[test]
    fn spectrum_general_parameters() {
        for theta in [0.5, 1.0, 2.0] {
            for vartheta in [0.5, 1.0, 2.0] {
                let p = GeneratorParams { vartheta, sum_z: 0.4, theta };
                let r = spectrum_check(6, &p, 1e-8).unwrap();
                assert!(r.passed, "theta {theta} vartheta {vartheta}: {:?}", r.computed);
            }
        }
    }

    #[test]
    fn params_from_principal_case() {
        let z = ZParams::principal(Complex64::new(0.5, 1.0), int(1)).unwrap();
        let g = GeneratorParams::from_zparams(&z);
        assert!((g.sum_z - 1.0).abs() < 1e-15 && (g.theta - 1.25).abs() < 1e-15);
        let z = ZParams::complementary_exact(ratio(1, 3), ratio(2, 3), int(1)).unwrap();
        let g = GeneratorParams::from_zparams_exact(&z).unwrap();
        assert_eq!((g.sum_z, g.theta), (int(1), ratio(2, 9)));
    }

    proptest! {
        #[test]
        fn linear(a in -5i64..5, b in -5i64..5, i in 2usize..6, j in 2usize..6) {
            let p = exact(ratio(3, 4), ratio(1, 3), ratio(3, 2));
            let f = PhiPoly::phi(i).mul(&PhiPoly::phi(j));
            let g = PhiPoly::phi(i + 1);
            let lhs = generator_apply(&f.scale(&int(a)).add(&g.scale(&int(b))), &p).unwrap();
            let rhs = generator_apply(&f, &p).unwrap().scale(&int(a)).add(&generator_apply(&g, &p).unwrap().scale(&int(b)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_never_increases(mono in proptest::collection::vec(2usize..6, 0..4)) {
            let p = exact(ratio(1, 2), ratio(2, 3), ratio(1, 3));
            let f = PhiPoly::monomial(mono.clone(), int(1));
            let img = generator_apply(&f, &p).unwrap();
            prop_assert!(img.weighted_degree() <= f.weighted_degree());
        }
    }
}
