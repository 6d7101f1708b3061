//! Uniform external-field polynomials and their complex roots.
//!
//! For a graph G the bivariate table N_{k,j} counts configurations with k
//! plus-spins and cut size j, so Z(G, mu, z) = sum_{k,j} N_{k,j} mu^j z^k.
//! Root locations of the univariate z-polynomial at fixed mu is what the
//! real-rootedness probe inspects.

use nalgebra::{Complex, DMatrix};
use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poly::CountPolynomial;
use crate::scalar::MuSpec;
use crate::spin::{for_each_config, DEFAULT_ENUM_CAP};

/// Exact coefficient matrix of Z(G, mu, z) under a uniform field z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPolynomial {
    n: usize,
    m: usize,
    /// counts[k][j] = #configurations with k plus spins and cut size j
    counts: Vec<Vec<BigUint>>,
}

impl FieldPolynomial {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn counts(&self) -> &[Vec<BigUint>] {
        &self.counts
    }

    /// Summing out the field (z = 1) recovers the cut polynomial.
    pub fn column_sums(&self) -> CountPolynomial {
        let mut cols = vec![BigUint::zero(); self.m + 1];
        for row in &self.counts {
            for (j, c) in row.iter().enumerate() {
                cols[j] += c;
            }
        }
        CountPolynomial::from_coeffs(cols)
    }

    /// Coefficients a_k(mu) of the univariate polynomial in z, as floats.
    pub fn univariate_in_z(&self, mu: f64) -> Vec<f64> {
        let mu_pow: Vec<f64> = (0..=self.m).scan(1.0, |acc, _| {
            let v = *acc;
            *acc *= mu;
            Some(v)
        })
        .collect();
        self.counts
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, c)| biguint_to_f64(c) * mu_pow[j])
                    .sum()
            })
            .collect()
    }
}

fn biguint_to_f64(x: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY)
}

/// Exact bivariate coefficient matrix by exhaustive enumeration.
pub fn field_polynomial(g: &Graph) -> Result<FieldPolynomial> {
    field_polynomial_with_cap(g, DEFAULT_ENUM_CAP)
}

pub fn field_polynomial_with_cap(g: &Graph, cap: usize) -> Result<FieldPolynomial> {
    let (n, m) = (g.n(), g.m());
    let mut counts = vec![vec![0u64; m + 1]; n + 1];
    for_each_config(g, cap, |bits, cut| {
        counts[bits.count_ones() as usize][cut] += 1;
    })?;
    Ok(FieldPolynomial {
        n,
        m,
        counts: counts
            .into_iter()
            .map(|row| row.into_iter().map(BigUint::from).collect())
            .collect(),
    })
}

/// Complex roots of z -> Z(G, mu, z) with per-root convergence reporting.
#[derive(Clone, Debug)]
pub struct RootReport {
    pub roots: Vec<Complex<f64>>,
    /// relative residual |Z(root)| / sum_k |a_k| |root|^k
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
    pub max_abs_imag: f64,
}

pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;

/// Roots via the companion matrix, polished by a few Newton steps.
pub fn univariate_roots_in_z(fp: &FieldPolynomial, mu: &MuSpec) -> Result<RootReport> {
    if !mu.is_positive() {
        return Err(Error::NonPositiveMu(format!("{mu:?}")));
    }
    let mu_f = match mu {
        MuSpec::Exact(r) => crate::scalar::ratio_to_f64(r),
        MuSpec::Real(x) => *x,
    };
    let coeffs = fp.univariate_in_z(mu_f);
    roots_of_poly(&coeffs)
}

/// Roots of sum_k a_k z^k for float coefficients (degree >= 1 required).
pub fn roots_of_poly(coeffs: &[f64]) -> Result<RootReport> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::BadParameter(
            "polynomial coefficients overflow f64; pick a smaller mu for root finding".into(),
        ));
    }
    let degree = coeffs
        .iter()
        .rposition(|c| *c != 0.0)
        .ok_or_else(|| Error::BadParameter("zero polynomial has no roots".into()))?;
    if degree == 0 {
        return Err(Error::BadParameter(
            "constant polynomial has no roots".into(),
        ));
    }
    let lead = coeffs[degree];
    let mut companion = DMatrix::<f64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    let eigen = companion.complex_eigenvalues();
    let mut roots: Vec<Complex<f64>> = eigen.iter().copied().collect();
    for z in &mut roots {
        *z = newton_polish(coeffs, degree, *z);
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let residuals: Vec<f64> = roots
        .iter()
        .map(|&z| relative_residual(coeffs, degree, z))
        .collect();
    let converged: Vec<bool> = residuals.iter().map(|&r| r < ROOT_RESIDUAL_TOL).collect();
    let max_abs_imag = roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(RootReport {
        roots,
        residuals,
        converged,
        max_abs_imag,
    })
}

fn eval_poly(coeffs: &[f64], degree: usize, z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut p = Complex::new(coeffs[degree], 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for k in (0..degree).rev() {
        dp = dp * z + p;
        p = p * z + Complex::new(coeffs[k], 0.0);
    }
    (p, dp)
}

fn newton_polish(coeffs: &[f64], degree: usize, mut z: Complex<f64>) -> Complex<f64> {
    for _ in 0..6 {
        let (p, dp) = eval_poly(coeffs, degree, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn relative_residual(coeffs: &[f64], degree: usize, z: Complex<f64>) -> f64 {
    let (p, _) = eval_poly(coeffs, degree, z);
    let scale: f64 = coeffs[..=degree]
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * z.norm().powi(k as i32))
        .sum();
    if scale == 0.0 {
        p.norm()
    } else {
        p.norm() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{line_graph, Multigraph};
    use crate::spin::cut_polynomial;

    #[test]
    fn single_vertex_is_one_plus_z() {
        let fp = field_polynomial(&Graph::empty(1)).unwrap();
        assert_eq!(fp.counts()[0][0], BigUint::from(1u32));
        assert_eq!(fp.counts()[1][0], BigUint::from(1u32));
        let report = univariate_roots_in_z(&fp, &MuSpec::Real(1.0)).unwrap();
        assert_eq!(report.roots.len(), 1);
        assert!((report.roots[0] - Complex::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn k2_field_polynomial_by_inspection() {
        // Z = 1 + 2 mu z + z^2
        let fp = field_polynomial(&Graph::complete(2)).unwrap();
        assert_eq!(fp.counts()[0][0], BigUint::from(1u32));
        assert_eq!(fp.counts()[1][1], BigUint::from(2u32));
        assert_eq!(fp.counts()[2][0], BigUint::from(1u32));
        assert_eq!(fp.counts()[1][0], BigUint::from(0u32));
    }

    #[test]
    fn k2_roots_at_mu_two_match_quadratic_formula() {
        let fp = field_polynomial(&Graph::complete(2)).unwrap();
        let report = univariate_roots_in_z(&fp, &MuSpec::Real(2.0)).unwrap();
        // 1 + 4z + z^2 = 0 -> z = -2 +- sqrt(3)
        let expected = [-2.0 - 3f64.sqrt(), -2.0 + 3f64.sqrt()];
        assert_eq!(report.roots.len(), 2);
        for (root, want) in report.roots.iter().zip(expected) {
            assert!((root.re - want).abs() < 1e-10, "{root} vs {want}");
            assert!(root.im.abs() < 1e-12);
        }
        assert!(report.converged.iter().all(|&c| c));
    }

    #[test]
    fn column_sums_reproduce_cut_polynomial() {
        // includes the 9-vertex gadget: its field polynomial has degree 9
        // in z and must marginalize back to the cut polynomial
        let gadget = crate::gadget::h_gadget_graph();
        for g in [Graph::complete(4), Graph::cycle(5), Graph::star(3), gadget] {
            let fp = field_polynomial(&g).unwrap();
            assert_eq!(fp.column_sums(), cut_polynomial(&g).unwrap());
        }
    }

    #[test]
    fn gadget_field_polynomial_has_degree_nine_in_z() {
        let fp = field_polynomial(&crate::gadget::h_gadget_graph()).unwrap();
        assert_eq!(fp.n(), 9);
        assert_eq!(fp.counts()[9][0], BigUint::from(1u32)); // all-plus config
    }

    #[test]
    fn field_matrix_is_negation_symmetric() {
        let g = Graph::petersen();
        let fp = field_polynomial(&g).unwrap();
        let mut total = BigUint::from(0u32);
        for k in 0..=fp.n() {
            assert_eq!(fp.counts()[k], fp.counts()[fp.n() - k]);
            total += fp.counts()[k].iter().sum::<BigUint>();
        }
        assert_eq!(total, BigUint::from(1u32) << fp.n());
    }

    #[test]
    fn line_graph_of_k4_is_real_rooted_at_mu_two() {
        let lk4 = line_graph(&Multigraph::from(&Graph::complete(4)));
        let fp = field_polynomial(&lk4).unwrap();
        let report = univariate_roots_in_z(&fp, &MuSpec::Real(2.0)).unwrap();
        assert_eq!(report.roots.len(), 6);
        assert!(
            report.max_abs_imag < 1e-7,
            "max |Im| = {}",
            report.max_abs_imag
        );
    }
}
