//! Directed-distance algebra between finite-dimensional subspaces given
//! through coefficient bases and a sparse inner-product operator.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{dense_generalized_eig_max, SparseSym};

/// Which inner product a basis lives in: energy (stiffness K) or L2 (mass M).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Energy,
    L2,
}

/// Linearly independent coefficient columns over the free DOFs, tagged with
/// the inner product they are meant to be measured in.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub columns: DMatrix<f64>,
    pub metric: Metric,
}

impl SubspaceBasis {
    pub fn new(columns: DMatrix<f64>, metric: Metric) -> Self {
        assert!(columns.ncols() >= 1, "a basis needs at least one column");
        SubspaceBasis { columns, metric }
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }
}

/// Cross and self Gram matrices F = (v_i, v'_j), G = (v_i, v_j),
/// H = (v'_i, v'_j) in the chosen inner product.
#[derive(Debug, Clone)]
pub struct GramTriple {
    pub f: DMatrix<f64>,
    pub g: DMatrix<f64>,
    pub h: DMatrix<f64>,
}

/// Exact Gram triple through the sparse operator; G and H are symmetrized by
/// averaging.
pub fn gram_triple(a: &SubspaceBasis, b: &SubspaceBasis, op: &SparseSym) -> Result<GramTriple> {
    if a.metric != b.metric {
        return Err(Error::DimensionMismatch(
            "bases use different inner products".into(),
        ));
    }
    if a.columns.nrows() != op.dim() || b.columns.nrows() != op.dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis rows {} / {} do not match operator dimension {}",
            a.columns.nrows(),
            b.columns.nrows(),
            op.dim()
        )));
    }
    let sb = op.mul_dense(&b.columns);
    let sa = op.mul_dense(&a.columns);
    let f = a.columns.transpose() * &sb;
    let g = a.columns.transpose() * &sa;
    let h = b.columns.transpose() * &sb;
    Ok(GramTriple {
        f,
        g: (&g + g.transpose()) * 0.5,
        h: (&h + h.transpose()) * 0.5,
    })
}

fn spd_cholesky(m: &DMatrix<f64>, what: &str) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    nalgebra::Cholesky::new(m.clone()).ok_or_else(|| {
        Error::IllConditionedBasis(format!("{what} Gram matrix is not positive definite"))
    })
}

/// Squared non-orthogonality measure: the largest generalized eigenvalue
/// lambda_max(F^T G^-1 F, H). The equivalent formulation
/// lambda_max(F H^-1 F^T, G) is computed as well and must agree.
pub fn epsilon_hat_sq(gt: &GramTriple) -> Result<f64> {
    let chol_g = spd_cholesky(&gt.g, "G")?;
    let chol_h = spd_cholesky(&gt.h, "H")?;
    let ginv_f = chol_g.solve(&gt.f);
    let a1 = gt.f.transpose() * &ginv_f;
    let e1 = dense_generalized_eig_max(&((&a1 + a1.transpose()) * 0.5), &gt.h)?;
    let hinv_ft = chol_h.solve(&gt.f.transpose());
    let a2 = &gt.f * &hinv_ft;
    let e2 = dense_generalized_eig_max(&((&a2 + a2.transpose()) * 0.5), &gt.g)?;
    let scale = e1.abs().max(e2.abs());
    if (e1 - e2).abs() > (1e-10 * scale).max(1e-14) {
        return Err(Error::Numerical(format!(
            "the two eigenvalue routes disagree: {e1:.15e} vs {e2:.15e}"
        )));
    }
    Ok(e1.max(e2))
}

/// Guaranteed upper bound eta_F / ((1 - eta_G)(1 - eta_H)); only valid when
/// eta_G and eta_H are below one.
pub fn epsilon_hat_sq_upper(eta_f: f64, eta_g: f64, eta_h: f64) -> Result<f64> {
    if eta_g >= 1.0 || eta_h >= 1.0 {
        return Err(Error::ConditionViolated(format!(
            "eta_G = {eta_g}, eta_H = {eta_h}: both must be below 1 for the bound to hold"
        )));
    }
    Ok(eta_f / ((1.0 - eta_g) * (1.0 - eta_h)))
}

/// Gershgorin row bound on the spectral radius of a symmetric matrix.
fn gershgorin_abs_bound(s: &DMatrix<f64>) -> f64 {
    let mut best = 0.0f64;
    for i in 0..s.nrows() {
        let row_sum: f64 = (0..s.ncols()).map(|j| s[(i, j)].abs()).sum();
        best = best.max(row_sum);
    }
    best
}

/// Guaranteed (eta_F, eta_G, eta_H) with eta_F >= ||F^T F||_2,
/// eta_G >= ||I - G||_2, eta_H >= ||I - H||_2 via Gershgorin discs.
pub fn gershgorin_etas(gt: &GramTriple) -> (f64, f64, f64) {
    let ftf = gt.f.transpose() * &gt.f;
    let eta_f = gershgorin_abs_bound(&ftf);
    let ig = DMatrix::identity(gt.g.nrows(), gt.g.ncols()) - &gt.g;
    let ih = DMatrix::identity(gt.h.nrows(), gt.h.ncols()) - &gt.h;
    (eta_f, gershgorin_abs_bound(&ig), gershgorin_abs_bound(&ih))
}

/// Directed distance computed from a Gram triple: orthonormalize both bases
/// through the Cholesky factors of G and H, take singular values of the
/// whitened cross matrix (principal cosines), and return
/// sqrt(1 - sigma_min^2). If dim(a) > dim(b) some direction of a is
/// orthogonal to b and the distance is 1.
pub fn directed_distance_from_grams(gt: &GramTriple) -> Result<f64> {
    let ma = gt.g.nrows();
    let mb = gt.h.nrows();
    if ma > mb {
        return Ok(1.0);
    }
    let chol_g = spd_cholesky(&gt.g, "G")?;
    let chol_h = spd_cholesky(&gt.h, "H")?;
    // C = L_G^-1 F L_H^-T.
    let mut c = gt.f.clone();
    chol_g.l().solve_lower_triangular_mut(&mut c);
    let mut ct = c.transpose();
    chol_h.l().solve_lower_triangular_mut(&mut ct);
    let c = ct.transpose();
    let svd = c.svd(false, false);
    let sigma_min = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((1.0 - sigma_min * sigma_min).max(0.0).min(1.0).sqrt())
}

/// Directed distance delta(a, b) in the operator-induced norm.
pub fn directed_distance_exact(a: &SubspaceBasis, b: &SubspaceBasis, op: &SparseSym) -> Result<f64> {
    let gt = gram_triple(a, b, op)?;
    directed_distance_from_grams(&gt)
}

/// Distance between two individual vectors recovered from norms and the
/// subspace distance of their spans:
/// sqrt(|u|^2 + |uh|^2 - 2 |u| |uh| sqrt(1 - delta^2)).
pub fn pair_distance_from_delta(norm_u: f64, norm_uhat: f64, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidArgument(format!(
            "delta = {delta} must lie in [0, 1]"
        )));
    }
    let cos = (1.0 - delta * delta).max(0.0).sqrt();
    Ok((norm_u * norm_u + norm_uhat * norm_uhat - 2.0 * norm_u * norm_uhat * cos).max(0.0).sqrt())
}
