use super::{require_rank, GeometryError};
use crate::coords::{from_pauli, pauli_coords};
use crate::linalg::{c64, ComplexMatrix, HermitianMatrix, Projection};

pub type Mat3 = [[f64; 3]; 3];

/// Pauli coordinates `(x₀, x₁, x₂, x₃)` of a rank-one projection in `C²`.
/// They satisfy `x₀ = 1/2` and `x₁² + x₂² + x₃² = 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub coords: [f64; 4],
}

impl SpherePoint {
    pub fn x0(&self) -> f64 {
        self.coords[0]
    }

    /// `(x₁, x₂, x₃)`.
    pub fn vector(&self) -> [f64; 3] {
        [self.coords[1], self.coords[2], self.coords[3]]
    }

    /// `|x₀ − 1/2|` and `|x₁² + x₂² + x₃² − 1/4|`.
    pub fn defects(&self) -> (f64, f64) {
        let r2: f64 = self.vector().iter().map(|x| x * x).sum();
        ((self.x0() - 0.5).abs(), (r2 - 0.25).abs())
    }
}

pub fn sphere_point(p: &Projection) -> Result<SpherePoint, GeometryError> {
    if p.dim() != 2 {
        return Err(GeometryError::WrongDim { found: p.dim() });
    }
    require_rank(p, 1)?;
    Ok(SpherePoint {
        coords: pauli_coords(p.matrix())?,
    })
}

/// Inverse of [`sphere_point`]: the projection `½σ₀ + x₁σ₁ + x₂σ₂ + x₃σ₃`.
/// `x` must lie on the sphere of radius 1/2 within 1e-8.
pub fn projection_from_sphere(x: [f64; 3]) -> Result<Projection, GeometryError> {
    let m = from_pauli([0.5, x[0], x[1], x[2]]);
    Ok(Projection::from_matrix(&m, 1e-8)?)
}

/// Whether the sphere points of `p` and `q` are antipodal (`|a + b|² ≤ tol`),
/// after checking that this agrees with `tr(PQ) ≤ tol`.
pub fn antipodal_iff_orthogonal(
    p: &Projection,
    q: &Projection,
    tol: f64,
) -> Result<bool, GeometryError> {
    let a = sphere_point(p)?.vector();
    let b = sphere_point(q)?.vector();
    let gap: f64 = (0..3).map(|i| (a[i] + b[i]).powi(2)).sum();
    let antipodal = gap <= tol;
    let orthogonal = p.overlap(q) <= tol;
    if antipodal != orthogonal {
        return Err(GeometryError::AntipodalMismatch {
            antipodal,
            orthogonal,
        });
    }
    Ok(antipodal)
}

fn pauli(i: usize) -> ComplexMatrix {
    let (o, l, im) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
    let data = match i {
        1 => vec![o, l, l, o],
        2 => vec![o, -im, im, o],
        3 => vec![l, o, o, -l],
        _ => vec![l, o, o, l],
    };
    ComplexMatrix::new(2, 2, data).expect("2x2")
}

/// The orthogonal matrix `R` with `(x₀, x⃗) ↦ (x₀, R x⃗)` describing
/// `A ↦ U A U*` (or `A ↦ U Aᵀ U*` when `antilinear`) in Pauli coordinates:
/// `R_ij = ½ tr(σᵢ U σⱼ' U*)` with `σⱼ' = σⱼᵀ` in the antilinear case.
pub fn su2_to_o3(u: &ComplexMatrix, antilinear: bool) -> Result<Mat3, GeometryError> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(GeometryError::WrongDim { found: u.rows() });
    }
    u.check_unitary(1e-10)?;
    let ud = u.adjoint();
    let mut r = [[0.0; 3]; 3];
    for j in 0..3 {
        let s = if antilinear {
            pauli(j + 1).transpose()
        } else {
            pauli(j + 1)
        };
        let img = u.matmul(&s).matmul(&ud);
        for (i, row) in r.iter_mut().enumerate() {
            row[j] = 0.5 * pauli(i + 1).matmul(&img).trace().re;
        }
    }
    Ok(r)
}

/// Pauli matrix `σᵢ` (`σ₀ = I`) as a Hermitian matrix.
pub fn pauli_matrix(i: usize) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(&pauli(i)).expect("square")
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat3_transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn mat3_det(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn mat3_distance(a: &Mat3, b: &Mat3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += (a[i][j] - b[i][j]).powi(2);
        }
    }
    s.sqrt()
}

/// `‖RᵀR − I‖_F`.
pub fn mat3_orthogonality_defect(r: &Mat3) -> f64 {
    let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    mat3_distance(&mat3_mul(&mat3_transpose(r), r), &id)
}

pub fn mat3_apply(r: &Mat3, x: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|k| r[i][k] * x[k]).sum())
}
