//! Minimal complex linear algebra on the fixed 4-dimensional two-photon
//! polarization space. Everything here is `[Complex64; 4]` /
//! `[[Complex64; 4]; 4]`; no general-purpose matrix library is needed for a
//! single fixed dimension.

use num_complex::Complex64;

pub type C = Complex64;
pub type Vec4 = [C; 4];
pub type Mat4 = [[C; 4]; 4];

pub const ZERO: C = Complex64::new(0.0, 0.0);

pub fn zeros() -> Mat4 {
    [[ZERO; 4]; 4]
}

pub fn identity() -> Mat4 {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

/// Tensor product of two single-photon kets in the (HH, HV, VH, VV) ordering.
pub fn kron2(signal: &[C; 2], idler: &[C; 2]) -> Vec4 {
    [
        signal[0] * idler[0],
        signal[0] * idler[1],
        signal[1] * idler[0],
        signal[1] * idler[1],
    ]
}

/// Hermitian inner product `⟨a|b⟩`.
pub fn inner(a: &Vec4, b: &Vec4) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sq(v: &Vec4) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

/// Rank-one projector `|v⟩⟨v|`.
pub fn outer(v: &Vec4) -> Mat4 {
    let mut m = zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = v[i] * v[j].conj();
        }
    }
    m
}

/// Quadratic form `⟨v|M|v⟩`.
pub fn quad_form(m: &Mat4, v: &Vec4) -> C {
    let mut acc = ZERO;
    for i in 0..4 {
        let mut row = ZERO;
        for j in 0..4 {
            row += m[i][j] * v[j];
        }
        acc += v[i].conj() * row;
    }
    acc
}

pub fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = zeros();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint(m: &Mat4) -> Mat4 {
    let mut out = zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[j][i].conj();
        }
    }
    out
}

pub fn trace(m: &Mat4) -> C {
    (0..4).map(|i| m[i][i]).sum()
}

#[cfg(test)]
pub fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

pub fn hermitian_defect(m: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian 4×4 matrix by cyclic complex Jacobi rotations,
/// in ascending order. The input is assumed Hermitian; the caller checks that
/// separately.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let mut a = *m;
    let scale = 1.0 + (0..4).map(|i| a[i][i].norm()).fold(0.0f64, f64::max);

    for _ in 0..256 {
        // Largest off-diagonal element.
        let (mut p, mut q, mut off) = (0usize, 1usize, 0.0f64);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mag = a[i][j].norm();
                if mag > off {
                    off = mag;
                    p = i;
                    q = j;
                }
            }
        }
        if off <= 1e-15 * scale {
            break;
        }

        // Unitary that diagonalizes the (p, q) Hermitian block: a phase that
        // makes the off-diagonal real, followed by a real Jacobi rotation.
        let app = a[p][p].re;
        let aqq = a[q][q].re;
        let apq = a[p][q];
        let beta = apq.norm();
        let phase = apq / beta;

        let tau = (aqq - app) / (2.0 * beta);
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            -1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        let s = t * c;

        let mut u = identity();
        u[p][p] = C::new(c, 0.0);
        u[p][q] = C::new(s, 0.0);
        u[q][p] = phase.conj() * (-s);
        u[q][q] = phase.conj() * c;

        a = matmul(&adjoint(&u), &matmul(&a, &u));
    }

    let mut eig = [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re];
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}
