//! Unit quaternion arithmetic for SU(2), stored as `[w, x, y, z]`.

pub type Quat = [f64; 4];

pub const ONE: Quat = [1.0, 0.0, 0.0, 0.0];

pub fn mul(a: &Quat, b: &Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn conj(a: &Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

pub fn norm(a: &Quat) -> f64 {
    a.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Rescales onto the unit sphere. Returns `None` for a (near) zero vector.
pub fn normalize(a: &Quat) -> Option<Quat> {
    let n = norm(a);
    if !n.is_finite() || n < 1e-300 {
        return None;
    }
    Some([a[0] / n, a[1] / n, a[2] / n, a[3] / n])
}

pub fn distance(a: &Quat, b: &Quat) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// exp of the pure quaternion `(0, v)`.
pub fn exp_pure(v: &[f64; 3]) -> Quat {
    let theta = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if theta < 1e-300 {
        return ONE;
    }
    let s = theta.sin() / theta;
    [theta.cos(), v[0] * s, v[1] * s, v[2] * s]
}

fn vector(q: &Quat) -> [f64; 3] {
    [q[1], q[2], q[3]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(a: &[f64; 3]) -> Option<[f64; 3]> {
    let n = dot(a, a).sqrt();
    (n > 1e-300).then(|| [a[0] / n, a[1] / n, a[2] / n])
}

/// Unit quaternion of the rotation matrix `r` (acting as `v -> q v q*`).
fn from_rotation(r: &[[f64; 3]; 3]) -> Quat {
    let t = r[0][0] + r[1][1] + r[2][2];
    let q = if t > 0.0 {
        let s = (t + 1.0).sqrt() * 2.0;
        [s / 4.0, (r[2][1] - r[1][2]) / s, (r[0][2] - r[2][0]) / s, (r[1][0] - r[0][1]) / s]
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
        [(r[2][1] - r[1][2]) / s, s / 4.0, (r[0][1] + r[1][0]) / s, (r[0][2] + r[2][0]) / s]
    } else if r[1][1] > r[2][2] {
        let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
        [(r[0][2] - r[2][0]) / s, (r[0][1] + r[1][0]) / s, s / 4.0, (r[1][2] + r[2][1]) / s]
    } else {
        let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
        [(r[1][0] - r[0][1]) / s, (r[0][2] + r[2][0]) / s, (r[1][2] + r[2][1]) / s, s / 4.0]
    };
    normalize(&q).unwrap_or(ONE)
}

/// A unit quaternion `s` with `s a s* = b` for every pair, if one exists
/// within `tol`.
pub fn conjugator(pairs: &[(Quat, Quat)], tol: f64) -> Option<Quat> {
    if pairs.iter().any(|(a, b)| (a[0] - b[0]).abs() > tol) {
        return None;
    }
    let dirs: Vec<([f64; 3], [f64; 3])> = pairs
        .iter()
        .filter_map(|(a, b)| {
            let (va, vb) = (vector(a), vector(b));
            if dot(&va, &va).sqrt() <= tol {
                return None;
            }
            Some((unit(&va)?, unit(&vb)?))
        })
        .collect();
    let s = match dirs.first() {
        None => ONE,
        Some(&(u1, v1)) => match dirs.iter().find(|(u, _)| dot(&cross(u, &u1), &cross(u, &u1)).sqrt() > 1e-6) {
            Some(&(u2, v2)) => {
                let frame = |e1: [f64; 3], x: [f64; 3]| {
                    let d = dot(&x, &e1);
                    let e2 = unit(&[x[0] - d * e1[0], x[1] - d * e1[1], x[2] - d * e1[2]])?;
                    Some([e1, e2, cross(&e1, &e2)])
                };
                let (e, f) = (frame(u1, u2)?, frame(v1, v2)?);
                let mut r = [[0.0; 3]; 3];
                for (i, row) in r.iter_mut().enumerate() {
                    for (j, c) in row.iter_mut().enumerate() {
                        *c = (0..3).map(|k| f[k][i] * e[k][j]).sum();
                    }
                }
                from_rotation(&r)
            }
            None => {
                let d = dot(&u1, &v1);
                if d < -1.0 + 1e-12 {
                    // half turn about any axis orthogonal to u1
                    let trial = if u1[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
                    let p = unit(&cross(&u1, &trial))?;
                    [0.0, p[0], p[1], p[2]]
                } else {
                    let c = cross(&u1, &v1);
                    normalize(&[1.0 + d, c[0], c[1], c[2]])?
                }
            }
        },
    };
    pairs.iter().all(|(a, b)| distance(&mul(&mul(&s, a), &conj(&s)), b) <= tol).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_products() {
        let i = [0.0, 1.0, 0.0, 0.0];
        let j = [0.0, 0.0, 1.0, 0.0];
        let k = [0.0, 0.0, 0.0, 1.0];
        assert_eq!(mul(&i, &j), k);
        assert_eq!(mul(&j, &i), [0.0, 0.0, 0.0, -1.0]);
        assert_eq!(mul(&i, &i), [-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn exp_of_quarter_turn() {
        let q = exp_pure(&[std::f64::consts::FRAC_PI_2, 0.0, 0.0]);
        assert!(distance(&q, &[0.0, 1.0, 0.0, 0.0]) < 1e-15);
    }

    #[test]
    fn conjugator_recovers_a_rotation() {
        let s = normalize(&[0.3, -0.5, 0.7, 0.2]).unwrap();
        let a = [exp_pure(&[0.4, 0.1, -0.3]), exp_pure(&[-0.2, 0.9, 0.5]), exp_pure(&[0.0, 0.0, 1.1])];
        let pairs: Vec<_> = a.iter().map(|x| (*x, mul(&mul(&s, x), &conj(&s)))).collect();
        let t = conjugator(&pairs, 1e-9).unwrap();
        for (x, y) in &pairs {
            assert!(distance(&mul(&mul(&t, x), &conj(&t)), y) < 1e-12);
        }
        // a single axis, including the antipodal case
        let one = [(exp_pure(&[0.5, 0.0, 0.0]), exp_pure(&[-0.5, 0.0, 0.0]))];
        assert!(conjugator(&one, 1e-9).is_some());
        // different traces are never conjugate
        assert!(conjugator(&[(exp_pure(&[0.5, 0.0, 0.0]), exp_pure(&[0.6, 0.0, 0.0]))], 1e-9).is_none());
    }
}
