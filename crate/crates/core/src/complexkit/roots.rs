//! Polynomial roots by Aberth–Ehrlich simultaneous iteration, with multiple
//! roots recovered by clustering and confirmed through derivative orders.

use num_complex::Complex;
use num_traits::Zero;

use super::poly::CPoly;
use crate::scalar::Real;

const MAX_ITERATIONS: usize = 500;
/// Roots closer than this (relative to `max(1, |z|)`) always share a cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Candidate radius for multiple-root groups, confirmed by derivatives.
const LOOSE_CLUSTER_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root<T> {
    pub value: Complex<T>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, thiserror::Error)]
pub enum RootError<T: Real> {
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("Aberth iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize, partial: Vec<Root<T>> },
}

/// Roots of `p` with multiplicities, sorted by `(re, im)`.
///
/// Constant polynomials yield an empty list.
pub fn poly_roots<T: Real>(p: &CPoly<T>) -> Result<Vec<Root<T>>, RootError<T>> {
    let Some(low) = p.low_order() else {
        return Err(RootError::ZeroPolynomial);
    };
    let mut out = Vec::new();
    if low > 0 {
        out.push(Root { value: Complex::zero(), multiplicity: low });
    }
    let q = p.shift_down(low);
    match q.degree().unwrap_or(0) {
        0 => {}
        1 => {
            let c = q.coeffs();
            out.push(Root { value: -c[0] / c[1], multiplicity: 1 });
        }
        _ => {
            let (approx, converged) = aberth(&q);
            let roots = cluster(&q, &approx);
            if !converged && roots.iter().any(|r| !crate::scalar::is_finite(r.value)) {
                return Err(RootError::NoConvergence { iterations: MAX_ITERATIONS, partial: roots });
            }
            out.extend(roots);
        }
    }
    out.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.value.im.partial_cmp(&b.value.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(out)
}

/// All roots listed with repetition.
pub fn poly_roots_flat<T: Real>(p: &CPoly<T>) -> Result<Vec<Complex<T>>, RootError<T>> {
    Ok(poly_roots(p)?.into_iter().flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity)).collect())
}

fn initial_guesses<T: Real>(q: &CPoly<T>) -> Vec<Complex<T>> {
    let c = q.coeffs();
    let n = c.len() - 1;
    let lead = c[n].norm();
    // Fujiwara-type radius, averaged with the geometric mean of root moduli.
    let mut bound = T::zero();
    for (k, ck) in c.iter().enumerate().take(n) {
        let e = T::one() / T::from_usize_lossy(n - k);
        bound = bound.max((ck.norm() / lead).powf(e));
    }
    let geo = (c[0].norm() / lead).powf(T::one() / T::from_usize_lossy(n));
    let radius = if geo > T::zero() { (bound * geo).sqrt() } else { bound.max(T::one()) };
    let offset = T::lit(0.4);
    (0..n)
        .map(|k| {
            let theta = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(n) + offset;
            Complex::from_polar(radius, theta)
        })
        .collect()
}

fn aberth<T: Real>(q: &CPoly<T>) -> (Vec<Complex<T>>, bool) {
    let dq = q.derivative();
    let mut z = initial_guesses(q);
    let n = z.len();
    let eps = T::epsilon() * T::lit(4.0);
    for _ in 0..MAX_ITERATIONS {
        let mut max_rel = T::zero();
        for i in 0..n {
            let pv = q.eval(z[i]);
            if pv.is_zero() {
                continue;
            }
            let ratio = pv / dq.eval(z[i]);
            let mut s = Complex::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if !d.is_zero() {
                        s += d.inv();
                    }
                }
            }
            let denom = Complex::new(T::one(), T::zero()) - ratio * s;
            let w = if denom.is_zero() || !crate::scalar::is_finite(ratio) { ratio } else { ratio / denom };
            if crate::scalar::is_finite(w) {
                z[i] -= w;
                max_rel = max_rel.max(w.norm() / z[i].norm().max(T::one()));
            }
        }
        if max_rel <= eps {
            return (z, true);
        }
    }
    (z, false)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut k = i;
    while parent[k] != r {
        let next = parent[k];
        parent[k] = r;
        k = next;
    }
    r
}

fn cluster<T: Real>(q: &CPoly<T>, z: &[Complex<T>]) -> Vec<Root<T>> {
    let n = z.len();
    let lead = q.leading();
    let nn = T::from_usize_lossy(n);
    // Weierstrass inclusion radii: every disk holds at least one root.
    let radii: Vec<T> = (0..n)
        .map(|i| {
            let mut prod = lead;
            for j in 0..n {
                if j != i {
                    prod *= z[i] - z[j];
                }
            }
            let r = nn * q.eval(z[i]).norm() / prod.norm();
            if r.is_finite() {
                r
            } else {
                T::infinity()
            }
        })
        .collect();
    let strict = |i: usize, j: usize| {
        let d = (z[i] - z[j]).norm();
        let scale = z[i].norm().max(z[j].norm()).max(T::one());
        d <= radii[i] + radii[j] || d <= T::tol(CLUSTER_TOL) * scale
    };
    // Multiple roots are only resolved to about eps^(1/k); candidate groups are
    // formed loosely and kept only when the derivative test confirms them.
    let loose = |i: usize, j: usize| {
        let d = (z[i] - z[j]).norm();
        let scale = z[i].norm().max(z[j].norm()).max(T::one());
        strict(i, j) || d <= T::tol(LOOSE_CLUSTER_TOL) * scale
    };
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for g in groups(&all, loose) {
        if let Some(root) = confirmed(q, z, &g) {
            out.push(root);
            continue;
        }
        for h in groups(&g, strict) {
            match confirmed(q, z, &h) {
                Some(root) => out.push(root),
                None => out.extend(h.iter().map(|&i| Root { value: z[i], multiplicity: 1 })),
            }
        }
    }
    out
}

fn confirmed<T: Real>(q: &CPoly<T>, z: &[Complex<T>], g: &[usize]) -> Option<Root<T>> {
    let k = g.len();
    if k == 1 {
        return Some(Root { value: z[g[0]], multiplicity: 1 });
    }
    let centroid = g.iter().fold(Complex::zero(), |acc, &i| acc + z[i]) / T::from_usize_lossy(k);
    confirm_multiplicity(q, centroid, k).map(|value| Root { value, multiplicity: k })
}

/// Connected components of `idx` under the symmetric relation `near`.
fn groups(idx: &[usize], near: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let n = idx.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for a in 0..n {
        for b in a + 1..n {
            if near(idx[a], idx[b]) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[rb] = ra;
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for (a, &i) in idx.iter().enumerate().take(n) {
        let r = find(&mut parent, a);
        if label[r] == usize::MAX {
            label[r] = out.len();
            out.push(Vec::new());
        }
        out[label[r]].push(i);
    }
    out
}

/// Checks `q^(j)(c) ~ 0` for `j < k` and polishes `c` as a simple root of `q^(k-1)`.
fn confirm_multiplicity<T: Real>(q: &CPoly<T>, centroid: Complex<T>, k: usize) -> Option<Complex<T>> {
    let mut derivs = vec![q.clone()];
    for j in 1..=k {
        let d = derivs[j - 1].derivative();
        derivs.push(d);
    }
    let target = &derivs[k - 1];
    let slope = &derivs[k];
    let mut c = centroid;
    for _ in 0..8 {
        let s = slope.eval(c);
        if s.is_zero() {
            break;
        }
        let step = target.eval(c) / s;
        c -= step;
        if step.norm() <= T::epsilon() * c.norm().max(T::one()) {
            break;
        }
    }
    let tol = T::tol(1e-6);
    for d in derivs.iter().take(k) {
        let scale = d.eval_scale(c);
        if d.eval(c).norm() > tol * scale.max(T::min_positive_value()) {
            return None;
        }
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cz(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn reconstruct(lead: Complex<f64>, roots: &[Root<f64>]) -> CPoly<f64> {
        let flat: Vec<_> = roots.iter().flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity)).collect();
        CPoly::from_roots(lead, &flat)
    }

    #[test]
    fn conjugate_imaginary_pair() {
        let p = CPoly::<f64>::from_real(&[1.0, 0.0, 1.0]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].value - cz(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1].value - cz(0.0, 1.0)).norm() < 1e-14);
        assert!(r.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn triple_root_at_origin() {
        let p = CPoly::<f64>::from_real(&[0.0, 0.0, 0.0, 1.0]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r, vec![Root { value: cz(0.0, 0.0), multiplicity: 3 }]);
    }

    #[test]
    fn double_root_from_expanded_product() {
        // z^2 - (a+b) z + ab with a = b = -0.5; substitution confirms the double root.
        let (a, b) = (cz(-0.5, 0.0), cz(-0.5, 0.0));
        let p = CPoly::new(vec![a * b, -(a + b), cz(1.0, 0.0)]);
        assert!(p.eval(a).norm() < 1e-15 && p.derivative().eval(a).norm() < 1e-15);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        assert!((r[0].value - a).norm() < 1e-10);
    }

    #[test]
    fn constant_has_no_roots_and_zero_is_rejected() {
        assert!(poly_roots(&CPoly::<f64>::from_real(&[3.0])).unwrap().is_empty());
        assert!(matches!(poly_roots(&CPoly::<f64>::zero()), Err(RootError::ZeroPolynomial)));
    }

    #[test]
    fn mixed_multiplicities_reconstruct() {
        let lead = cz(2.0, -1.0);
        let p = CPoly::from_roots(
            lead,
            &[cz(1.0, 1.0), cz(1.0, 1.0), cz(1.0, 1.0), cz(-2.0, 0.5), cz(0.0, -3.0), cz(0.0, -3.0)],
        );
        let r = poly_roots(&p).unwrap();
        let mult: Vec<usize> = r.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mult.iter().sum::<usize>(), 6);
        assert_eq!(r.len(), 3);
        let back = reconstruct(lead, &r);
        let resid = (&back - &p).norm() / p.norm();
        assert!(resid <= 1e-10, "residual {resid}");
    }

    #[test]
    fn quartic_with_imaginary_pair() {
        // z^2 (z^2 + 2): zeros 0 (double), +-i sqrt 2
        let p = CPoly::<f64>::from_real(&[0.0, 0.0, 2.0, 0.0, 1.0]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 3);
        let s = 2f64.sqrt();
        assert!(r.iter().any(|r| (r.value - cz(0.0, s)).norm() < 1e-12 && r.multiplicity == 1));
        assert!(r.iter().any(|r| (r.value - cz(0.0, -s)).norm() < 1e-12 && r.multiplicity == 1));
        assert!(r.iter().any(|r| r.value.norm() < 1e-14 && r.multiplicity == 2));
    }

    #[test]
    fn works_in_single_precision() {
        let p = CPoly::<f32>::from_real(&[-2.0, 0.0, 1.0]);
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[1].value.re - 2f32.sqrt()).abs() < 1e-5);
    }
}
