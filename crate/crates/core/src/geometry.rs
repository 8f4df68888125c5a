//! Hyperbolic geometry on the hyperboloid and Poincaré models.
//!
//! Points of the hyperboloid model live in `R^{d+1}` with the time-like
//! coordinate stored **last**, so the Minkowski form is
//! `Λ = diag(1, …, 1, −1)` and the upper sheet is
//! `{x : xᵀΛx = −1, x_{d+1} > 0}`. The latent space of curvature `−k` is the
//! unit hyperboloid with every distance scaled by `1/√k`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Absolute tolerance on `−⟨x, y⟩_L ≥ 1`; scaled by the magnitude of the
/// time-like coordinates for far-out points.
pub const MANIFOLD_TOL: f64 = 1e-9;

/// Below this Lorentzian norm the exponential map uses its first-order series.
const EXP_SERIES_CUTOFF: f64 = 1e-12;

/// Magnitude `k > 0` of the sectional curvature `−k`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Curvature(f64);

impl Curvature {
    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() && k > 0.0 {
            Ok(Self(k))
        } else {
            Err(Error::Domain(format!("curvature must be positive and finite, got {k}")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn sqrt(self) -> f64 {
        self.0.sqrt()
    }
}

impl TryFrom<f64> for Curvature {
    type Error = Error;
    fn try_from(k: f64) -> Result<Self> {
        Self::new(k)
    }
}

impl From<Curvature> for f64 {
    fn from(k: Curvature) -> f64 {
        k.0
    }
}

impl std::fmt::Display for Curvature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A point on the upper sheet of the unit hyperboloid.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperboloidPoint(Vec<f64>);

impl HyperboloidPoint {
    /// Validates the hyperboloid constraint and the upper-sheet condition.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::Dimension { expected: 3, got: coords.len() });
        }
        let residual = constraint_residual(&coords);
        let last = coords[coords.len() - 1];
        if !(last > 0.0) || residual > MANIFOLD_TOL * last.max(1.0).powi(2) {
            return Err(Error::ManifoldViolation(format!(
                "constraint residual {residual:e}, time coordinate {last}"
            )));
        }
        Ok(Self(coords))
    }

    /// The apex `(0, …, 0, 1)` of the `d`-dimensional hyperboloid.
    pub fn apex(d: usize) -> Self {
        let mut coords = vec![0.0; d + 1];
        coords[d] = 1.0;
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// Latent dimension `d` (one less than the ambient length).
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

/// A point strictly inside the open unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincarePoint(Vec<f64>);

impl PoincarePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let sq: f64 = coords.iter().map(|c| c * c).sum();
        if !(sq < 1.0) {
            return Err(Error::Domain(format!("Poincaré point has norm² {sq} ≥ 1")));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// The diagonal Minkowski form `Λ = diag(1, …, 1, −1)` of size `d + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinkowskiForm {
    pub d: usize,
}

impl MinkowskiForm {
    pub fn new(d: usize) -> Self {
        Self { d }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::identity(self.d + 1, self.d + 1);
        m[(self.d, self.d)] = -1.0;
        m
    }
}

/// `Σ_{i≤d} x_i y_i − x_{d+1} y_{d+1}` without length checks.
#[inline]
pub(crate) fn minkowski_dot(x: &[f64], y: &[f64]) -> f64 {
    let last = x.len() - 1;
    let mut s = 0.0;
    for i in 0..last {
        s += x[i] * y[i];
    }
    s - x[last] * y[last]
}

#[inline]
pub(crate) fn constraint_residual(x: &[f64]) -> f64 {
    (minkowski_dot(x, x) + 1.0).abs()
}

/// `acosh(1 + t)` evaluated without cancellation for small `t ≥ 0`.
#[inline]
pub(crate) fn acosh1p(t: f64) -> f64 {
    (t + (t * (t + 2.0)).sqrt()).ln_1p()
}

pub fn lorentz_inner(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), got: y.len() });
    }
    if x.len() < 3 {
        return Err(Error::Dimension { expected: 3, got: x.len() });
    }
    Ok(minkowski_dot(x, y))
}

/// Unit-curvature geodesic distance `acosh(−⟨x, y⟩_L)` with the argument
/// clamped at 1. Fails when the argument falls clearly below 1.
#[inline]
pub(crate) fn unit_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    let t = -minkowski_dot(x, y) - 1.0;
    if t < 0.0 {
        let tol = MANIFOLD_TOL * (x[x.len() - 1] * y[y.len() - 1]).abs().max(1.0);
        if t < -tol {
            return Err(Error::ManifoldViolation(format!("−⟨x, y⟩_L = {} < 1", t + 1.0)));
        }
        return Ok(0.0);
    }
    Ok(acosh1p(t))
}

pub fn hyperboloid_distance(x: &HyperboloidPoint, y: &HyperboloidPoint, k: Curvature) -> Result<f64> {
    if x.0.len() != y.0.len() {
        return Err(Error::Dimension { expected: x.0.len(), got: y.0.len() });
    }
    Ok(unit_distance(&x.0, &y.0)? / k.sqrt())
}

pub fn poincare_distance(x: &PoincarePoint, y: &PoincarePoint, k: Curvature) -> Result<f64> {
    if x.0.len() != y.0.len() {
        return Err(Error::Dimension { expected: x.0.len(), got: y.0.len() });
    }
    let nx: f64 = x.0.iter().map(|c| c * c).sum();
    let ny: f64 = y.0.iter().map(|c| c * c).sum();
    if nx >= 1.0 || ny >= 1.0 {
        return Err(Error::Domain("Poincaré point outside the unit ball".into()));
    }
    let diff: f64 = x.0.iter().zip(&y.0).map(|(a, b)| (a - b) * (a - b)).sum();
    let t = 2.0 * diff / ((1.0 - nx) * (1.0 - ny));
    Ok(acosh1p(t) / k.sqrt())
}

pub fn to_poincare(x: &HyperboloidPoint) -> PoincarePoint {
    let d = x.dim();
    let denom = 1.0 + x.0[d];
    PoincarePoint(x.0[..d].iter().map(|c| c / denom).collect())
}

pub fn to_hyperboloid(p: &PoincarePoint) -> Result<HyperboloidPoint> {
    let s: f64 = p.0.iter().map(|c| c * c).sum();
    if s >= 1.0 {
        return Err(Error::Domain(format!("Poincaré point has norm² {s} ≥ 1")));
    }
    let denom = 1.0 - s;
    let mut coords: Vec<f64> = p.0.iter().map(|c| 2.0 * c / denom).collect();
    coords.push((1.0 + s) / denom);
    Ok(HyperboloidPoint(coords))
}

/// Projects an ambient vector onto the tangent space at `z`:
/// `g + ⟨g, z⟩_L · z`.
pub fn tangent_project(z: &HyperboloidPoint, g: &[f64]) -> Result<Vec<f64>> {
    if g.len() != z.0.len() {
        return Err(Error::Dimension { expected: z.0.len(), got: g.len() });
    }
    let mut out = g.to_vec();
    project_in_place(&z.0, &mut out);
    Ok(out)
}

#[inline]
pub(crate) fn project_in_place(z: &[f64], g: &mut [f64]) {
    let c = minkowski_dot(g, z);
    for (gi, zi) in g.iter_mut().zip(z) {
        *gi += c * zi;
    }
}

/// Exponential map at `z` applied to the tangent vector `v`.
///
/// The result is re-lifted onto the sheet so the constraint holds to
/// rounding regardless of how far `z` sits from the apex.
pub fn exp_map(z: &HyperboloidPoint, v: &[f64]) -> Result<HyperboloidPoint> {
    if v.len() != z.0.len() {
        return Err(Error::Dimension { expected: z.0.len(), got: v.len() });
    }
    let vz = minkowski_dot(v, &z.0);
    let vn = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    let zn = z.0.iter().map(|c| c * c).sum::<f64>().sqrt();
    if vz.abs() > 1e-8 * (vn * zn).max(1.0) {
        return Err(Error::ContractViolation(format!("vector is not tangent: ⟨v, z⟩_L = {vz:e}")));
    }
    let vv = minkowski_dot(v, v);
    if vv < -1e-8 * (vn * vn).max(1.0) {
        return Err(Error::ContractViolation(format!("tangent vector is time-like: ⟨v, v⟩_L = {vv:e}")));
    }
    let mut out = vec![0.0; v.len()];
    exp_map_into(&z.0, v, &mut out);
    Ok(HyperboloidPoint(out))
}

/// Exponential map without contract checks; writes into `out`.
#[inline]
pub(crate) fn exp_map_into(z: &[f64], v: &[f64], out: &mut [f64]) {
    let m = minkowski_dot(v, v).max(0.0).sqrt();
    if m < EXP_SERIES_CUTOFF {
        for i in 0..z.len() {
            out[i] = z[i] + v[i];
        }
    } else {
        let (c, s) = (m.cosh(), m.sinh() / m);
        for i in 0..z.len() {
            out[i] = c * z[i] + s * v[i];
        }
    }
    lift_in_place(out);
}

/// Keeps the spatial coordinates and recomputes the time-like one as
/// `√(1 + Σ w_i²)`.
pub fn lift_to_hyperboloid(w: &[f64]) -> Result<HyperboloidPoint> {
    if w.len() < 3 {
        return Err(Error::Dimension { expected: 3, got: w.len() });
    }
    let mut out = w.to_vec();
    lift_in_place(&mut out);
    Ok(HyperboloidPoint(out))
}

#[inline]
pub(crate) fn lift_in_place(w: &mut [f64]) {
    let last = w.len() - 1;
    let sq: f64 = w[..last].iter().map(|c| c * c).sum();
    w[last] = (1.0 + sq).sqrt();
}

/// Which of the three basic isometry generators of the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationKind {
    /// Boost mixing the second spatial axis with time.
    Boost2 = 1,
    /// Boost mixing the first spatial axis with time.
    Boost1 = 2,
    /// Circular rotation of the first two spatial axes.
    Circular = 3,
}

impl TryFrom<u8> for RotationKind {
    type Error = Error;
    fn try_from(kind: u8) -> Result<Self> {
        match kind {
            1 => Ok(Self::Boost2),
            2 => Ok(Self::Boost1),
            3 => Ok(Self::Circular),
            other => Err(Error::InvalidArgument(format!("rotation kind must be 1, 2 or 3, got {other}"))),
        }
    }
}

/// One of the three basic hyperbolic rotations, acting on column vectors
/// (`x ↦ Qx`). For `d > 2` the generators act on the same coordinate pairs,
/// with the identity on the remaining axes.
pub fn hyperbolic_rotation(kind: u8, theta: f64, d: usize) -> Result<DMatrix<f64>> {
    let kind = RotationKind::try_from(kind)?;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("rotations need d ≥ 2, got {d}")));
    }
    let (i, j) = match kind {
        RotationKind::Boost2 => (1, d),
        RotationKind::Boost1 => (0, d),
        RotationKind::Circular => (0, 1),
    };
    plane_rotation(i, j, theta, d)
}

/// Isometry acting on the coordinate pair `(i, j)`, `i < j ≤ d` (0-based):
/// circular when both are spatial, a boost when `j` is the time axis.
pub fn plane_rotation(i: usize, j: usize, theta: f64, d: usize) -> Result<DMatrix<f64>> {
    if !(i < j && j <= d) {
        return Err(Error::InvalidArgument(format!("invalid coordinate pair ({i}, {j}) for d = {d}")));
    }
    let mut q = DMatrix::identity(d + 1, d + 1);
    if j == d {
        let (c, s) = (theta.cosh(), theta.sinh());
        q[(i, i)] = c;
        q[(i, j)] = s;
        q[(j, i)] = s;
        q[(j, j)] = c;
    } else {
        let (c, s) = (theta.cos(), theta.sin());
        q[(i, i)] = c;
        q[(i, j)] = -s;
        q[(j, i)] = s;
        q[(j, j)] = c;
    }
    Ok(q)
}

/// Distance from a vertex to the midpoint of the opposite side of an
/// equilateral triangle with side `side` in the plane of curvature `−k`.
///
/// Strictly decreasing in `k`, from the flat median `√3/2 · side` as
/// `k → 0`.
pub fn equilateral_midpoint_distance(k: Curvature, side: f64) -> Result<f64> {
    if !(side > 0.0) {
        return Err(Error::Domain(format!("side length must be positive, got {side}")));
    }
    let sk = k.sqrt();
    let a = sk * side;
    let b = 0.5 * a;
    // cosh(a)/cosh(b) − 1 written as a product to avoid cancellation near k = 0
    let t = 2.0 * (0.5 * (a + b)).sinh() * (0.5 * (a - b)).sinh() / b.cosh();
    Ok(acosh1p(t) / sk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn k(v: f64) -> Curvature {
        Curvature::new(v).unwrap()
    }

    fn pt(c: &[f64]) -> HyperboloidPoint {
        HyperboloidPoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn lorentz_inner_examples() {
        assert_eq!(lorentz_inner(&[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]).unwrap(), -1.0);
        let s2 = 2f64.sqrt();
        assert_abs_diff_eq!(lorentz_inner(&[0.0, 0.0, 1.0], &[1.0, 0.0, s2]).unwrap(), -s2, epsilon = 1e-15);
        let x = [1f64.sinh(), 0.0, 1f64.cosh()];
        assert_abs_diff_eq!(lorentz_inner(&x, &[0.0, 0.0, 1.0]).unwrap(), -1.5430806348152437, epsilon = 1e-15);
        assert!(matches!(lorentz_inner(&[0.0, 1.0, 0.0], &[0.0, 1.0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn hyperboloid_distance_examples() {
        let apex = HyperboloidPoint::apex(2);
        assert_eq!(hyperboloid_distance(&apex, &apex, k(1.0)).unwrap(), 0.0);
        let y = pt(&[2f64.sinh(), 0.0, 2f64.cosh()]);
        assert_abs_diff_eq!(hyperboloid_distance(&apex, &y, k(4.0)).unwrap(), 1.0, epsilon = 1e-14);
        let y = pt(&[1.0, 0.0, 2f64.sqrt()]);
        assert_abs_diff_eq!(hyperboloid_distance(&apex, &y, k(1.0)).unwrap(), 0.881373587019543, epsilon = 1e-14);
    }

    #[test]
    fn distance_rejects_points_off_the_sheet() {
        let apex = [0.0, 0.0, 1.0];
        // −⟨x, y⟩ = 0.5: clearly off-manifold
        assert!(matches!(unit_distance(&apex, &[0.0, 0.0, 0.5]), Err(Error::ManifoldViolation(_))));
        // within tolerance of 1: clamped to zero
        assert_eq!(unit_distance(&apex, &[0.0, 0.0, 1.0 - 1e-12]).unwrap(), 0.0);
        assert!(HyperboloidPoint::new(vec![0.0, 0.0, -1.0]).is_err());
        assert!(HyperboloidPoint::new(vec![1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn poincare_examples() {
        let o = PoincarePoint::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(poincare_distance(&o, &o, k(1.0)).unwrap(), 0.0);
        let y = PoincarePoint::new(vec![0.5f64.tanh(), 0.0]).unwrap();
        assert_abs_diff_eq!(poincare_distance(&o, &y, k(1.0)).unwrap(), 1.0, epsilon = 1e-14);
        assert!(PoincarePoint::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn model_conversions() {
        assert_eq!(to_poincare(&HyperboloidPoint::apex(2)).coords(), &[0.0, 0.0]);
        let x = pt(&[1f64.sinh(), 0.0, 1f64.cosh()]);
        assert_abs_diff_eq!(to_poincare(&x).coords()[0], 0.46211715726000974, epsilon = 1e-15);
        let h = to_hyperboloid(&PoincarePoint::new(vec![0.5, 0.0]).unwrap()).unwrap();
        assert_abs_diff_eq!(h.coords()[0], 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.coords()[2], 5.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(minkowski_dot(h.coords(), h.coords()), -1.0, epsilon = 1e-14);
        let back = to_hyperboloid(&to_poincare(&x)).unwrap();
        for (a, b) in back.coords().iter().zip(x.coords()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn projection_examples() {
        let z = pt(&[1.0, 0.0, 2f64.sqrt()]);
        let tangent = [0.0, 3.0, 0.0];
        assert_eq!(tangent_project(&z, &tangent).unwrap(), tangent.to_vec());
        let zero = tangent_project(&z, z.coords()).unwrap();
        assert!(zero.iter().all(|c| c.abs() < 1e-15));
        let r = tangent_project(&z, &[0.3, -1.2, 0.7]).unwrap();
        assert!(minkowski_dot(&r, z.coords()).abs() < 1e-10);
    }

    #[test]
    fn exp_map_examples() {
        let apex = HyperboloidPoint::apex(2);
        assert_eq!(exp_map(&apex, &[0.0, 0.0, 0.0]).unwrap(), apex);
        let out = exp_map(&apex, &[1.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(out.coords()[0], 1f64.sinh(), epsilon = 1e-14);
        assert_abs_diff_eq!(out.coords()[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(out.coords()[2], 1f64.cosh(), epsilon = 1e-14);
        assert!(matches!(exp_map(&apex, &[0.0, 0.0, 1.0]), Err(Error::ContractViolation(_))));
        // tiny vectors take the series branch
        let tiny = exp_map(&apex, &[1e-14, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(tiny.coords()[0], 1e-14, epsilon = 1e-28);
    }

    #[test]
    fn rotation_examples() {
        for kind in 1..=3 {
            let q = hyperbolic_rotation(kind, 0.0, 2).unwrap();
            assert_eq!(q, DMatrix::identity(3, 3));
        }
        let q = hyperbolic_rotation(3, std::f64::consts::FRAC_PI_2, 2).unwrap();
        let x = nalgebra::DVector::from_vec(vec![1.0, 0.0, 2f64.sqrt()]);
        let y = q * x;
        assert_abs_diff_eq!(y[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[2], 2f64.sqrt(), epsilon = 1e-15);
        assert!(hyperbolic_rotation(4, 0.1, 2).is_err());
        assert!(hyperbolic_rotation(0, 0.1, 2).is_err());
    }

    #[test]
    fn lift_examples() {
        let p = lift_to_hyperboloid(&[0.0, 0.0, -7.0]).unwrap();
        assert_eq!(p.coords(), &[0.0, 0.0, 1.0]);
        let p = lift_to_hyperboloid(&[3.0, 4.0, 0.0]).unwrap();
        assert_eq!(p.coords(), &[3.0, 4.0, 26f64.sqrt()]);
        let x = [0.7f64.sinh(), 0.0, 0.7f64.cosh()];
        let p = lift_to_hyperboloid(&x).unwrap();
        assert_abs_diff_eq!(p.coords()[2], x[2], epsilon = 1e-12);
    }

    #[test]
    fn equilateral_midpoint_examples() {
        let flat = equilateral_midpoint_distance(k(1e-8), 1.0).unwrap();
        assert_abs_diff_eq!(flat, 3f64.sqrt() / 2.0, epsilon = 1e-8);
        // closed form evaluated in extended precision: acosh(cosh 1 / cosh 0.5)
        let unit = equilateral_midpoint_distance(k(1.0), 1.0).unwrap();
        assert_abs_diff_eq!(unit, 0.8340252289813307, epsilon = 1e-12);
        assert!(equilateral_midpoint_distance(k(1.0), 0.0).is_err());
    }
}
