use serde::Serialize;

use super::expr::{ExprError, MeroExpr};
use super::ext::ExtComplex;
use super::roots::poly_roots;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorKind {
    Zero,
    Pole,
    Essential,
}

/// One point of a divisor. Zeros carry positive orders, poles negative ones;
/// essential points carry order 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DivisorEntry<T: Real> {
    pub point: ExtComplex<T>,
    pub order: i32,
    pub kind: DivisorKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Divisor<T: Real> {
    pub entries: Vec<DivisorEntry<T>>,
}

impl<T: Real> Divisor<T> {
    /// Signed order at `p`, 0 if `p` is not listed.
    pub fn order_at(&self, p: &ExtComplex<T>, tol: T) -> i32 {
        self.entries.iter().find(|e| e.point.approx_eq(p, tol)).map_or(0, |e| e.order)
    }

    pub fn degree(&self) -> i32 {
        self.entries.iter().map(|e| e.order).sum()
    }

    pub fn zeros(&self) -> impl Iterator<Item = &DivisorEntry<T>> {
        self.entries.iter().filter(|e| e.kind == DivisorKind::Zero)
    }

    pub fn poles(&self) -> impl Iterator<Item = &DivisorEntry<T>> {
        self.entries.iter().filter(|e| e.kind == DivisorKind::Pole)
    }

    pub fn essentials(&self) -> impl Iterator<Item = &DivisorEntry<T>> {
        self.entries.iter().filter(|e| e.kind == DivisorKind::Essential)
    }
}

/// Zeros, poles and essential singularities of `f` on the plane, and at
/// infinity when `include_infinity` is set.
pub fn divisor_of<T: Real>(f: &MeroExpr<T>, include_infinity: bool) -> Result<Divisor<T>, ExprError> {
    if f.is_zero() {
        return Err(ExprError::IdenticallyZero);
    }
    let tol = T::tol(1e-8);
    let essentials = f.essential_points();
    let is_essential = |p: &ExtComplex<T>| essentials.iter().any(|e| e.approx_eq(p, tol));
    let mut entries = Vec::new();
    for (poly, sign, kind) in [(f.rat().num(), 1, DivisorKind::Zero), (f.rat().den(), -1, DivisorKind::Pole)] {
        if poly.degree().unwrap_or(0) == 0 {
            continue;
        }
        let roots = poly_roots(poly).map_err(|_| ExprError::RootFailure)?;
        for r in roots {
            let point = ExtComplex::Finite(r.value);
            if !is_essential(&point) {
                entries.push(DivisorEntry { point, order: sign * r.multiplicity as i32, kind });
            }
        }
    }
    for e in &essentials {
        if e.is_infinite() && !include_infinity {
            continue;
        }
        entries.push(DivisorEntry { point: *e, order: 0, kind: DivisorKind::Essential });
    }
    if include_infinity && !is_essential(&ExtComplex::Infinity) {
        let ord = -f.rat().order_at_infinity();
        if ord != 0 {
            let kind = if ord > 0 { DivisorKind::Zero } else { DivisorKind::Pole };
            entries.push(DivisorEntry { point: ExtComplex::Infinity, order: ord, kind });
        }
    }
    Ok(Divisor { entries })
}
