//! Exact reconstruction and verification of the d=4 SIC fiducial projector.
//!
//! The sixteen overlap phases `e^{iθ_{i,j}} = √5·⟨ψ₀|D_{i,j}|ψ₀⟩` take only
//! the values `±u, ±1/u, −1`. Expanding the projector in the displacement
//! basis gives
//!
//! ```text
//! Π = ¼ [ I + Σ_{(i,j)≠(0,0)} D†_{i,j} · e^{iθ_{i,j}} / √5 ]
//! ```
//!
//! and everything is checked with exact arithmetic in `Q(u, r)`.

use num_complex::Complex;
use num_traits::One;
use thiserror::Error;

use crate::exact::{rat, Matrix, Rational};
use crate::field::{c, Constant, FieldElem};
use crate::minpoly::{is_algebraic_integer, is_unit, minimal_polynomial};
use crate::scalar::Real;
use crate::weyl::{displacement, WeylIndex};
use crate::PolyQ;

pub const DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SicError {
    #[error("discriminant formula needs d >= 4, got {0}")]
    DiscriminantDimension(usize),
    #[error("phase index ({0}, {1}) out of range")]
    PhaseIndex(usize, usize),
}

/// Overlap phases indexed by `(i, j)`; the `(0, 0)` slot is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseMatrix {
    entries: Matrix<FieldElem>,
}

/// The d=4 phase matrix, rows indexed by `i` and columns by `j`:
///
/// ```text
/// ×    u    −1    1/u
/// u    1/u  −1/u  1/u
/// −1   −u   −1    1/u
/// 1/u  u    u     u
/// ```
pub fn canonical_phase_matrix() -> PhaseMatrix {
    let u = c(Constant::U);
    let v = c(Constant::InvU);
    let m1 = FieldElem::from_int(-1);
    let rows = [
        [FieldElem::one(), u.clone(), m1.clone(), v.clone()],
        [u.clone(), v.clone(), -v.clone(), v.clone()],
        [m1.clone(), -u.clone(), m1, v.clone()],
        [v, u.clone(), u.clone(), u],
    ];
    PhaseMatrix { entries: Matrix::from_fn(DIM, DIM, |i, j| rows[i][j].clone()) }
}

impl PhaseMatrix {
    pub fn from_entries(entries: Matrix<FieldElem>) -> Self {
        assert_eq!((entries.rows(), entries.cols()), (DIM, DIM));
        PhaseMatrix { entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        self.entries.get(i, j)
    }

    pub fn entries(&self) -> &Matrix<FieldElem> {
        &self.entries
    }

    /// Copy with entry `(i, j)` negated.
    pub fn with_negated(&self, i: usize, j: usize) -> Result<Self, SicError> {
        if i >= DIM || j >= DIM || (i, j) == (0, 0) {
            return Err(SicError::PhaseIndex(i, j));
        }
        let mut entries = self.entries.clone();
        entries.set(i, j, -entries.get(i, j).clone());
        Ok(PhaseMatrix { entries })
    }

    fn phase_indices() -> impl Iterator<Item = (usize, usize)> {
        (0..DIM).flat_map(|i| (0..DIM).map(move |j| (i, j))).filter(|&p| p != (0, 0))
    }

    /// Every phase satisfies `z · conj(z) = 1`.
    pub fn is_unimodular(&self) -> bool {
        Self::phase_indices().all(|(i, j)| self.get(i, j).norm_sqr().is_one())
    }

    /// Every phase is one of `±u, ±1/u, ±1`.
    pub fn uses_allowed_values(&self) -> bool {
        let u = c(Constant::U);
        let v = c(Constant::InvU);
        let one = FieldElem::one();
        let allowed = [u.clone(), -u, v.clone(), -v, one.clone(), -one];
        Self::phase_indices().all(|(i, j)| allowed.contains(self.get(i, j)))
    }

    /// `P(−i, −j) = s · conj(P(i, j))` where `D_{−i,−j} = s · D†_{i,j}`,
    /// `s = ±1`. Equivalent to hermiticity of the reconstructed projector.
    pub fn has_hermitian_symmetry(&self) -> bool {
        Self::phase_indices().all(|(i, j)| {
            let p = WeylIndex::new(i, j, DIM).unwrap();
            let n = p.negated();
            let sign = adjoint_sign(p);
            self.get(n.i(), n.j()) == &(&sign * &self.get(i, j).conj())
        })
    }

    /// All phases lie in `Q(u)`.
    pub fn in_base_field(&self) -> bool {
        Self::phase_indices().all(|(i, j)| self.get(i, j).in_base_field())
    }
}

/// The scalar `s` with `D_{−i,−j} = s · D†_{i,j}`.
pub fn adjoint_sign(p: WeylIndex) -> FieldElem {
    let d = displacement::<FieldElem>(p).unwrap();
    let dn = displacement::<FieldElem>(p.negated()).unwrap();
    // D_{−p} D_p = s · D†_p D_p = s · I
    (&dn * &d).get(0, 0).clone()
}

/// Hermitian rank-one projector with entries in `Q(u, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactProjector {
    matrix: Matrix<FieldElem>,
}

impl ExactProjector {
    pub fn new(matrix: Matrix<FieldElem>) -> Self {
        ExactProjector { matrix }
    }

    pub fn matrix(&self) -> &Matrix<FieldElem> {
        &self.matrix
    }

    /// Unit-norm fiducial vector from the embedded projector: the column with
    /// the largest diagonal entry, normalised. Fixes the global phase so that
    /// that component is real and positive.
    pub fn embedded_fiducial<F: Real>(&self) -> Vec<Complex<F>> {
        let m = self.matrix.map(|z| z.embed_in::<F>());
        let k = (0..DIM)
            .max_by(|&a, &b| m.get(a, a).re.partial_cmp(&m.get(b, b).re).unwrap())
            .unwrap();
        let scale = m.get(k, k).re.sqrt();
        (0..DIM).map(|i| *m.get(i, k) / scale).collect()
    }
}

/// `Π = ¼ [ I + Σ D†_{i,j} P(i,j) · √5/5 ]`.
pub fn reconstruct_projector(p: &PhaseMatrix) -> ExactProjector {
    let inv_sqrt5 = c(Constant::Sqrt5).mul_rational(&rat(1, 5));
    let mut acc = Matrix::<FieldElem>::identity(DIM);
    for (i, j) in PhaseMatrix::phase_indices() {
        let d = displacement::<FieldElem>(WeylIndex::new(i, j, DIM).unwrap()).unwrap();
        let coeff = p.get(i, j) * &inv_sqrt5;
        acc = &acc + &d.adjoint().scale(&coeff);
    }
    ExactProjector { matrix: acc.scale(&FieldElem::from_rational(rat(1, 4))) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapCheck {
    pub index: WeylIndex,
    /// `Tr(Π D Π D†)`
    pub value: FieldElem,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SicReport {
    pub hermitian: bool,
    pub idempotent: bool,
    pub unit_trace: bool,
    pub overlaps: Vec<OverlapCheck>,
}

impl SicReport {
    pub fn is_sic(&self) -> bool {
        self.hermitian && self.idempotent && self.unit_trace && self.overlaps.iter().all(|o| o.ok)
    }

    pub fn failing_overlaps(&self) -> Vec<WeylIndex> {
        self.overlaps.iter().filter(|o| !o.ok).map(|o| o.index).collect()
    }
}

/// Exact SIC conditions: `Π = Π†`, `Π² = Π`, `Tr Π = 1` and
/// `Tr(Π D_{i,j} Π D†_{i,j}) = 1/5` for the 15 nontrivial displacements.
pub fn verify_sic_projector(pi: &ExactProjector) -> SicReport {
    let m = &pi.matrix;
    let target = FieldElem::from_rational(rat(1, DIM as i64 + 1));
    let overlaps = PhaseMatrix::phase_indices()
        .map(|(i, j)| {
            let index = WeylIndex::new(i, j, DIM).unwrap();
            let d = displacement::<FieldElem>(index).unwrap();
            let left = &(m * &d) * m;
            let value = left.trace_product(&d.adjoint());
            let ok = value == target;
            OverlapCheck { index, value, ok }
        })
        .collect();
    SicReport {
        hermitian: &m.adjoint() == m,
        idempotent: &(m * m) == m,
        unit_trace: m.trace().is_one(),
        overlaps,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitAuditEntry {
    pub name: String,
    pub value: FieldElem,
    pub minimal_polynomial: PolyQ,
    pub degree: usize,
    pub algebraic_integer: bool,
    pub unit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitReport {
    /// Distinct phases of the canonical phase matrix.
    pub phases: Vec<UnitAuditEntry>,
    /// The listed unit-group generators `u1..u5`.
    pub generators: Vec<UnitAuditEntry>,
    pub u3_equals_u: bool,
}

/// Expected minimal-polynomial degrees of `u1..u5`.
pub const GENERATOR_DEGREES: [usize; 5] = [2, 4, 8, 8, 8];

impl UnitReport {
    pub fn passed(&self) -> bool {
        let p1 = PolyQ::from_ints(&[1, 0, -2, 0, -2, 0, -2, 0, 1]);
        let p0 = PolyQ::from_ints(&[1, 1]);
        self.phases.iter().all(|e| {
            e.algebraic_integer && e.unit && (e.minimal_polynomial == p1 || e.minimal_polynomial == p0)
        }) && self.generators.iter().all(|e| e.unit)
            && self.generators.iter().map(|e| e.degree).eq(GENERATOR_DEGREES)
            && self.u3_equals_u
    }
}

fn audit(name: &str, value: FieldElem) -> UnitAuditEntry {
    let mp = minimal_polynomial(&value);
    UnitAuditEntry {
        name: name.to_string(),
        algebraic_integer: is_algebraic_integer(&value),
        unit: is_unit(&value),
        minimal_polynomial: mp.monic,
        degree: mp.degree,
        value,
    }
}

pub fn phase_unit_audit() -> UnitReport {
    let p = canonical_phase_matrix();
    let mut distinct: Vec<FieldElem> = Vec::new();
    for (i, j) in PhaseMatrix::phase_indices() {
        if !distinct.contains(p.get(i, j)) {
            distinct.push(p.get(i, j).clone());
        }
    }
    let named = |z: &FieldElem| {
        let u = c(Constant::U);
        let v = c(Constant::InvU);
        if *z == u {
            "u"
        } else if *z == -u {
            "-u"
        } else if *z == v {
            "1/u"
        } else if *z == -v {
            "-1/u"
        } else if z.is_one() {
            "1"
        } else {
            "-1"
        }
    };
    let phases = distinct.into_iter().map(|z| audit(named(&z), z)).collect();
    let generators = [Constant::U1, Constant::U2, Constant::U3, Constant::U4, Constant::U5]
        .into_iter()
        .map(|k| audit(k.name(), k.value()))
        .collect();
    UnitReport { phases, generators, u3_equals_u: c(Constant::U3) == c(Constant::U) }
}

/// `D = (d − 3)(d + 1)` and its square-free part.
pub fn discriminant(d: usize) -> Result<(u64, u64), SicError> {
    if d < 4 {
        return Err(SicError::DiscriminantDimension(d));
    }
    let d = d as u64;
    let disc = (d - 3) * (d + 1);
    let mut rest = disc;
    let mut free = 1;
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    Ok((disc, free * rest))
}

/// `1/(d+1)` as a rational.
pub fn overlap_target(d: usize) -> Rational {
    rat(1, d as i64 + 1)
}

/// `Tr Π` is exactly rational 1; helper for reports.
pub fn trace_value(pi: &ExactProjector) -> FieldElem {
    pi.matrix.trace()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_entries() {
        let p = canonical_phase_matrix();
        assert_eq!(p.get(0, 2), &FieldElem::from_int(-1));
        assert_eq!(p.get(3, 3), &c(Constant::U));
        assert_eq!(&(p.get(1, 1) * p.get(0, 1)), &FieldElem::one());
        assert!(p.is_unimodular());
        assert!(p.uses_allowed_values());
        assert!(p.has_hermitian_symmetry());
        assert!(p.in_base_field());
    }

    #[test]
    fn canonical_projector_is_sic() {
        let pi = reconstruct_projector(&canonical_phase_matrix());
        assert!(trace_value(&pi).is_one());
        let rep = verify_sic_projector(&pi);
        assert!(rep.hermitian && rep.idempotent && rep.unit_trace);
        assert_eq!(rep.overlaps.len(), 15);
        assert!(rep.overlaps.iter().all(|o| o.value == FieldElem::from_rational(rat(1, 5))));
        assert!(rep.is_sic());
    }

    #[test]
    fn adjoint_signs_are_plus_minus_one() {
        let one = FieldElem::one();
        let mut minus = 0;
        for p in WeylIndex::all(4).unwrap() {
            let s = adjoint_sign(p);
            assert!(s == one || s == -one.clone());
            if s != one {
                minus += 1;
            }
        }
        // odd i·j pairs with both indices nonzero pick up a sign
        assert!(minus > 0);
    }

    #[test]
    fn all_ones_phases_fail_idempotence() {
        let ones = PhaseMatrix::from_entries(Matrix::from_fn(4, 4, |_, _| FieldElem::one()));
        let rep = verify_sic_projector(&reconstruct_projector(&ones));
        assert!(!rep.idempotent);
        assert!(!rep.is_sic());
    }

    #[test]
    fn maximally_mixed_state() {
        let pi = ExactProjector::new(Matrix::identity(4).scale(&FieldElem::from_rational(rat(1, 4))));
        let rep = verify_sic_projector(&pi);
        assert!(rep.unit_trace);
        assert!(!rep.idempotent);
    }

    #[test]
    fn negated_phase_breaks_equiangularity() {
        let p = canonical_phase_matrix().with_negated(1, 2).unwrap();
        let rep = verify_sic_projector(&reconstruct_projector(&p));
        assert!(!rep.is_sic());
        assert!(!rep.failing_overlaps().is_empty() || !rep.hermitian || !rep.idempotent);
        assert_eq!(
            canonical_phase_matrix().with_negated(0, 0).unwrap_err(),
            SicError::PhaseIndex(0, 0)
        );
    }

    #[test]
    fn unit_audit() {
        let rep = phase_unit_audit();
        assert!(rep.passed());
        assert!(rep.u3_equals_u);
        let u1 = &rep.generators[0];
        assert_eq!(u1.degree, 2);
        assert!(u1.unit);
        let u_entry = rep.phases.iter().find(|e| e.name == "u").unwrap();
        assert_eq!(u_entry.minimal_polynomial, PolyQ::from_ints(&[1, 0, -2, 0, -2, 0, -2, 0, 1]));
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(4).unwrap(), (5, 5));
        assert_eq!(discriminant(5).unwrap(), (12, 3));
        assert_eq!(discriminant(7).unwrap(), (32, 2));
        assert_eq!(discriminant(3).unwrap_err(), SicError::DiscriminantDimension(3));
        // d = 8: 5·9 = 45 = 5·3²
        assert_eq!(discriminant(8).unwrap(), (45, 5));
    }

    #[test]
    fn embedded_fiducial_reproduces_projector() {
        let pi = reconstruct_projector(&canonical_phase_matrix());
        let psi = pi.embedded_fiducial::<f64>();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
        for a in 0..4 {
            for b in 0..4 {
                let want = pi.matrix().get(a, b).embed();
                let got = psi[a] * psi[b].conj();
                assert!((want - got).norm() < 1e-13);
            }
        }
    }
}
