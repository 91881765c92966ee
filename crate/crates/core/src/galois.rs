//! Automorphisms of `Q(u, r)` and the structure of its Galois group.
//!
//! An automorphism is stored by the images of the two generators `u` and
//! `r`; applying it substitutes those images into the basis expansion.
//! Composition is therefore just application to the images.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{c, Constant, FieldElem, BASE_DEGREE};
use crate::minpoly::eval_at;
use crate::PolyQ;

/// Closure aborts past this many elements.
pub const CLOSURE_BOUND: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("image of u is not a root of t^8 - 2t^6 - 2t^4 - 2t^2 + 1")]
    ImageOfU,
    #[error("image of r is not a root of the transported quadratic")]
    ImageOfR,
    #[error("group closure exceeded {0} elements")]
    ClosureBound(usize),
}

fn p1() -> PolyQ {
    PolyQ::from_ints(&[1, 0, -2, 0, -2, 0, -2, 0, 1])
}

#[derive(Clone)]
pub struct Automorphism {
    image_u: FieldElem,
    image_r: FieldElem,
    label: Option<String>,
    /// image_u^k for k < 8
    u_powers: Vec<FieldElem>,
}

impl Automorphism {
    /// Validates that `u ↦ image_u`, `r ↦ image_r` extends to a field map.
    pub fn new(
        image_u: FieldElem,
        image_r: FieldElem,
        label: Option<&str>,
    ) -> Result<Self, GaloisError> {
        if !eval_at(&p1(), &image_u).is_zero() {
            return Err(GaloisError::ImageOfU);
        }
        // r² + (2/(u + 1/u)) r + 1 = 0, transported.
        let inv_u = image_u.inv().map_err(|_| GaloisError::ImageOfU)?;
        let x = &image_u + &inv_u;
        let coeff = x.inv().map_err(|_| GaloisError::ImageOfU)?.mul_rational(&crate::int(2));
        let lhs = &(&(&image_r * &image_r) + &(&coeff * &image_r)) + &FieldElem::one();
        if !lhs.is_zero() {
            return Err(GaloisError::ImageOfR);
        }
        Ok(Self::from_images(image_u, image_r, label.map(str::to_string)))
    }

    fn from_images(image_u: FieldElem, image_r: FieldElem, label: Option<String>) -> Self {
        let mut u_powers = Vec::with_capacity(BASE_DEGREE);
        let mut acc = FieldElem::one();
        for _ in 0..BASE_DEGREE {
            u_powers.push(acc.clone());
            acc = &acc * &image_u;
        }
        Automorphism { image_u, image_r, label, u_powers }
    }

    pub fn identity() -> Self {
        Self::from_images(FieldElem::u(), FieldElem::r(), Some("e".into()))
    }

    /// `u ↦ 1/u`, `r ↦ r` (complex conjugation).
    pub fn g1() -> Self {
        Self::new(c(Constant::InvU), c(Constant::R), Some("g1")).unwrap()
    }

    /// `u ↦ −u`, `r ↦ −r`.
    pub fn g2() -> Self {
        Self::new(-c(Constant::U), -c(Constant::R), Some("g2")).unwrap()
    }

    /// `u ↦ u`, `r ↦ 1/r`.
    pub fn g3() -> Self {
        Self::new(c(Constant::U), c(Constant::InvR), Some("g3")).unwrap()
    }

    /// `u ↦ r`, `r ↦ u`.
    pub fn g4() -> Self {
        Self::new(c(Constant::R), c(Constant::U), Some("g4")).unwrap()
    }

    /// The other solution for the image of `r` when `u ↦ r`: `r ↦ 1/u`.
    pub fn g4_alternative() -> Self {
        Self::new(c(Constant::R), c(Constant::InvU), Some("g4'")).unwrap()
    }

    /// `[g1, g2, g3, g4]`.
    pub fn generators() -> Vec<Self> {
        vec![Self::g1(), Self::g2(), Self::g3(), Self::g4()]
    }

    pub fn image_u(&self) -> &FieldElem {
        &self.image_u
    }

    pub fn image_r(&self) -> &FieldElem {
        &self.image_r
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn apply(&self, a: &FieldElem) -> FieldElem {
        let coords = a.coords();
        let mut lo = FieldElem::zero();
        let mut hi = FieldElem::zero();
        for k in 0..BASE_DEGREE {
            if !coords[k].is_zero() {
                lo = &lo + &self.u_powers[k].mul_rational(&coords[k]);
            }
            if !coords[BASE_DEGREE + k].is_zero() {
                hi = &hi + &self.u_powers[k].mul_rational(&coords[BASE_DEGREE + k]);
            }
        }
        if hi.is_zero() {
            lo
        } else {
            &lo + &(&hi * &self.image_r)
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Self::from_images(self.apply(&other.image_u), self.apply(&other.image_r), None)
    }

    fn key(&self) -> (FieldElem, FieldElem) {
        (self.image_u.clone(), self.image_r.clone())
    }
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.image_u == other.image_u && self.image_r == other.image_r
    }
}

impl Eq for Automorphism {}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Automorphism")
            .field("label", &self.label)
            .field("u", &format_args!("{}", self.image_u))
            .field("r", &format_args!("{}", self.image_r))
            .finish()
    }
}

/// A finite group of automorphisms with its full composition table.
#[derive(Debug, Clone)]
pub struct GroupTable {
    elements: Vec<Automorphism>,
    /// `table[i][j]` is the index of `elements[i] ∘ elements[j]`.
    table: Vec<Vec<usize>>,
    identity: usize,
    generators: Vec<usize>,
}

/// Breadth-first closure of `gens` under composition.
pub fn generate_group(gens: &[Automorphism]) -> Result<GroupTable, GaloisError> {
    let mut elements = vec![Automorphism::identity()];
    let mut index: HashMap<(FieldElem, FieldElem), usize> = HashMap::new();
    index.insert(elements[0].key(), 0);
    let mut generators = Vec::with_capacity(gens.len());
    for g in gens {
        let k = g.key();
        let id = match index.get(&k) {
            Some(&id) => id,
            None => {
                elements.push(g.clone());
                index.insert(k, elements.len() - 1);
                elements.len() - 1
            }
        };
        generators.push(id);
    }
    let mut queue: VecDeque<usize> = (0..elements.len()).collect();
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let h = elements[i].compose(g);
            let k = h.key();
            if index.contains_key(&k) {
                continue;
            }
            if elements.len() >= CLOSURE_BOUND {
                return Err(GaloisError::ClosureBound(CLOSURE_BOUND));
            }
            elements.push(h);
            index.insert(k, elements.len() - 1);
            queue.push_back(elements.len() - 1);
        }
    }
    let n = elements.len();
    let mut table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let k = elements[i].compose(&elements[j]).key();
            table[i][j] = *index.get(&k).ok_or(GaloisError::ClosureBound(n))?;
        }
    }
    // Name the generated words after the generators they came from.
    for (slot, g) in generators.iter().zip(gens) {
        if let Some(label) = g.label() {
            if elements[*slot].label.is_none() {
                elements[*slot].label = Some(label.to_string());
            }
        }
    }
    Ok(GroupTable { elements, table, identity: 0, generators })
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Automorphism {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Indices of the generators in the order they were supplied.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order())
            .find(|&j| self.table[i][j] == self.identity)
            .expect("finite group elements have inverses")
    }

    pub fn index_of(&self, a: &Automorphism) -> Option<usize> {
        self.elements.iter().position(|e| e == a)
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut acc = i;
        while acc != self.identity {
            acc = self.table[acc][i];
            k += 1;
        }
        k
    }

    pub fn commute(&self, i: usize, j: usize) -> bool {
        self.table[i][j] == self.table[j][i]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (i + 1..n).all(|j| self.commute(i, j)))
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.table[self.table[g][h]][self.inverse(g)]
    }

    /// Sorted indices of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(i) = queue.pop_front() {
            for &g in gens {
                let k = self.table[i][g];
                if !seen[k] {
                    seen[k] = true;
                    queue.push_back(k);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        (0..self.order()).all(|g| sub.iter().all(|&h| sub.contains(&self.conjugate(g, h))))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&z| (0..self.order()).all(|g| self.commute(z, g)))
            .collect()
    }

    /// Subgroup generated by commutators of elements of `sub`.
    pub fn commutator_subgroup(&self, sub: &[usize]) -> Vec<usize> {
        let mut comms = Vec::new();
        for &a in sub {
            for &b in sub {
                let ab = self.table[a][b];
                let ba_inv = self.inverse(self.table[b][a]);
                let k = self.table[ab][ba_inv];
                if !comms.contains(&k) {
                    comms.push(k);
                }
            }
        }
        self.subgroup(&comms)
    }

    /// Orders along `G ⊇ G' ⊇ G'' ⊇ …` until it stabilises.
    pub fn derived_series(&self) -> Vec<usize> {
        let mut current: Vec<usize> = (0..self.order()).collect();
        let mut orders = vec![current.len()];
        loop {
            let next = self.commutator_subgroup(&current);
            if next.len() == current.len() {
                break;
            }
            orders.push(next.len());
            current = next;
        }
        orders
    }

    pub fn is_soluble(&self) -> bool {
        self.derived_series().last() == Some(&1)
    }

    /// Number of elements of each order.
    pub fn order_census(&self) -> BTreeMap<usize, usize> {
        let mut census = BTreeMap::new();
        for i in 0..self.order() {
            *census.entry(self.element_order(i)).or_insert(0) += 1;
        }
        census
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|i| self.element_order(i)).fold(1, num_integer::lcm)
    }

    /// Restricts the table to `sub`, keeping the listed generators.
    pub fn restrict(&self, sub: &[usize], gens: &[usize]) -> GroupTable {
        let pos = |i: usize| sub.iter().position(|&s| s == i).expect("closed subgroup");
        GroupTable {
            elements: sub.iter().map(|&i| self.elements[i].clone()).collect(),
            table: sub
                .iter()
                .map(|&i| sub.iter().map(|&j| pos(self.table[i][j])).collect())
                .collect(),
            identity: pos(self.identity),
            generators: gens.iter().map(|&g| pos(g)).collect(),
        }
    }

    /// A non-abelian subgroup `K` of order `n/2` with `z ∉ K`, so that
    /// `G = ⟨z⟩ × K` when `z` is a central involution.
    fn complement_of(&self, z: usize) -> Option<Vec<usize>> {
        let n = self.order();
        for a in 0..n {
            for b in a + 1..n {
                let k = self.subgroup(&[a, b]);
                if k.len() * 2 != n || k.contains(&z) {
                    continue;
                }
                let abelian = k.iter().all(|&x| k.iter().all(|&y| self.commute(x, y)));
                if !abelian {
                    return Some(k);
                }
            }
        }
        None
    }
}

/// Isomorphism type, as far as the certification can tell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupType {
    Trivial,
    /// `Z₂^k`
    ElementaryAbelian(u32),
    /// `Z₂ × D₈`, the dihedral group of order 8 times a central `Z₂`.
    Z2xD8,
    Abelian,
    Unidentified,
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::Trivial => write!(f, "trivial"),
            GroupType::ElementaryAbelian(k) => write!(f, "Z2^{k}"),
            GroupType::Z2xD8 => write!(f, "Z2xD8"),
            GroupType::Abelian => write!(f, "abelian"),
            GroupType::Unidentified => write!(f, "unidentified"),
        }
    }
}

/// Checks tied to the generators `g1..g4` (present when the table was built
/// from at least four generators).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub g2_central: bool,
    pub g1g4_order: usize,
    pub g3g4_order: usize,
    pub h_order: usize,
    pub h_abelian: bool,
    pub h_normal: bool,
    /// `g4 g1 g4⁻¹ = g3`, `g4 g2 g4⁻¹ = g2`, `g4 g3 g4⁻¹ = g1`.
    pub conjugations: [bool; 3],
    pub quotient_order: usize,
    pub quotient_abelian: bool,
    /// `G = ⟨g2⟩ × K` with `K` dihedral of order 8.
    pub direct_product: bool,
    /// `e ◁ H ◁ G` with abelian factors.
    pub chain_soluble: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub order: usize,
    pub abelian: bool,
    pub exponent: usize,
    pub order_census: BTreeMap<usize, usize>,
    pub center_order: usize,
    pub derived_series: Vec<usize>,
    pub soluble: bool,
    pub isomorphism_type: GroupType,
    pub relations: Option<RelationReport>,
    /// Human-readable description of every failed sub-check.
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_dihedral_8(g: &GroupTable, k: &[usize]) -> bool {
    let mut census = BTreeMap::new();
    for &i in k {
        *census.entry(g.element_order(i)).or_insert(0) += 1;
    }
    k.len() == 8 && census == BTreeMap::from([(1, 1), (2, 5), (4, 2)])
}

/// Certifies order, solubility and isomorphism type; with four or more
/// generators also checks the relations among `g1..g4`. Failed sub-checks
/// are collected in `failures`.
pub fn certify_structure(g: &GroupTable) -> StructureReport {
    let order = g.order();
    let abelian = g.is_abelian();
    let exponent = g.exponent();
    let order_census = g.order_census();
    let center = g.center();
    let derived_series = g.derived_series();
    let soluble = derived_series.last() == Some(&1);
    let mut failures = Vec::new();
    if !soluble {
        failures.push(format!("derived series {derived_series:?} does not reach the identity"));
    }

    let relations = (g.generators.len() >= 4).then(|| {
        let [g1, g2, g3, g4] = [0, 1, 2, 3].map(|k| g.generators[k]);
        let g2_central = center.contains(&g2);
        let g1g4_order = g.element_order(g.compose(g1, g4));
        let g3g4_order = g.element_order(g.compose(g3, g4));
        let h = g.subgroup(&[g1, g2, g3]);
        let h_abelian = h.iter().all(|&a| h.iter().all(|&b| g.commute(a, b)));
        let h_normal = g.is_normal(&h);
        let conjugations =
            [(g1, g3), (g2, g2), (g3, g1)].map(|(a, b)| g.conjugate(g4, a) == b);
        let quotient_order = order / h.len();
        let quotient_abelian = g.commutator_subgroup(&(0..order).collect::<Vec<_>>())
            .iter()
            .all(|k| h.contains(k));
        let direct_product = g.element_order(g2) == 2
            && g2_central
            && g.complement_of(g2).is_some_and(|k| is_dihedral_8(g, &k));
        let chain_soluble = h_abelian && h_normal && quotient_abelian;
        RelationReport {
            g2_central,
            g1g4_order,
            g3g4_order,
            h_order: h.len(),
            h_abelian,
            h_normal,
            conjugations,
            quotient_order,
            quotient_abelian,
            direct_product,
            chain_soluble,
        }
    });

    if let Some(rel) = &relations {
        let mut check = |ok: bool, what: &str| {
            if !ok {
                failures.push(what.to_string());
            }
        };
        check(rel.g2_central, "g2 is not central");
        check(rel.g1g4_order == 4, "g1g4 does not have order 4");
        check(rel.g3g4_order == 4, "g3g4 does not have order 4");
        check(rel.h_order == 8, "H = <g1,g2,g3> does not have order 8");
        check(rel.h_abelian, "H is not abelian");
        check(rel.h_normal, "H is not normal");
        check(rel.conjugations[0], "g4 g1 g4^-1 != g3");
        check(rel.conjugations[1], "g4 g2 g4^-1 != g2");
        check(rel.conjugations[2], "g4 g3 g4^-1 != g1");
        check(rel.quotient_order == 2, "G/H does not have order 2");
        check(rel.quotient_abelian, "G/H is not abelian");
        check(rel.direct_product, "no decomposition <g2> x D8");
        check(rel.chain_soluble, "e < H < G is not a soluble chain");
    }

    let z2xd8_census = BTreeMap::from([(1, 1), (2, 11), (4, 4)]);
    let isomorphism_type = if order == 1 {
        GroupType::Trivial
    } else if abelian && exponent == 2 {
        GroupType::ElementaryAbelian(order.trailing_zeros())
    } else if abelian {
        GroupType::Abelian
    } else if order == 16 && order_census == z2xd8_census && {
        let z = relations
            .as_ref()
            .filter(|r| r.g2_central)
            .map(|_| g.generators[1])
            .or_else(|| {
                center.iter().copied().find(|&z| g.element_order(z) == 2 && g.complement_of(z).is_some())
            });
        z.and_then(|z| g.complement_of(z)).is_some_and(|k| is_dihedral_8(g, &k))
    } {
        GroupType::Z2xD8
    } else {
        GroupType::Unidentified
    };

    StructureReport {
        order,
        abelian,
        exponent,
        order_census,
        center_order: center.len(),
        derived_series,
        soluble,
        isomorphism_type,
        relations,
        failures,
    }
}

/// Whether every element of `h` fixes `a`.
pub fn fixed_subfield_check(h: &GroupTable, a: &FieldElem) -> bool {
    h.elements().iter().all(|s| &s.apply(a) == a)
}

/// Column heads of the action table.
pub const ACTION_COLUMNS: [Constant; 7] = [
    Constant::U,
    Constant::R,
    Constant::Sqrt5,
    Constant::Sqrt2,
    Constant::ISqrtSqrt5p1,
    Constant::I,
    Constant::Tau,
];

/// `table[row][col] = gens[row](ACTION_COLUMNS[col])`.
pub fn action_table(gens: &[Automorphism]) -> Vec<Vec<FieldElem>> {
    let cols: Vec<FieldElem> = ACTION_COLUMNS.iter().map(|k| k.value()).collect();
    gens.iter()
        .map(|g| cols.iter().map(|a| g.apply(a)).collect())
        .collect()
}

/// `√(√5 − 1)` as the positive real element `1/r − r`.
pub fn sqrt_sqrt5_minus1() -> FieldElem {
    &c(Constant::InvR) - &c(Constant::R)
}

/// The action of `g1..g4` on [`ACTION_COLUMNS`] as usually tabulated.
///
/// Three entries of the `g4` row (on `√2`, `i√(1+√5)` and `τ`) are
/// printed with the wrong sign in that table: `g4(u) = r`, `g4(r) = u`
/// force `g4(√2) = √2`, `g4(τ) = τ` and `g4(u − 1/u) = r − 1/r = −√(√5−1)`.
/// They are kept as printed so comparisons can report them.
pub fn reference_action_table() -> Vec<Vec<FieldElem>> {
    let u = c(Constant::U);
    let r = c(Constant::R);
    let s5 = c(Constant::Sqrt5);
    let s2 = c(Constant::Sqrt2);
    let isq = c(Constant::ISqrtSqrt5p1);
    let i = c(Constant::I);
    let tau = c(Constant::Tau);
    let inv_tau = tau.inv().expect("tau is a unit");
    vec![
        vec![c(Constant::InvU), r.clone(), s5.clone(), s2.clone(), -isq.clone(), -i.clone(), inv_tau.clone()],
        vec![-u.clone(), -r.clone(), s5.clone(), -s2.clone(), -isq.clone(), i.clone(), -tau.clone()],
        vec![u.clone(), c(Constant::InvR), s5.clone(), s2.clone(), isq, -i.clone(), inv_tau],
        vec![r, u, -s5, -s2, sqrt_sqrt5_minus1(), i, -tau],
    ]
}

/// Cell-by-cell comparison of a computed action table against a reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableComparison {
    pub entries: usize,
    pub matching: usize,
    /// `(row, col)` where computed = −reference exactly.
    pub sign_flips: Vec<(usize, usize)>,
    /// `(row, col)` that differ by more than a sign.
    pub mismatches: Vec<(usize, usize)>,
}

pub fn compare_tables(computed: &[Vec<FieldElem>], reference: &[Vec<FieldElem>]) -> TableComparison {
    let mut out = TableComparison { entries: 0, matching: 0, sign_flips: vec![], mismatches: vec![] };
    for (row, (a, b)) in computed.iter().zip(reference).enumerate() {
        for (col, (x, y)) in a.iter().zip(b).enumerate() {
            out.entries += 1;
            if x == y {
                out.matching += 1;
            } else if x == &-y.clone() {
                out.sign_flips.push((row, col));
            } else {
                out.mismatches.push((row, col));
            }
        }
    }
    out
}

/// Group elements whose action on [`ACTION_COLUMNS`] equals `row`.
pub fn realizing_elements(g: &GroupTable, row: &[FieldElem]) -> Vec<usize> {
    let cols: Vec<FieldElem> = ACTION_COLUMNS.iter().map(|k| k.value()).collect();
    (0..g.order())
        .filter(|&i| cols.iter().zip(row).all(|(a, want)| &g.element(i).apply(a) == want))
        .collect()
}
