//! Homology bases, period matrices, Abel-Jacobi coordinates, and the torus.
//!
//! A spanning tree yields one oriented cycle per non-tree edge: the edge
//! followed by the tree path closing it. The period matrix collects oriented
//! intersection lengths of those cycles; its rows generate the lattice that
//! turns coordinate vectors into points of the Jacobian torus. Equality in
//! the torus is an exact integer-linear-system question. Paths for the
//! Abel-Jacobi map always run through the basis's spanning tree, so the
//! coordinates are deterministic and the lattice absorbs path ambiguity.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::divisor::{ensure_same_graph, Divisor};
use crate::error::{Error, Result};
use crate::graph::{complement_components, EdgeId, MetricGraph, Point, Removal};
use crate::linalg;
use crate::rational::Rational;

/// An oriented cycle stored as signed whole-edge coefficients (each in
/// {-1, 0, 1} since a cycle passes an edge at most once).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub nontree_edge: EdgeId,
    chain: BTreeMap<EdgeId, i64>,
}

impl Cycle {
    pub fn coefficient(&self, e: &EdgeId) -> i64 {
        self.chain.get(e).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, i64)> {
        self.chain.iter().map(|(e, &s)| (e, s))
    }

    fn negate(&mut self) {
        for s in self.chain.values_mut() {
            *s = -*s;
        }
    }
}

/// An oriented homology basis built from a spanning tree: one cycle per
/// non-tree edge, each containing its non-tree edge with coefficient +1.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    graph: Arc<MetricGraph>,
    tree: BTreeSet<EdgeId>,
    cycles: Vec<Cycle>,
    period: Arc<PeriodMatrix>,
}

/// The matrix of oriented intersection lengths of the basis cycles. Its rows
/// generate the period lattice of the Jacobian torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodMatrix {
    entries: Vec<Vec<Rational>>,
}

impl PeriodMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &Vec<Vec<Rational>> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn det(&self) -> Rational {
        linalg::det(&self.entries)
    }

    /// Exact positive-definiteness via leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.dim()).all(|k| {
            let minor: Vec<Vec<Rational>> = self.entries[..k]
                .iter()
                .map(|row| row[..k].to_vec())
                .collect();
            linalg::det(&minor).is_positive()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

/// Builds the homology basis for a spanning tree. Each non-tree edge, in id
/// order, is traversed positively from its stored tail and closed with the
/// tree path back.
pub fn homology_basis(graph: &Arc<MetricGraph>, tree: &BTreeSet<EdgeId>) -> Result<HomologyBasis> {
    graph.check_spanning_tree(tree)?;
    let mut cycles = Vec::new();
    for (id, data) in graph.edges() {
        if tree.contains(id) {
            continue;
        }
        let mut chain: BTreeMap<EdgeId, i64> = BTreeMap::new();
        chain.insert(id.clone(), 1);
        for (te, forward) in graph.tree_path(tree, &data.ends.1, &data.ends.0) {
            *chain.entry(te).or_insert(0) += if forward { 1 } else { -1 };
        }
        chain.retain(|_, s| *s != 0);
        cycles.push(Cycle { nontree_edge: id.clone(), chain });
    }
    debug_assert_eq!(cycles.len() as i64, graph.betti1());
    let period = Arc::new(compute_period(graph, &cycles));
    Ok(HomologyBasis { graph: graph.clone(), tree: tree.clone(), cycles, period })
}

fn compute_period(graph: &MetricGraph, cycles: &[Cycle]) -> PeriodMatrix {
    let g = cycles.len();
    let mut entries = vec![vec![Rational::zero(); g]; g];
    for (id, data) in graph.edges() {
        for i in 0..g {
            let si = cycles[i].coefficient(id);
            if si == 0 {
                continue;
            }
            for j in 0..g {
                let sj = cycles[j].coefficient(id);
                if sj == 0 {
                    continue;
                }
                let add = data.length.scale_int(si * sj);
                entries[i][j] = &entries[i][j] + &add;
            }
        }
    }
    PeriodMatrix { entries }
}

impl HomologyBasis {
    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn tree(&self) -> &BTreeSet<EdgeId> {
        &self.tree
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn genus(&self) -> usize {
        self.cycles.len()
    }

    pub fn period(&self) -> &Arc<PeriodMatrix> {
        &self.period
    }

    /// Reverses the orientation of one basis cycle (a lattice-preserving
    /// presentation change).
    pub fn flip_cycle(&mut self, index: usize) {
        self.cycles[index].negate();
        self.period = Arc::new(compute_period(&self.graph, &self.cycles));
    }

    /// Signed coefficients of an edge in each basis cycle.
    pub(crate) fn edge_signs(&self, e: &EdgeId) -> Vec<i64> {
        self.cycles.iter().map(|c| c.coefficient(e)).collect()
    }

    /// Oriented intersection coordinates of the tree path from the canonical
    /// root to `p` (entering interior points from the stored tail).
    pub(crate) fn point_coords(&self, p: &Point) -> Result<Vec<Rational>> {
        p.validate(&self.graph)?;
        let root = self.graph.canonical_vertex().clone();
        let mut coords = vec![Rational::zero(); self.genus()];
        let mut add_edge = |coords: &mut Vec<Rational>, e: &EdgeId, sign: i64, span: &Rational| {
            for (j, c) in self.cycles.iter().enumerate() {
                let s = c.coefficient(e);
                if s != 0 {
                    coords[j] = &coords[j] + &span.scale_int(s * sign);
                }
            }
        };
        let target_vertex = match p {
            Point::Vertex(v) => v.clone(),
            Point::Interior(e, _) => self.graph.edge(e)?.ends.0.clone(),
        };
        for (te, forward) in self.graph.tree_path(&self.tree, &root, &target_vertex) {
            let len = self.graph.length(&te)?.clone();
            add_edge(&mut coords, &te, if forward { 1 } else { -1 }, &len);
        }
        if let Point::Interior(e, t) = p {
            add_edge(&mut coords, e, 1, t);
        }
        Ok(coords)
    }
}

/// The period matrix of a homology basis.
pub fn period_matrix(basis: &HomologyBasis) -> Arc<PeriodMatrix> {
    basis.period().clone()
}

/// A point of the Jacobian torus: rational coordinates considered modulo the
/// integer row span of the period matrix. Never compare coordinates raw.
#[derive(Clone, Debug)]
pub struct TorusPoint {
    coords: Vec<Rational>,
    lattice: Arc<PeriodMatrix>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Rational>, lattice: Arc<PeriodMatrix>) -> Result<TorusPoint> {
        if coords.len() != lattice.dim() {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                lattice.dim(),
                coords.len()
            )));
        }
        Ok(TorusPoint { coords, lattice })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn lattice(&self) -> &Arc<PeriodMatrix> {
        &self.lattice
    }

    pub fn checked_add(&self, other: &TorusPoint) -> Result<TorusPoint> {
        ensure_same_lattice(self, other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        TorusPoint::new(coords, self.lattice.clone())
    }

    pub fn checked_sub(&self, other: &TorusPoint) -> Result<TorusPoint> {
        ensure_same_lattice(self, other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        TorusPoint::new(coords, self.lattice.clone())
    }

    /// Canonical fundamental-domain representative, for display only.
    pub fn reduced_coords(&self) -> Vec<Rational> {
        let m = self.lattice.entries();
        let mt = linalg::transpose(m);
        let inv = linalg::inverse(&mt).expect("period matrix is nonsingular");
        let alpha = linalg::mat_vec(&inv, &self.coords);
        let shift: Vec<Rational> = alpha
            .iter()
            .map(|a| Rational::from_bigint(a.floor_int()))
            .collect();
        let lattice_part = linalg::mat_vec(&mt, &shift);
        self.coords
            .iter()
            .zip(&lattice_part)
            .map(|(c, l)| c - l)
            .collect()
    }
}

fn ensure_same_lattice(x: &TorusPoint, y: &TorusPoint) -> Result<()> {
    if Arc::ptr_eq(&x.lattice, &y.lattice) || x.lattice == y.lattice {
        Ok(())
    } else {
        Err(Error::LatticeMismatch)
    }
}

/// Whether two torus points are equal modulo the period lattice: solves the
/// square rational system exactly and checks integrality.
pub fn torus_eq(x: &TorusPoint, y: &TorusPoint) -> Result<bool> {
    ensure_same_lattice(x, y)?;
    let diff: Vec<Rational> = x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect();
    lattice_member(&x.lattice, &diff)
}

/// Whether `v` lies in the integer row span of the period matrix.
pub(crate) fn lattice_member(lattice: &PeriodMatrix, v: &[Rational]) -> Result<bool> {
    let mt = linalg::transpose(lattice.entries());
    let Some((alpha, kernel)) = linalg::solve_general(&mt, v) else {
        return Ok(false);
    };
    debug_assert!(kernel.is_empty(), "period matrix is nonsingular");
    Ok(alpha.iter().all(|a| a.is_integer()))
}

/// Abel-Jacobi image of a divisor with the given base point, extended by
/// linearity: the class of `D - deg(D) * base` in coordinates.
pub fn abel_jacobi(d: &Divisor, base: &Point, basis: &HomologyBasis) -> Result<TorusPoint> {
    ensure_same_graph(d.graph(), basis.graph())?;
    base.validate(basis.graph())?;
    let g = basis.genus();
    let mut coords = vec![Rational::zero(); g];
    for (p, c) in d.entries() {
        let phi = basis.point_coords(p)?;
        for j in 0..g {
            coords[j] = &coords[j] + &phi[j].scale_int(c);
        }
    }
    let phi_base = basis.point_coords(base)?;
    let deg = d.degree();
    for j in 0..g {
        coords[j] = &coords[j] - &phi_base[j].scale_int(deg);
    }
    TorusPoint::new(coords, basis.period().clone())
}

/// Determinant of the period matrix versus the weighted spanning-tree sum
/// `sum over trees T of the product of lengths of edges outside T`. The two
/// agree (tropical Kirchhoff); callers assert equality.
pub fn kirchhoff_check(graph: &Arc<MetricGraph>) -> Result<(Rational, Rational)> {
    let trees = graph.spanning_trees()?;
    let first = trees.first().ok_or(Error::DisconnectedGraph)?;
    let basis = homology_basis(graph, first)?;
    let det = basis.period().det();
    let mut tree_sum = Rational::zero();
    for tree in &trees {
        let mut prod = Rational::one();
        for (id, data) in graph.edges() {
            if !tree.contains(id) {
                prod = &prod * &data.length;
            }
        }
        tree_sum = &tree_sum + &prod;
    }
    Ok((det, tree_sum))
}

/// Whether an effective divisor supported on edge interiors has no other
/// effective representative: true iff its support does not disconnect the
/// graph and no point carries two or more chips (a doubled interior chip
/// always splits by an opposite-direction move).
pub fn is_rigid(d: &Divisor) -> Result<bool> {
    if !d.is_effective() {
        return Err(Error::InvalidInput("divisor must be effective".into()));
    }
    if d.support().any(|p| p.is_vertex()) {
        return Err(Error::UnsupportedSupport);
    }
    if d.entries().any(|(_, c)| c >= 2) {
        return Ok(false);
    }
    let removed: Vec<Removal> = d.support().map(|p| Removal::Point(p.clone())).collect();
    let comps = complement_components(d.graph(), &removed)?;
    Ok(comps.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId;
    use crate::reduce::is_equivalent;

    fn arc(g: MetricGraph) -> Arc<MetricGraph> {
        Arc::new(g)
    }

    fn theta_lengths(l1: i64, l2: i64, l3: i64) -> Arc<MetricGraph> {
        arc(MetricGraph::from_tuples(
            &["u", "w"],
            &[("e1", "u", "w", l1), ("e2", "u", "w", l2), ("e3", "u", "w", l3)],
        )
        .unwrap())
    }

    fn peace() -> Arc<MetricGraph> {
        arc(MetricGraph::from_tuples(
            &["a", "b", "c", "o"],
            &[
                ("ab", "a", "b", 1),
                ("bc", "b", "c", 1),
                ("ca", "c", "a", 1),
                ("oa", "o", "a", 1),
                ("ob", "o", "b", 1),
                ("oc", "o", "c", 1),
            ],
        )
        .unwrap())
    }

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn pt(e: &str, num: i64, den: i64) -> Point {
        Point::Interior(EdgeId::new(e), Rational::new(num, den).unwrap())
    }

    #[test]
    fn theta_basis_cycles() {
        let g = theta_lengths(1, 1, 1);
        let tree = BTreeSet::from([EdgeId::new("e2")]);
        let basis = homology_basis(&g, &tree).unwrap();
        assert_eq!(basis.genus(), 2);
        // Cycle for e1 is e1 - e2; for e3 it is e3 - e2.
        assert_eq!(basis.cycles()[0].coefficient(&EdgeId::new("e1")), 1);
        assert_eq!(basis.cycles()[0].coefficient(&EdgeId::new("e2")), -1);
        assert_eq!(basis.cycles()[1].coefficient(&EdgeId::new("e3")), 1);
        assert_eq!(basis.cycles()[1].coefficient(&EdgeId::new("e2")), -1);
    }

    #[test]
    fn theta_period_matrix_reproduces_known_lattice() {
        let (l1, l2, l3) = (2, 3, 5);
        let g = theta_lengths(l1, l2, l3);
        let tree = BTreeSet::from([EdgeId::new("e2")]);
        let mut basis = homology_basis(&g, &tree).unwrap();
        let m = basis.period().clone();
        assert_eq!(*m.entry(0, 0), q(l1 + l2));
        assert_eq!(*m.entry(1, 1), q(l2 + l3));
        assert_eq!(*m.entry(0, 1), q(l2));
        assert!(m.is_symmetric());
        assert!(m.is_positive_definite());
        // Reversing the second cycle gives the consecutive-edge convention
        // [[l1+l2, -l2], [-l2, l2+l3]]; the lattice is unchanged.
        basis.flip_cycle(1);
        let m2 = basis.period().clone();
        assert_eq!(*m2.entry(0, 1), q(-l2));
        assert_eq!(*m2.entry(1, 0), q(-l2));
        assert_eq!(*m2.entry(0, 0), q(l1 + l2));
        assert_eq!(*m2.entry(1, 1), q(l2 + l3));
        assert_eq!(m.det(), m2.det());
        assert_eq!(m.det(), q(l1 * l2 + l1 * l3 + l2 * l3));
    }

    #[test]
    fn peace_sign_period_matrix() {
        // Unit lengths; cycle i uses rim edge i and two spokes, sharing one
        // spoke with each other cycle: diagonal 3, off-diagonal sign pattern
        // with absolute value 1.
        let g = peace();
        let trees = g.spanning_trees().unwrap();
        let tree = trees
            .iter()
            .find(|t| {
                t.contains(&EdgeId::new("oa"))
                    && t.contains(&EdgeId::new("ob"))
                    && t.contains(&EdgeId::new("oc"))
            })
            .unwrap();
        let basis = homology_basis(&g, tree).unwrap();
        let m = basis.period();
        for i in 0..3 {
            assert_eq!(*m.entry(i, i), q(3));
            for j in 0..3 {
                if i != j {
                    assert_eq!(m.entry(i, j).abs(), Rational::one());
                }
            }
        }
        assert!(m.is_positive_definite());
    }

    #[test]
    fn single_loop_period() {
        let g = arc(MetricGraph::from_tuples(&["v"], &[("loop", "v", "v", 7)]).unwrap());
        let basis = homology_basis(&g, &BTreeSet::new()).unwrap();
        assert_eq!(*basis.period().entry(0, 0), q(7));
    }

    #[test]
    fn abel_jacobi_base_multiples_vanish() {
        let g = theta_lengths(1, 1, 1);
        let tree = BTreeSet::from([EdgeId::new("e2")]);
        let basis = homology_basis(&g, &tree).unwrap();
        let base = Point::vertex("u");
        let d = Divisor::single(&g, base.clone(), 3).unwrap();
        let aj = abel_jacobi(&d, &base, &basis).unwrap();
        let zero = TorusPoint::new(vec![Rational::zero(); 2], basis.period().clone()).unwrap();
        assert!(torus_eq(&aj, &zero).unwrap());
    }

    #[test]
    fn theta_path_ambiguity_is_a_lattice_shift() {
        // Coordinates of x1 + x2 via tree paths; an alternative route for x2
        // differs by a lattice row, so the torus points agree.
        let (l1, l2, l3) = (2, 3, 5);
        let g = theta_lengths(l1, l2, l3);
        let tree = BTreeSet::from([EdgeId::new("e2")]);
        let basis = homology_basis(&g, &tree).unwrap();
        let t1 = Rational::new(1, 2).unwrap();
        let t2 = Rational::new(3, 2).unwrap();
        let d = Divisor::new(
            &g,
            [
                (Point::Interior(EdgeId::new("e1"), t1.clone()), 1),
                (Point::Interior(EdgeId::new("e2"), t2.clone()), 1),
            ],
        )
        .unwrap();
        let aj = abel_jacobi(&d, &Point::vertex("u"), &basis).unwrap();
        // Tree-path coordinates: x1 contributes t1 * (+1, 0); x2 sits on e2
        // which carries coefficient -1 in both cycles.
        assert_eq!(aj.coords()[0], &t1 - &t2);
        assert_eq!(aj.coords()[1], -t2.clone());
        // Shifting by the first lattice row leaves the torus point unchanged.
        let row0 = vec![q(l1 + l2), q(l2)];
        let shifted = TorusPoint::new(
            vec![&aj.coords()[0] + &row0[0], &aj.coords()[1] + &row0[1]],
            basis.period().clone(),
        )
        .unwrap();
        assert!(torus_eq(&aj, &shifted).unwrap());
        // A half-lattice shift is a genuinely different point.
        let half = TorusPoint::new(
            vec![
                &aj.coords()[0] + &Rational::new(l1 + l2, 2).unwrap(),
                &aj.coords()[1] + &Rational::new(l2, 2).unwrap(),
            ],
            basis.period().clone(),
        )
        .unwrap();
        assert!(!torus_eq(&aj, &half).unwrap());
    }

    #[test]
    fn lattice_mismatch_is_rejected() {
        let g1 = theta_lengths(1, 1, 1);
        let g2 = theta_lengths(1, 2, 1);
        let b1 = homology_basis(&g1, &BTreeSet::from([EdgeId::new("e2")])).unwrap();
        let b2 = homology_basis(&g2, &BTreeSet::from([EdgeId::new("e2")])).unwrap();
        let x = TorusPoint::new(vec![q(0), q(0)], b1.period().clone()).unwrap();
        let y = TorusPoint::new(vec![q(0), q(0)], b2.period().clone()).unwrap();
        assert!(matches!(torus_eq(&x, &y), Err(Error::LatticeMismatch)));
    }

    #[test]
    fn kirchhoff_identity_on_fixtures() {
        for g in [
            theta_lengths(2, 3, 5),
            peace(),
            arc(MetricGraph::from_tuples(&["v"], &[("loop", "v", "v", 7)]).unwrap()),
            arc(MetricGraph::from_tuples(
                &["u", "w"],
                &[("br", "u", "w", 1), ("l1", "u", "u", 2), ("l2", "w", "w", 3)],
            )
            .unwrap()),
        ] {
            let (det, tree_sum) = kirchhoff_check(&g).unwrap();
            assert_eq!(det, tree_sum);
        }
    }

    #[test]
    fn kirchhoff_det_is_tree_independent() {
        let g = theta_lengths(2, 3, 5);
        let dets: BTreeSet<String> = g
            .spanning_trees()
            .unwrap()
            .iter()
            .map(|t| homology_basis(&g, t).unwrap().period().det().to_string())
            .collect();
        assert_eq!(dets.len(), 1);
    }

    #[test]
    fn wedge_sum_determinant_factorizes() {
        // Glue a triangle and a loop at a shared vertex: the Jacobian
        // determinant is the product of the two factors.
        let wedge = arc(MetricGraph::from_tuples(
            &["a", "b", "c"],
            &[
                ("ab", "a", "b", 2),
                ("bc", "b", "c", 3),
                ("ca", "c", "a", 5),
                ("loop", "a", "a", 7),
            ],
        )
        .unwrap());
        let (det, _) = kirchhoff_check(&wedge).unwrap();
        let triangle = arc(MetricGraph::from_tuples(
            &["a", "b", "c"],
            &[("ab", "a", "b", 2), ("bc", "b", "c", 3), ("ca", "c", "a", 5)],
        )
        .unwrap());
        let (det1, _) = kirchhoff_check(&triangle).unwrap();
        assert_eq!(det, &det1 * &q(7));
    }

    #[test]
    fn abel_jacobi_additive_and_respects_equivalence() {
        let g = theta_lengths(1, 1, 1);
        let tree = BTreeSet::from([EdgeId::new("e2")]);
        let basis = homology_basis(&g, &tree).unwrap();
        let base = Point::vertex("u");
        let d1 = Divisor::new(&g, [(pt("e1", 1, 2), 1)]).unwrap();
        let d2 = Divisor::new(&g, [(pt("e3", 1, 3), 2)]).unwrap();
        let sum = d1.checked_add(&d2).unwrap();
        let a1 = abel_jacobi(&d1, &base, &basis).unwrap();
        let a2 = abel_jacobi(&d2, &base, &basis).unwrap();
        let asum = abel_jacobi(&sum, &base, &basis).unwrap();
        assert!(torus_eq(&asum, &a1.checked_add(&a2).unwrap()).unwrap());

        // Equivalent divisors share a torus point; inequivalent ones differ.
        let e = Divisor::new(&g, [(pt("e1", 1, 2), 1), (pt("e2", 1, 2), 1)]).unwrap();
        let f = e
            .checked_add(&crate::divisor::div_of(
                &crate::divisor::PLFunction::distance_cone(
                    &g,
                    &pt("e3", 1, 2),
                    &Rational::new(1, 4).unwrap(),
                    1,
                )
                .unwrap(),
            ))
            .unwrap();
        assert!(is_equivalent(&e, &f).unwrap());
        let ae = abel_jacobi(&e, &base, &basis).unwrap();
        let af = abel_jacobi(&f, &base, &basis).unwrap();
        assert!(torus_eq(&ae, &af).unwrap());
        let other = Divisor::new(&g, [(pt("e1", 1, 3), 1), (pt("e2", 1, 2), 1)]).unwrap();
        assert!(!is_equivalent(&e, &other).unwrap());
        let ao = abel_jacobi(&other, &base, &basis).unwrap();
        assert!(!torus_eq(&ae, &ao).unwrap());
    }

    #[test]
    fn rigidity_criterion() {
        let g = theta_lengths(1, 1, 1);
        // Chips on two distinct edges: rigid.
        let d = Divisor::new(&g, [(pt("e1", 1, 2), 1), (pt("e2", 1, 2), 1)]).unwrap();
        assert!(is_rigid(&d).unwrap());
        // Two chips on the same edge: not rigid.
        let d = Divisor::new(&g, [(pt("e1", 1, 3), 1), (pt("e1", 2, 3), 1)]).unwrap();
        assert!(!is_rigid(&d).unwrap());
        // A doubled chip splits.
        let d = Divisor::single(&g, pt("e1", 1, 2), 2).unwrap();
        assert!(!is_rigid(&d).unwrap());
        // Support on a vertex is rejected.
        let d = Divisor::single(&g, Point::vertex("u"), 1).unwrap();
        assert!(matches!(is_rigid(&d), Err(Error::UnsupportedSupport)));
        // One chip per non-tree edge (complement a spanning tree): rigid.
        let d = Divisor::new(&g, [(pt("e1", 1, 2), 1), (pt("e3", 1, 2), 1)]).unwrap();
        assert!(is_rigid(&d).unwrap());
        let _ = VertexId::new("u");
    }

    #[test]
    fn reduced_coords_land_in_fundamental_domain() {
        let g = theta_lengths(2, 3, 5);
        let basis = homology_basis(&g, &BTreeSet::from([EdgeId::new("e2")])).unwrap();
        let x = TorusPoint::new(vec![q(100), q(-37)], basis.period().clone()).unwrap();
        let r = x.reduced_coords();
        let y = TorusPoint::new(r, basis.period().clone()).unwrap();
        assert!(torus_eq(&x, &y).unwrap());
    }
}
