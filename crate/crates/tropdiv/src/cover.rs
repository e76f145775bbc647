//! Free double covers of metric graphs.
//!
//! Every free double cover is built from a spanning tree and one flag per
//! non-tree edge: the total graph is two disjoint copies of the tree, and
//! each non-tree edge lifts either "straight" (joining copies of like sign)
//! or "swapped" (crossing them). Ids in the total graph are the base ids
//! suffixed with `+` or `-`. The involution exchanges the signs and the
//! projection drops them; both preserve offsets edge-wise.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::divisor::{ensure_same_graph, Divisor};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetricGraph, Point, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lift {
    Straight,
    Swapped,
}

/// A spanning tree plus one lift flag per non-tree edge.
#[derive(Clone, Debug)]
pub struct SignAssignment {
    pub tree: BTreeSet<EdgeId>,
    pub flags: BTreeMap<EdgeId, Lift>,
}

impl SignAssignment {
    pub fn all_straight(graph: &MetricGraph, tree: &BTreeSet<EdgeId>) -> Result<SignAssignment> {
        graph.check_spanning_tree(tree)?;
        let flags = graph
            .edge_ids()
            .filter(|e| !tree.contains(*e))
            .map(|e| (e.clone(), Lift::Straight))
            .collect();
        Ok(SignAssignment { tree: tree.clone(), flags })
    }

    pub fn with_swapped(mut self, edges: &[&str]) -> SignAssignment {
        for e in edges {
            self.flags.insert(EdgeId::new(*e), Lift::Swapped);
        }
        self
    }
}

/// A free double cover: the total graph, the projection, and the involution.
#[derive(Clone, Debug)]
pub struct DoubleCover {
    base: Arc<MetricGraph>,
    total: Arc<MetricGraph>,
    vertex_map: BTreeMap<VertexId, VertexId>,
    /// total edge -> (base edge, true when the lift keeps the stored
    /// orientation of the base edge)
    edge_map: BTreeMap<EdgeId, (EdgeId, bool)>,
    vertex_involution: BTreeMap<VertexId, VertexId>,
    /// total edge -> (partner edge, true when the involution matches tails)
    edge_involution: BTreeMap<EdgeId, (EdgeId, bool)>,
    provenance: Option<SignAssignment>,
}

fn plus(v: &str) -> String {
    format!("{v}+")
}

fn minus(v: &str) -> String {
    format!("{v}-")
}

/// Materializes the double cover of `graph` given by a sign assignment.
pub fn build_cover(graph: &Arc<MetricGraph>, signs: &SignAssignment) -> Result<DoubleCover> {
    graph.check_spanning_tree(&signs.tree)?;
    let nontree: BTreeSet<EdgeId> = graph
        .edge_ids()
        .filter(|e| !signs.tree.contains(*e))
        .cloned()
        .collect();
    if signs.flags.keys().cloned().collect::<BTreeSet<_>>() != nontree {
        return Err(Error::InvalidInput(
            "sign assignment must flag exactly the non-tree edges".into(),
        ));
    }

    let mut vertices = Vec::new();
    let mut vertex_map = BTreeMap::new();
    let mut vertex_involution = BTreeMap::new();
    for v in graph.vertices() {
        let vp = VertexId::new(plus(v.as_str()));
        let vm = VertexId::new(minus(v.as_str()));
        vertex_map.insert(vp.clone(), v.clone());
        vertex_map.insert(vm.clone(), v.clone());
        vertex_involution.insert(vp.clone(), vm.clone());
        vertex_involution.insert(vm.clone(), vp.clone());
        vertices.push(vp);
        vertices.push(vm);
    }

    let mut edges = Vec::new();
    let mut edge_map = BTreeMap::new();
    let mut edge_involution = BTreeMap::new();
    for (id, data) in graph.edges() {
        let swapped = signs.flags.get(id) == Some(&Lift::Swapped);
        let (u, w) = (&data.ends.0, &data.ends.1);
        let ep = EdgeId::new(plus(id.as_str()));
        let em = EdgeId::new(minus(id.as_str()));
        let (head_p, head_m) = if swapped {
            (minus(w.as_str()), plus(w.as_str()))
        } else {
            (plus(w.as_str()), minus(w.as_str()))
        };
        edges.push((
            ep.clone(),
            VertexId::new(plus(u.as_str())),
            VertexId::new(head_p),
            data.length.clone(),
        ));
        edges.push((
            em.clone(),
            VertexId::new(minus(u.as_str())),
            VertexId::new(head_m),
            data.length.clone(),
        ));
        edge_map.insert(ep.clone(), (id.clone(), true));
        edge_map.insert(em.clone(), (id.clone(), true));
        edge_involution.insert(ep.clone(), (em.clone(), true));
        edge_involution.insert(em, (ep, true));
    }

    let total = Arc::new(MetricGraph::new(vertices, edges)?);
    let cover = DoubleCover {
        base: graph.clone(),
        total,
        vertex_map,
        edge_map,
        vertex_involution,
        edge_involution,
        provenance: Some(signs.clone()),
    };
    cover.validate()?;
    Ok(cover)
}

/// All `2^g` double covers for a spanning tree, in lexicographic flag order
/// over the sorted non-tree edges (straight before swapped, so the
/// disconnected two-copy cover comes first).
pub fn enumerate_covers(
    graph: &Arc<MetricGraph>,
    tree: &BTreeSet<EdgeId>,
) -> Result<Vec<DoubleCover>> {
    graph.check_spanning_tree(tree)?;
    let nontree: Vec<EdgeId> = graph
        .edge_ids()
        .filter(|e| !tree.contains(*e))
        .cloned()
        .collect();
    let g = nontree.len();
    let mut out = Vec::with_capacity(1 << g);
    for mask in 0u64..(1 << g) {
        let flags: BTreeMap<EdgeId, Lift> = nontree
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let lift = if mask & (1 << (g - 1 - i)) != 0 { Lift::Swapped } else { Lift::Straight };
                (e.clone(), lift)
            })
            .collect();
        out.push(build_cover(graph, &SignAssignment { tree: tree.clone(), flags })?);
    }
    Ok(out)
}

impl DoubleCover {
    /// Assembles a cover from explicit maps (as read from a cover file) and
    /// checks every invariant.
    pub fn from_parts(
        base: &Arc<MetricGraph>,
        total: &Arc<MetricGraph>,
        vertex_map: BTreeMap<VertexId, VertexId>,
        edge_map_plain: BTreeMap<EdgeId, EdgeId>,
        vertex_involution: BTreeMap<VertexId, VertexId>,
        edge_involution_plain: BTreeMap<EdgeId, EdgeId>,
    ) -> Result<DoubleCover> {
        let mut edge_map = BTreeMap::new();
        for (te, be) in &edge_map_plain {
            let td = total.edge(te)?;
            let bd = base.edge(be)?;
            let tail = vertex_map
                .get(&td.ends.0)
                .ok_or_else(|| Error::InvariantViolation(format!("unmapped vertex {}", td.ends.0)))?;
            let head = vertex_map
                .get(&td.ends.1)
                .ok_or_else(|| Error::InvariantViolation(format!("unmapped vertex {}", td.ends.1)))?;
            let oriented = if (tail, head) == (&bd.ends.0, &bd.ends.1) {
                true
            } else if (tail, head) == (&bd.ends.1, &bd.ends.0) && bd.ends.0 != bd.ends.1 {
                false
            } else if bd.ends.0 == bd.ends.1 && tail == &bd.ends.0 && head == &bd.ends.0 {
                // Loop over loop: offsets taken orientation-preserving.
                true
            } else {
                return Err(Error::InvariantViolation(format!(
                    "edge {te} does not project onto the endpoints of {be}"
                )));
            };
            edge_map.insert(te.clone(), (be.clone(), oriented));
        }
        let mut edge_involution = BTreeMap::new();
        for (te, pe) in &edge_involution_plain {
            let td = total.edge(te)?;
            let pd = total.edge(pe)?;
            let itail = vertex_involution
                .get(&td.ends.0)
                .ok_or_else(|| Error::InvariantViolation(format!("unmapped vertex {}", td.ends.0)))?;
            let oriented = if itail == &pd.ends.0 {
                true
            } else if itail == &pd.ends.1 {
                false
            } else {
                return Err(Error::InvariantViolation(format!(
                    "involution of {te} does not match the endpoints of {pe}"
                )));
            };
            edge_involution.insert(te.clone(), (pe.clone(), oriented));
        }
        let cover = DoubleCover {
            base: base.clone(),
            total: total.clone(),
            vertex_map,
            edge_map,
            vertex_involution,
            edge_involution,
            provenance: None,
        };
        cover.validate()?;
        Ok(cover)
    }

    /// Checks the free-double-cover invariants: two preimages everywhere,
    /// length-preserving projection, and a fixed-point-free involution of
    /// order two commuting with the projection.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvariantViolation(msg));
        // Projection: every total vertex/edge mapped, every base item covered
        // exactly twice.
        let mut vertex_fibers: BTreeMap<&VertexId, usize> = BTreeMap::new();
        for v in self.total.vertices() {
            let Some(b) = self.vertex_map.get(v) else {
                return fail(format!("vertex {v} has no projection"));
            };
            if !self.base.has_vertex(b) {
                return fail(format!("vertex {v} projects to unknown {b}"));
            }
            *vertex_fibers.entry(b).or_insert(0) += 1;
        }
        for b in self.base.vertices() {
            if vertex_fibers.get(b) != Some(&2) {
                return fail(format!("vertex {b} must have exactly 2 preimages"));
            }
        }
        let mut edge_fibers: BTreeMap<&EdgeId, usize> = BTreeMap::new();
        for (id, data) in self.total.edges() {
            let Some((b, oriented)) = self.edge_map.get(id) else {
                return fail(format!("edge {id} has no projection"));
            };
            let bd = self.base.edge(b)?;
            if bd.length != data.length {
                return fail(format!("edge {id} changes length under projection"));
            }
            let (t, h) = (&self.vertex_map[&data.ends.0], &self.vertex_map[&data.ends.1]);
            let ok = if *oriented {
                (t, h) == (&bd.ends.0, &bd.ends.1)
            } else {
                (t, h) == (&bd.ends.1, &bd.ends.0)
            };
            if !ok {
                return fail(format!("edge {id} endpoints do not commute with projection"));
            }
            *edge_fibers.entry(b).or_insert(0) += 1;
        }
        for b in self.base.edge_ids() {
            if edge_fibers.get(b) != Some(&2) {
                return fail(format!("edge {b} must have exactly 2 preimage edges"));
            }
        }
        // Involution: order two, free, commutes with the projection, and is
        // an isometry.
        for v in self.total.vertices() {
            let Some(iv) = self.vertex_involution.get(v) else {
                return fail(format!("vertex {v} missing from the involution"));
            };
            if iv == v {
                return fail(format!("involution fixes vertex {v}"));
            }
            if self.vertex_involution.get(iv) != Some(v) {
                return fail(format!("involution is not an order-2 map at {v}"));
            }
            if self.vertex_map[iv] != self.vertex_map[v] {
                return fail(format!("involution does not preserve the fibre of {v}"));
            }
        }
        for (id, data) in self.total.edges() {
            let Some((pe, oriented)) = self.edge_involution.get(id) else {
                return fail(format!("edge {id} missing from the involution"));
            };
            if pe == id {
                return fail(format!("involution fixes edge {id}"));
            }
            let pd = self.total.edge(pe)?;
            if pd.length != data.length {
                return fail(format!("involution changes the length of {id}"));
            }
            match self.edge_involution.get(pe) {
                Some((back, o2)) if back == id && o2 == oriented => {}
                _ => return fail(format!("involution is not an order-2 map at edge {id}")),
            }
            if self.edge_map[pe].0 != self.edge_map[id].0 {
                return fail(format!("involution does not preserve the fibre of edge {id}"));
            }
            let (it, ih) = (
                &self.vertex_involution[&data.ends.0],
                &self.vertex_involution[&data.ends.1],
            );
            let ok = if *oriented {
                (it, ih) == (&pd.ends.0, &pd.ends.1)
            } else {
                (it, ih) == (&pd.ends.1, &pd.ends.0)
            };
            if !ok {
                return fail(format!("involution is not a graph map at edge {id}"));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<MetricGraph> {
        &self.base
    }

    pub fn total(&self) -> &Arc<MetricGraph> {
        &self.total
    }

    pub fn sign_assignment(&self) -> Option<&SignAssignment> {
        self.provenance.as_ref()
    }

    pub fn is_connected(&self) -> bool {
        self.total.is_connected()
    }

    pub fn vertex_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_map
    }

    pub fn edge_map_plain(&self) -> BTreeMap<EdgeId, EdgeId> {
        self.edge_map.iter().map(|(t, (b, _))| (t.clone(), b.clone())).collect()
    }

    pub fn vertex_involution(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_involution
    }

    pub fn edge_involution_plain(&self) -> BTreeMap<EdgeId, EdgeId> {
        self.edge_involution.iter().map(|(t, (p, _))| (t.clone(), p.clone())).collect()
    }

    /// Projection of a point of the total graph.
    pub fn project_point(&self, p: &Point) -> Result<Point> {
        match p {
            Point::Vertex(v) => {
                let b = self
                    .vertex_map
                    .get(v)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown cover vertex {v}")))?;
                Ok(Point::Vertex(b.clone()))
            }
            Point::Interior(e, t) => {
                let (b, oriented) = self
                    .edge_map
                    .get(e)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown cover edge {e}")))?;
                let len = self.base.length(b)?;
                let off = if *oriented { t.clone() } else { len - t };
                Point::on_edge(&self.base, b, off)
            }
        }
    }

    /// Image of a point of the total graph under the involution.
    pub fn involute_point(&self, p: &Point) -> Result<Point> {
        match p {
            Point::Vertex(v) => {
                let iv = self
                    .vertex_involution
                    .get(v)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown cover vertex {v}")))?;
                Ok(Point::Vertex(iv.clone()))
            }
            Point::Interior(e, t) => {
                let (pe, oriented) = self
                    .edge_involution
                    .get(e)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown cover edge {e}")))?;
                let len = self.total.length(pe)?;
                let off = if *oriented { t.clone() } else { len - t };
                Point::on_edge(&self.total, pe, off)
            }
        }
    }

    /// The two lifts of a base edge as (total edge, keeps orientation).
    pub fn edge_lifts(&self, base_edge: &EdgeId) -> Vec<(EdgeId, bool)> {
        let mut lifts: Vec<(EdgeId, bool)> = self
            .edge_map
            .iter()
            .filter(|(_, (b, _))| b == base_edge)
            .map(|(t, (_, o))| (t.clone(), *o))
            .collect();
        lifts.sort();
        lifts
    }

    /// The two preimages of a base point.
    pub fn point_lifts(&self, p: &Point) -> Result<(Point, Point)> {
        match p {
            Point::Vertex(v) => {
                let mut ups: Vec<VertexId> = self
                    .vertex_map
                    .iter()
                    .filter(|(_, b)| *b == v)
                    .map(|(t, _)| t.clone())
                    .collect();
                ups.sort();
                if ups.len() != 2 {
                    return Err(Error::InvalidInput(format!("unknown base vertex {v}")));
                }
                Ok((Point::Vertex(ups[0].clone()), Point::Vertex(ups[1].clone())))
            }
            Point::Interior(e, t) => {
                let lifts = self.edge_lifts(e);
                if lifts.len() != 2 {
                    return Err(Error::InvalidInput(format!("unknown base edge {e}")));
                }
                let len = self.base.length(e)?;
                let mk = |(le, oriented): &(EdgeId, bool)| {
                    let off = if *oriented { t.clone() } else { len - t };
                    Point::on_edge(&self.total, le, off)
                };
                Ok((mk(&lifts[0])?, mk(&lifts[1])?))
            }
        }
    }
}

/// Genus of the total graph; the all-straight cover is disconnected and has
/// no well-defined connected genus.
pub fn cover_genus(cover: &DoubleCover) -> Result<i64> {
    if !cover.is_connected() {
        return Err(Error::DisconnectedCover);
    }
    Ok(cover.total().betti1())
}

/// Pushforward of a divisor on the total graph along the projection.
pub fn norm(cover: &DoubleCover, d: &Divisor) -> Result<Divisor> {
    ensure_same_graph(d.graph(), cover.total())?;
    d.map_points(cover.base(), |p| cover.project_point(p).expect("validated point"))
}

/// Pointwise transport of a divisor by the involution.
pub fn involute(cover: &DoubleCover, d: &Divisor) -> Result<Divisor> {
    ensure_same_graph(d.graph(), cover.total())?;
    d.map_points(cover.total(), |p| cover.involute_point(p).expect("validated point"))
}

/// Pullback of a base divisor: each chip lands on both preimages.
pub fn pullback(cover: &DoubleCover, d: &Divisor) -> Result<Divisor> {
    ensure_same_graph(d.graph(), cover.base())?;
    let mut out = Divisor::zero(cover.total());
    for (p, c) in d.entries() {
        let (a, b) = cover.point_lifts(p)?;
        out.add_chips(a, c)?;
        out.add_chips(b, c)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn arc(g: MetricGraph) -> Arc<MetricGraph> {
        Arc::new(g)
    }

    fn dumbbell() -> Arc<MetricGraph> {
        arc(MetricGraph::from_tuples(
            &["u", "w"],
            &[("br", "u", "w", 1), ("l1", "u", "u", 2), ("l2", "w", "w", 2)],
        )
        .unwrap())
    }

    fn theta() -> Arc<MetricGraph> {
        arc(MetricGraph::from_tuples(
            &["u", "w"],
            &[("e1", "u", "w", 1), ("e2", "u", "w", 1), ("e3", "u", "w", 1)],
        )
        .unwrap())
    }

    fn dumbbell_tree() -> BTreeSet<EdgeId> {
        BTreeSet::from([EdgeId::new("br")])
    }

    fn pt(e: &str, num: i64, den: i64) -> Point {
        Point::Interior(EdgeId::new(e), Rational::new(num, den).unwrap())
    }

    #[test]
    fn all_straight_cover_is_two_copies() {
        let g = dumbbell();
        let signs = SignAssignment::all_straight(&g, &dumbbell_tree()).unwrap();
        let c = build_cover(&g, &signs).unwrap();
        assert!(!c.is_connected());
        assert_eq!(c.total().components().len(), 2);
        assert!(matches!(cover_genus(&c), Err(Error::DisconnectedCover)));
    }

    #[test]
    fn swapped_dumbbell_covers_have_genus_three() {
        let g = dumbbell();
        let both = SignAssignment::all_straight(&g, &dumbbell_tree())
            .unwrap()
            .with_swapped(&["l1", "l2"]);
        let c = build_cover(&g, &both).unwrap();
        assert!(c.is_connected());
        assert_eq!(cover_genus(&c).unwrap(), 3);
        // One loop swapped, one straight: still connected of genus 3.
        let one = SignAssignment::all_straight(&g, &dumbbell_tree())
            .unwrap()
            .with_swapped(&["l1"]);
        let c = build_cover(&g, &one).unwrap();
        assert_eq!(cover_genus(&c).unwrap(), 3);
    }

    #[test]
    fn enumerate_covers_counts() {
        let g = theta();
        let tree = BTreeSet::from([EdgeId::new("e2")]);
        let covers = enumerate_covers(&g, &tree).unwrap();
        assert_eq!(covers.len(), 4);
        let disconnected: Vec<bool> = covers.iter().map(|c| !c.is_connected()).collect();
        assert_eq!(disconnected.iter().filter(|&&b| b).count(), 1);
        assert!(disconnected[0], "the all-straight cover comes first");
        for c in covers.iter().filter(|c| c.is_connected()) {
            assert_eq!(cover_genus(c).unwrap(), 2 * g.betti1() - 1);
        }
        // A tree base admits exactly the disconnected cover.
        let seg = arc(MetricGraph::from_tuples(&["a", "b"], &[("e", "a", "b", 1)]).unwrap());
        let covers = enumerate_covers(&seg, &BTreeSet::from([EdgeId::new("e")])).unwrap();
        assert_eq!(covers.len(), 1);
        assert!(!covers[0].is_connected());
    }

    #[test]
    fn cycle_self_cover() {
        let g = arc(MetricGraph::from_tuples(&["v"], &[("loop", "v", "v", 1)]).unwrap());
        let covers = enumerate_covers(&g, &BTreeSet::new()).unwrap();
        assert_eq!(covers.len(), 2);
        let c = &covers[1];
        assert!(c.is_connected());
        assert_eq!(cover_genus(c).unwrap(), 1);
        assert_eq!(c.total().total_length(), Rational::from_int(2));
    }

    #[test]
    fn involution_is_free_and_involutive() {
        let g = dumbbell();
        let signs = SignAssignment::all_straight(&g, &dumbbell_tree())
            .unwrap()
            .with_swapped(&["l1", "l2"]);
        let c = build_cover(&g, &signs).unwrap();
        for v in c.total().vertices() {
            let p = Point::Vertex(v.clone());
            let ip = c.involute_point(&p).unwrap();
            assert_ne!(p, ip);
            assert_eq!(c.involute_point(&ip).unwrap(), p);
            assert_eq!(c.project_point(&p).unwrap(), c.project_point(&ip).unwrap());
        }
        // Interior points too.
        let p = pt("l1+", 1, 2);
        let ip = c.involute_point(&p).unwrap();
        assert_ne!(p, ip);
        assert_eq!(c.involute_point(&ip).unwrap(), p);
        assert_eq!(c.project_point(&p).unwrap(), c.project_point(&ip).unwrap());
    }

    #[test]
    fn norm_and_pullback() {
        let g = dumbbell();
        let signs = SignAssignment::all_straight(&g, &dumbbell_tree())
            .unwrap()
            .with_swapped(&["l1", "l2"]);
        let c = build_cover(&g, &signs).unwrap();
        // norm(p - ip) = 0.
        let p = pt("br+", 1, 3);
        let ip = c.involute_point(&p).unwrap();
        let d = Divisor::new(c.total(), [(p.clone(), 1), (ip.clone(), -1)]).unwrap();
        assert!(norm(&c, &d).unwrap().is_zero());
        // norm(pullback(D)) = 2D.
        let base_d = Divisor::new(&g, [(pt("l1", 1, 2), 1), (Point::vertex("w"), 2)]).unwrap();
        let up = pullback(&c, &base_d).unwrap();
        assert_eq!(up.degree(), 2 * base_d.degree());
        assert_eq!(norm(&c, &up).unwrap(), base_d.scale(2));
        // norm(involute(D)) = norm(D).
        let dd = Divisor::new(c.total(), [(p, 2), (pt("l1+", 1, 2), 1)]).unwrap();
        assert_eq!(
            norm(&c, &involute(&c, &dd).unwrap()).unwrap(),
            norm(&c, &dd).unwrap()
        );
    }

    #[test]
    fn from_parts_round_trip_and_bad_involutions() {
        let g = theta();
        let tree = BTreeSet::from([EdgeId::new("e2")]);
        let signs = SignAssignment::all_straight(&g, &tree).unwrap().with_swapped(&["e1"]);
        let c = build_cover(&g, &signs).unwrap();
        let rebuilt = DoubleCover::from_parts(
            c.base(),
            c.total(),
            c.vertex_map().clone(),
            c.edge_map_plain(),
            c.vertex_involution().clone(),
            c.edge_involution_plain(),
        )
        .unwrap();
        assert_eq!(rebuilt.total().as_ref(), c.total().as_ref());
        // An involution with a fixed vertex is rejected.
        let mut bad = c.vertex_involution().clone();
        let v = VertexId::new("u+");
        bad.insert(v.clone(), v);
        assert!(matches!(
            DoubleCover::from_parts(
                c.base(),
                c.total(),
                c.vertex_map().clone(),
                c.edge_map_plain(),
                bad,
                c.edge_involution_plain(),
            ),
            Err(Error::InvariantViolation(_))
        ));
    }

    /// Contracting a base edge and its two lifts yields a free double cover
    /// of the contracted base.
    fn contract_cover(c: &DoubleCover, e: &EdgeId) -> DoubleCover {
        fn contract(g: &MetricGraph, es: &[EdgeId]) -> Arc<MetricGraph> {
            let mut merged: BTreeMap<VertexId, VertexId> = BTreeMap::new();
            let mut find = |merged: &BTreeMap<VertexId, VertexId>, mut v: VertexId| {
                while let Some(next) = merged.get(&v) {
                    v = next.clone();
                }
                v
            };
            for id in es {
                let data = g.edge(id).unwrap();
                let a = find(&merged, data.ends.0.clone());
                let b = find(&merged, data.ends.1.clone());
                if a != b {
                    let (keep, drop) = if a < b { (a, b) } else { (b, a) };
                    merged.insert(drop, keep);
                }
            }
            let vertices: BTreeSet<VertexId> = g
                .vertices()
                .map(|v| find(&merged, v.clone()))
                .collect();
            let edges: Vec<_> = g
                .edges()
                .filter(|(id, _)| !es.contains(id))
                .map(|(id, d)| {
                    (
                        id.clone(),
                        find(&merged, d.ends.0.clone()),
                        find(&merged, d.ends.1.clone()),
                        d.length.clone(),
                    )
                })
                .collect();
            Arc::new(MetricGraph::new(vertices, edges).unwrap())
        }
        let lifts: Vec<EdgeId> = c.edge_lifts(e).into_iter().map(|(l, _)| l).collect();
        let new_base = contract(c.base(), std::slice::from_ref(e));
        let new_total = contract(c.total(), &lifts);
        let keep_v = |v: &VertexId| new_total.has_vertex(v);
        let vmap: BTreeMap<VertexId, VertexId> = c
            .vertex_map()
            .iter()
            .filter(|(t, _)| keep_v(t))
            .map(|(t, b)| {
                let b = if new_base.has_vertex(b) {
                    b.clone()
                } else {
                    // The base endpoint merged away; project via the total.
                    let d = c.base().edge(e).unwrap();
                    if d.ends.0 < d.ends.1 { d.ends.0.clone() } else { d.ends.1.clone() }
                };
                (t.clone(), b)
            })
            .collect();
        let emap: BTreeMap<EdgeId, EdgeId> = c
            .edge_map_plain()
            .into_iter()
            .filter(|(t, _)| !lifts.contains(t))
            .collect();
        let vinv: BTreeMap<VertexId, VertexId> = c
            .vertex_involution()
            .iter()
            .filter(|(a, b)| keep_v(a) && keep_v(b))
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        let einv: BTreeMap<EdgeId, EdgeId> = c
            .edge_involution_plain()
            .into_iter()
            .filter(|(a, b)| !lifts.contains(a) && !lifts.contains(b))
            .collect();
        DoubleCover::from_parts(&new_base, &new_total, vmap, emap, vinv, einv).unwrap()
    }

    #[test]
    fn contraction_yields_a_free_double_cover() {
        // Contract the bridge of the dumbbell under the doubly-swapped cover:
        // the quotient is a free double cover of the two-loop wedge.
        let g = dumbbell();
        let signs = SignAssignment::all_straight(&g, &dumbbell_tree())
            .unwrap()
            .with_swapped(&["l1", "l2"]);
        let c = build_cover(&g, &signs).unwrap();
        let contracted = contract_cover(&c, &EdgeId::new("br"));
        assert_eq!(contracted.base().vertex_count(), 1);
        assert_eq!(contracted.base().betti1(), 2);
        assert_eq!(contracted.total().betti1(), 3);
        contracted.validate().unwrap();
    }
}
