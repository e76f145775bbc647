//! Metric multigraphs and their models.
//!
//! A metric graph is presented by a model: a set of vertices and a list of
//! edges with strictly positive rational lengths. Loops and parallel edges
//! are allowed. Points live either at vertices or in edge interiors at a
//! rational offset measured from the edge's stored tail (loops use the stored
//! orientation). Refining a model at interior points yields another model of
//! the same metric graph; `Subdivision` tracks the relabeling both ways.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl VertexId {
    pub fn new(s: impl Into<String>) -> Self {
        VertexId(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl EdgeId {
    pub fn new(s: impl Into<String>) -> Self {
        EdgeId(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeData {
    pub ends: (VertexId, VertexId),
    pub length: Rational,
}

/// A model of a metric graph: vertices plus edges with positive lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, EdgeData>,
}

impl MetricGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, VertexId, VertexId, Rational)>,
    ) -> Result<Self> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(Error::InvariantViolation("graph needs at least one vertex".into()));
        }
        let mut edge_map = BTreeMap::new();
        for (id, u, v, length) in edges {
            if !vertices.contains(&u) || !vertices.contains(&v) {
                return Err(Error::InvariantViolation(format!(
                    "edge {id} has an undeclared endpoint"
                )));
            }
            if !length.is_positive() {
                return Err(Error::InvariantViolation(format!(
                    "edge {id} must have positive length, got {length}"
                )));
            }
            if edge_map.insert(id.clone(), EdgeData { ends: (u, v), length }).is_some() {
                return Err(Error::InvariantViolation(format!("duplicate edge id {id}")));
            }
        }
        Ok(MetricGraph { vertices, edges: edge_map })
    }

    /// Convenience constructor from string ids and `i64` lengths.
    pub fn from_tuples(vertices: &[&str], edges: &[(&str, &str, &str, i64)]) -> Result<Self> {
        MetricGraph::new(
            vertices.iter().map(|v| VertexId::new(*v)),
            edges.iter().map(|(id, u, v, len)| {
                (EdgeId::new(*id), VertexId::new(*u), VertexId::new(*v), Rational::from_int(*len))
            }),
        )
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.keys()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &EdgeData)> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: &EdgeId) -> Result<&EdgeData> {
        self.edges
            .get(id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown edge {id}")))
    }

    pub fn length(&self, id: &EdgeId) -> Result<&Rational> {
        Ok(&self.edge(id)?.length)
    }

    pub fn is_loop(&self, id: &EdgeId) -> Result<bool> {
        let e = self.edge(id)?;
        Ok(e.ends.0 == e.ends.1)
    }

    /// Total length of all edges.
    pub fn total_length(&self) -> Rational {
        self.edges.values().map(|e| e.length.clone()).sum()
    }

    /// Number of edge-ends at `v`; loops count twice.
    pub fn valence(&self, v: &VertexId) -> usize {
        self.edges
            .values()
            .map(|e| (e.ends.0 == *v) as usize + (e.ends.1 == *v) as usize)
            .sum()
    }

    /// Lowest vertex id, used as the deterministic base point.
    pub fn canonical_vertex(&self) -> &VertexId {
        self.vertices.iter().next().expect("graph has a vertex")
    }

    /// Connected components as (vertices, edges), sorted by smallest vertex.
    pub fn components(&self) -> Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
        let ids: Vec<&VertexId> = self.vertices.iter().collect();
        let index: BTreeMap<&VertexId, usize> =
            ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut dsu = Dsu::new(ids.len());
        for e in self.edges.values() {
            dsu.union(index[&e.ends.0], index[&e.ends.1]);
        }
        let mut by_root: BTreeMap<usize, (BTreeSet<VertexId>, BTreeSet<EdgeId>)> = BTreeMap::new();
        for (i, v) in ids.iter().enumerate() {
            by_root.entry(dsu.find(i)).or_default().0.insert((*v).clone());
        }
        for (id, e) in &self.edges {
            by_root
                .entry(dsu.find(index[&e.ends.0]))
                .or_default()
                .1
                .insert(id.clone());
        }
        let mut comps: Vec<_> = by_root.into_values().collect();
        comps.sort_by(|a, b| a.0.iter().next().cmp(&b.0.iter().next()));
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// First Betti number `e - v + f`, where `f` counts connected components.
    pub fn betti1(&self) -> i64 {
        let f = self.components().len() as i64;
        self.edges.len() as i64 - self.vertices.len() as i64 + f
    }

    /// Genus of a possibly-disconnected graph as the sum of component genera
    /// minus the number of components plus one.
    pub fn genus_dec(&self) -> i64 {
        let comps = self.components();
        let k = comps.len() as i64;
        let total: i64 = comps
            .iter()
            .map(|(vs, es)| es.len() as i64 - vs.len() as i64 + 1)
            .sum();
        total - k + 1
    }

    /// All spanning trees as edge-id sets, in lexicographic order. Loops never
    /// appear in a tree.
    pub fn spanning_trees(&self) -> Result<Vec<BTreeSet<EdgeId>>> {
        if !self.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        let candidates: Vec<&EdgeId> = self
            .edges
            .iter()
            .filter(|(_, e)| e.ends.0 != e.ends.1)
            .map(|(id, _)| id)
            .collect();
        let need = self.vertices.len() - 1;
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        self.tree_search(&candidates, need, 0, &mut chosen, &mut out);
        Ok(out)
    }

    fn tree_search(
        &self,
        candidates: &[&EdgeId],
        need: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<BTreeSet<EdgeId>>,
    ) {
        if chosen.len() == need {
            let set: BTreeSet<EdgeId> = chosen.iter().map(|&i| candidates[i].clone()).collect();
            if self.is_spanning_forest(&set) {
                out.push(set);
            }
            return;
        }
        if candidates.len() - start < need - chosen.len() {
            return;
        }
        for i in start..candidates.len() {
            chosen.push(i);
            self.tree_search(candidates, need, i + 1, chosen, out);
            chosen.pop();
        }
    }

    fn is_spanning_forest(&self, edges: &BTreeSet<EdgeId>) -> bool {
        let ids: Vec<&VertexId> = self.vertices.iter().collect();
        let index: BTreeMap<&VertexId, usize> =
            ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut dsu = Dsu::new(ids.len());
        for id in edges {
            let e = &self.edges[id];
            if !dsu.union(index[&e.ends.0], index[&e.ends.1]) {
                return false;
            }
        }
        (0..ids.len()).all(|i| dsu.find(i) == dsu.find(0))
    }

    /// Checks the given edge set is a spanning tree of this graph.
    pub fn check_spanning_tree(&self, tree: &BTreeSet<EdgeId>) -> Result<()> {
        if tree.len() != self.vertices.len() - 1
            || !tree.iter().all(|e| self.edges.contains_key(e))
            || !self.is_spanning_forest(tree)
        {
            return Err(Error::NotASpanningTree);
        }
        Ok(())
    }

    /// Tree path from `from` to `to` as oriented edges `(id, forward)`,
    /// where `forward` means the edge is traversed from its stored tail.
    pub fn tree_path(
        &self,
        tree: &BTreeSet<EdgeId>,
        from: &VertexId,
        to: &VertexId,
    ) -> Vec<(EdgeId, bool)> {
        if from == to {
            return Vec::new();
        }
        // Depth-first search restricted to tree edges.
        let mut stack = vec![from.clone()];
        let mut prev: BTreeMap<VertexId, (VertexId, EdgeId, bool)> = BTreeMap::new();
        let mut seen: BTreeSet<VertexId> = [from.clone()].into();
        while let Some(v) = stack.pop() {
            if &v == to {
                break;
            }
            for id in tree {
                let e = &self.edges[id];
                let next = if e.ends.0 == v {
                    Some((e.ends.1.clone(), true))
                } else if e.ends.1 == v {
                    Some((e.ends.0.clone(), false))
                } else {
                    None
                };
                if let Some((w, fwd)) = next {
                    if seen.insert(w.clone()) {
                        prev.insert(w.clone(), (v.clone(), id.clone(), fwd));
                        stack.push(w);
                    }
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to.clone();
        while cur != *from {
            let (p, id, fwd) = prev
                .get(&cur)
                .expect("spanning tree connects all vertices")
                .clone();
            path.push((id, fwd));
            cur = p;
        }
        path.reverse();
        path
    }

    /// Multi-source shortest distances to every reachable vertex.
    pub fn distances(&self, sources: &BTreeMap<VertexId, Rational>) -> BTreeMap<VertexId, Rational> {
        let mut dist: BTreeMap<VertexId, Rational> = sources.clone();
        let mut done: BTreeSet<VertexId> = BTreeSet::new();
        loop {
            let next = dist
                .iter()
                .filter(|(v, _)| !done.contains(*v))
                .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
                .map(|(v, d)| (v.clone(), d.clone()));
            let Some((v, d)) = next else { break };
            done.insert(v.clone());
            for (id, e) in &self.edges {
                let _ = id;
                let other = if e.ends.0 == v {
                    Some(&e.ends.1)
                } else if e.ends.1 == v {
                    Some(&e.ends.0)
                } else {
                    None
                };
                if let Some(w) = other {
                    let alt = &d + &e.length;
                    let better = dist.get(w).map_or(true, |cur| alt < *cur);
                    if better {
                        dist.insert(w.clone(), alt);
                    }
                }
            }
        }
        dist
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// A location on the metric graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Point {
    Vertex(VertexId),
    /// Interior point of an edge, with `0 < offset < length` measured from
    /// the edge's stored tail.
    Interior(EdgeId, Rational),
}

impl Point {
    pub fn vertex(v: impl Into<String>) -> Point {
        Point::Vertex(VertexId::new(v))
    }

    /// Builds a point on `edge` at `offset`, normalizing the ends to vertices.
    pub fn on_edge(graph: &MetricGraph, edge: &EdgeId, offset: Rational) -> Result<Point> {
        let e = graph.edge(edge)?;
        if offset.is_negative() || offset > e.length {
            return Err(Error::InvalidInput(format!(
                "offset {offset} outside [0, {}] on edge {edge}",
                e.length
            )));
        }
        if offset.is_zero() {
            Ok(Point::Vertex(e.ends.0.clone()))
        } else if offset == e.length {
            Ok(Point::Vertex(e.ends.1.clone()))
        } else {
            Ok(Point::Interior(edge.clone(), offset))
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, Point::Vertex(_))
    }

    /// Checks the point refers to existing graph elements.
    pub fn validate(&self, graph: &MetricGraph) -> Result<()> {
        match self {
            Point::Vertex(v) => {
                if !graph.has_vertex(v) {
                    return Err(Error::InvalidInput(format!("unknown vertex {v}")));
                }
            }
            Point::Interior(e, t) => {
                let data = graph.edge(e)?;
                if !t.is_positive() || *t >= data.length {
                    return Err(Error::InvalidInput(format!(
                        "offset {t} not interior to edge {e}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(v) => write!(f, "{v}"),
            Point::Interior(e, t) => write!(f, "{e}:{t}"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A closed subset of the metric graph: whole vertices, whole edges, and
/// closed subintervals of edges (possibly degenerate). Stored normalized:
/// intervals are disjoint, never touching, and never a whole edge.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Subgraph {
    pub vertices: BTreeSet<VertexId>,
    pub whole_edges: BTreeSet<EdgeId>,
    pub intervals: BTreeMap<EdgeId, Vec<(Rational, Rational)>>,
}

impl Subgraph {
    pub fn whole_graph(graph: &MetricGraph) -> Subgraph {
        Subgraph {
            vertices: graph.vertices().cloned().collect(),
            whole_edges: graph.edge_ids().cloned().collect(),
            intervals: BTreeMap::new(),
        }
    }

    pub fn from_parts(
        graph: &MetricGraph,
        vertices: impl IntoIterator<Item = VertexId>,
        whole_edges: impl IntoIterator<Item = EdgeId>,
        intervals: impl IntoIterator<Item = (EdgeId, Rational, Rational)>,
    ) -> Result<Subgraph> {
        let mut sg = Subgraph {
            vertices: vertices.into_iter().collect(),
            whole_edges: whole_edges.into_iter().collect(),
            intervals: BTreeMap::new(),
        };
        for (e, a, b) in intervals {
            sg.intervals.entry(e).or_default().push((a, b));
        }
        sg.normalize(graph)?;
        Ok(sg)
    }

    pub fn single_point(graph: &MetricGraph, p: &Point) -> Result<Subgraph> {
        p.validate(graph)?;
        match p {
            Point::Vertex(v) => Subgraph::from_parts(graph, [v.clone()], [], []),
            Point::Interior(e, t) => {
                Subgraph::from_parts(graph, [], [], [(e.clone(), t.clone(), t.clone())])
            }
        }
    }

    /// Canonicalizes: clips interval ends to vertices, merges touching
    /// intervals, and promotes full intervals to whole edges.
    fn normalize(&mut self, graph: &MetricGraph) -> Result<()> {
        for v in &self.vertices {
            if !graph.has_vertex(v) {
                return Err(Error::InvalidInput(format!("unknown vertex {v}")));
            }
        }
        for e in &self.whole_edges {
            graph.edge(e)?;
        }
        let mut new_intervals: BTreeMap<EdgeId, Vec<(Rational, Rational)>> = BTreeMap::new();
        let intervals = std::mem::take(&mut self.intervals);
        for (e, mut ivs) in intervals {
            let data = graph.edge(&e)?;
            for (a, b) in &ivs {
                if a.is_negative() || b > &data.length || a > b {
                    return Err(Error::InvalidInput(format!(
                        "bad interval [{a}, {b}] on edge {e}"
                    )));
                }
            }
            if self.whole_edges.contains(&e) {
                continue;
            }
            ivs.sort();
            let mut merged: Vec<(Rational, Rational)> = Vec::new();
            for (a, b) in ivs {
                match merged.last_mut() {
                    Some((_, pb)) if a <= *pb => {
                        if b > *pb {
                            *pb = b;
                        }
                    }
                    _ => merged.push((a, b)),
                }
            }
            let mut kept = Vec::new();
            for (a, b) in merged {
                if a.is_zero() && b == data.length {
                    self.whole_edges.insert(e.clone());
                    kept.clear();
                    break;
                }
                if a.is_zero() {
                    self.vertices.insert(data.ends.0.clone());
                }
                if b == data.length {
                    self.vertices.insert(data.ends.1.clone());
                }
                kept.push((a, b));
            }
            if !kept.is_empty() {
                new_intervals.insert(e, kept);
            }
        }
        self.intervals = new_intervals;
        for e in &self.whole_edges {
            let data = graph.edge(e)?;
            self.vertices.insert(data.ends.0.clone());
            self.vertices.insert(data.ends.1.clone());
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.whole_edges.is_empty() && self.intervals.is_empty()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn contains_point(&self, graph: &MetricGraph, p: &Point) -> bool {
        match p {
            Point::Vertex(v) => self.contains_vertex(v),
            Point::Interior(e, t) => {
                if self.whole_edges.contains(e) {
                    return true;
                }
                let _ = graph;
                self.intervals
                    .get(e)
                    .is_some_and(|ivs| ivs.iter().any(|(a, b)| a <= t && t <= b))
            }
        }
    }

    /// All interval endpoints that are interior points, i.e. the places a
    /// refinement must cut to make this subgraph vertex-and-edge aligned.
    pub fn interior_breakpoints(&self, graph: &MetricGraph) -> Vec<Point> {
        let mut pts = Vec::new();
        for (e, ivs) in &self.intervals {
            let len = &graph.edge(e).expect("edge exists").length;
            for (a, b) in ivs {
                for t in [a, b] {
                    if t.is_positive() && t < len {
                        pts.push(Point::Interior(e.clone(), t.clone()));
                    }
                }
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }
}

/// One removed item for complement computations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Removal {
    Point(Point),
    OpenEdge(EdgeId),
}

/// A refinement of a base model at a finite set of interior points, together
/// with the point relabeling in both directions.
#[derive(Clone, Debug)]
pub struct Subdivision {
    base: Arc<MetricGraph>,
    refined: Arc<MetricGraph>,
    cuts: BTreeMap<EdgeId, Vec<Rational>>,
    cut_vertex: BTreeMap<(EdgeId, Rational), VertexId>,
    cut_point: BTreeMap<VertexId, (EdgeId, Rational)>,
    // base edge -> ordered refined pieces (id, start offset, end offset)
    pieces: BTreeMap<EdgeId, Vec<(EdgeId, Rational, Rational)>>,
    piece_to_base: BTreeMap<EdgeId, (EdgeId, Rational, Rational)>,
}

impl Subdivision {
    pub fn new(base: &Arc<MetricGraph>, points: &[Point]) -> Result<Subdivision> {
        let mut cuts: BTreeMap<EdgeId, Vec<Rational>> = BTreeMap::new();
        for p in points {
            p.validate(base)?;
            if let Point::Interior(e, t) = p {
                cuts.entry(e.clone()).or_default().push(t.clone());
            }
        }
        for ts in cuts.values_mut() {
            ts.sort();
            ts.dedup();
        }

        let taken: BTreeSet<String> = base
            .vertices()
            .map(|v| v.0.clone())
            .chain(base.edge_ids().map(|e| e.0.clone()))
            .collect();
        let fresh = |mut s: String| -> String {
            while taken.contains(&s) {
                s.insert(0, '@');
            }
            s
        };

        let mut vertices: Vec<VertexId> = base.vertices().cloned().collect();
        let mut edges: Vec<(EdgeId, VertexId, VertexId, Rational)> = Vec::new();
        let mut cut_vertex = BTreeMap::new();
        let mut cut_point = BTreeMap::new();
        let mut pieces: BTreeMap<EdgeId, Vec<(EdgeId, Rational, Rational)>> = BTreeMap::new();
        let mut piece_to_base = BTreeMap::new();

        for (id, data) in base.edges() {
            let ts = cuts.get(id).cloned().unwrap_or_default();
            if ts.is_empty() {
                edges.push((id.clone(), data.ends.0.clone(), data.ends.1.clone(), data.length.clone()));
                pieces.insert(
                    id.clone(),
                    vec![(id.clone(), Rational::zero(), data.length.clone())],
                );
                piece_to_base.insert(id.clone(), (id.clone(), Rational::zero(), data.length.clone()));
                continue;
            }
            let mut bounds = vec![Rational::zero()];
            bounds.extend(ts.iter().cloned());
            bounds.push(data.length.clone());
            let mut cut_ids = Vec::new();
            for t in &ts {
                let vid = VertexId::new(fresh(format!("{id}@{t}")));
                vertices.push(vid.clone());
                cut_vertex.insert((id.clone(), t.clone()), vid.clone());
                cut_point.insert(vid.clone(), (id.clone(), t.clone()));
                cut_ids.push(vid);
            }
            let mut edge_pieces = Vec::new();
            for i in 0..bounds.len() - 1 {
                let pid = EdgeId::new(fresh(format!("{id}#{i}")));
                let from = if i == 0 { data.ends.0.clone() } else { cut_ids[i - 1].clone() };
                let to = if i + 1 == bounds.len() - 1 {
                    data.ends.1.clone()
                } else {
                    cut_ids[i].clone()
                };
                let len = &bounds[i + 1] - &bounds[i];
                edges.push((pid.clone(), from, to, len));
                edge_pieces.push((pid.clone(), bounds[i].clone(), bounds[i + 1].clone()));
                piece_to_base.insert(pid, (id.clone(), bounds[i].clone(), bounds[i + 1].clone()));
            }
            pieces.insert(id.clone(), edge_pieces);
        }

        let refined = Arc::new(MetricGraph::new(vertices, edges)?);
        Ok(Subdivision {
            base: base.clone(),
            refined,
            cuts,
            cut_vertex,
            cut_point,
            pieces,
            piece_to_base,
        })
    }

    pub fn base(&self) -> &Arc<MetricGraph> {
        &self.base
    }

    pub fn refined(&self) -> &Arc<MetricGraph> {
        &self.refined
    }

    /// Translates a point on the base model to the refined model.
    pub fn to_refined(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(v.clone()),
            Point::Interior(e, t) => {
                if let Some(v) = self.cut_vertex.get(&(e.clone(), t.clone())) {
                    return Point::Vertex(v.clone());
                }
                let pieces = &self.pieces[e];
                for (pid, a, b) in pieces {
                    if t > a && t < b {
                        return Point::Interior(pid.clone(), t - a);
                    }
                }
                unreachable!("offset {t} on {e} must land in a piece")
            }
        }
    }

    /// Translates a point on the refined model back to the base model.
    pub fn to_base(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => match self.cut_point.get(v) {
                Some((e, t)) => Point::Interior(e.clone(), t.clone()),
                None => Point::Vertex(v.clone()),
            },
            Point::Interior(pid, s) => {
                let (e, a, _) = &self.piece_to_base[pid];
                Point::on_edge(&self.base, e, a + s).expect("offset stays interior")
            }
        }
    }

    /// The refined pieces covering a base edge, in offset order.
    pub fn pieces_of(&self, e: &EdgeId) -> &[(EdgeId, Rational, Rational)] {
        &self.pieces[e]
    }

    /// The base edge and offset span of a refined edge.
    pub fn base_span(&self, piece: &EdgeId) -> &(EdgeId, Rational, Rational) {
        &self.piece_to_base[piece]
    }

    pub fn cut_offsets(&self, e: &EdgeId) -> &[Rational] {
        self.cuts.get(e).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Refines the model at the given points. Exposes the refined model and the
/// relabeling map; the metric graph itself is unchanged.
pub fn subdivide(graph: &Arc<MetricGraph>, points: &[Point]) -> Result<Subdivision> {
    Subdivision::new(graph, points)
}

/// Connected components of a model after deleting some vertices and open
/// edges. An edge attaches to a surviving endpoint's component; an edge whose
/// endpoints are both deleted forms its own component.
pub(crate) fn open_components(
    model: &MetricGraph,
    removed_vertices: &BTreeSet<VertexId>,
    removed_edges: &BTreeSet<EdgeId>,
) -> Vec<(BTreeSet<VertexId>, BTreeSet<EdgeId>)> {
    let verts: Vec<&VertexId> = model
        .vertices()
        .filter(|v| !removed_vertices.contains(*v))
        .collect();
    let edges: Vec<&EdgeId> = model
        .edge_ids()
        .filter(|e| !removed_edges.contains(*e))
        .collect();
    let vindex: BTreeMap<&VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let base = verts.len();
    let mut dsu = Dsu::new(base + edges.len());
    for (k, id) in edges.iter().enumerate() {
        let e = model.edge(id).expect("edge exists");
        for end in [&e.ends.0, &e.ends.1] {
            if let Some(&vi) = vindex.get(end) {
                dsu.union(base + k, vi);
            }
        }
    }
    let mut by_root: BTreeMap<usize, (BTreeSet<VertexId>, BTreeSet<EdgeId>)> = BTreeMap::new();
    for (i, v) in verts.iter().enumerate() {
        by_root.entry(dsu.find(i)).or_default().0.insert((*v).clone());
    }
    for (k, id) in edges.iter().enumerate() {
        by_root
            .entry(dsu.find(base + k))
            .or_default()
            .1
            .insert((*id).clone());
    }
    let mut comps: Vec<_> = by_root.into_values().collect();
    comps.sort();
    comps
}

/// Connected components of the complement of the removed points and open
/// edges, returned as closed subgraphs (closures of the open components).
pub fn complement_components(graph: &Arc<MetricGraph>, removed: &[Removal]) -> Result<Vec<Subgraph>> {
    let mut cut_points = Vec::new();
    for r in removed {
        match r {
            Removal::Point(p) => {
                p.validate(graph)?;
                if let Point::Interior(..) = p {
                    cut_points.push(p.clone());
                }
            }
            Removal::OpenEdge(e) => {
                graph.edge(e)?;
            }
        }
    }
    let sub = Subdivision::new(graph, &cut_points)?;
    let mut removed_vertices = BTreeSet::new();
    let mut removed_edges = BTreeSet::new();
    for r in removed {
        match r {
            Removal::Point(p) => {
                if let Point::Vertex(v) = sub.to_refined(p) {
                    removed_vertices.insert(v);
                } else {
                    unreachable!("interior removal points are cut vertices");
                }
            }
            Removal::OpenEdge(e) => {
                for (pid, _, _) in sub.pieces_of(e) {
                    removed_edges.insert(pid.clone());
                }
            }
        }
    }
    let comps = open_components(sub.refined(), &removed_vertices, &removed_edges);
    comps
        .into_iter()
        .map(|(vs, es)| refined_component_to_subgraph(&sub, &vs, &es))
        .collect()
}

/// Converts a component of a refined model into a base-model subgraph
/// (taking closures).
pub(crate) fn refined_component_to_subgraph(
    sub: &Subdivision,
    vertices: &BTreeSet<VertexId>,
    edges: &BTreeSet<EdgeId>,
) -> Result<Subgraph> {
    let mut base_vertices = Vec::new();
    let mut intervals = Vec::new();
    for v in vertices {
        match sub.to_base(&Point::Vertex(v.clone())) {
            Point::Vertex(bv) => base_vertices.push(bv),
            Point::Interior(e, t) => intervals.push((e, t.clone(), t)),
        }
    }
    for pid in edges {
        let (e, a, b) = sub.base_span(pid);
        intervals.push((e.clone(), a.clone(), b.clone()));
    }
    Subgraph::from_parts(sub.base(), base_vertices, [], intervals)
}
