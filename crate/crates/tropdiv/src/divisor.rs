//! Divisors and piecewise linear functions with integer slopes.
//!
//! A divisor is a finite integer-weighted set of points. A `PLFunction` is
//! stored on an explicit subdivision of the graph, with a rational value at
//! each model vertex and a constant integer slope on each model edge, so the
//! continuity condition is a per-edge linear identity. `div_of` sums incoming
//! slopes at every point; firing away from a closed subset is the divisor of
//! the cut function `min(eps, dist(x, A))`.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetricGraph, Point, Subdivision, Subgraph, VertexId};
use crate::rational::Rational;

pub(crate) fn ensure_same_graph(a: &Arc<MetricGraph>, b: &Arc<MetricGraph>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a.as_ref() == b.as_ref() {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

/// A finite formal integer combination of points on a metric graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Divisor {
    graph: Arc<MetricGraph>,
    coeffs: BTreeMap<Point, i64>,
}

impl Divisor {
    pub fn zero(graph: &Arc<MetricGraph>) -> Divisor {
        Divisor { graph: graph.clone(), coeffs: BTreeMap::new() }
    }

    pub fn new(
        graph: &Arc<MetricGraph>,
        entries: impl IntoIterator<Item = (Point, i64)>,
    ) -> Result<Divisor> {
        let mut d = Divisor::zero(graph);
        for (p, c) in entries {
            d.add_chips(p, c)?;
        }
        Ok(d)
    }

    pub fn single(graph: &Arc<MetricGraph>, p: Point, c: i64) -> Result<Divisor> {
        Divisor::new(graph, [(p, c)])
    }

    /// Adds `c` chips at `p`, normalizing edge-end offsets to vertices.
    pub fn add_chips(&mut self, p: Point, c: i64) -> Result<()> {
        let p = match p {
            Point::Vertex(v) => {
                if !self.graph.has_vertex(&v) {
                    return Err(Error::InvalidInput(format!("unknown vertex {v}")));
                }
                Point::Vertex(v)
            }
            Point::Interior(e, t) => Point::on_edge(&self.graph, &e, t)?,
        };
        let entry = self.coeffs.entry(p.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&p);
        }
        Ok(())
    }

    pub fn graph(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn coeff(&self, p: &Point) -> i64 {
        self.coeffs.get(p).copied().unwrap_or(0)
    }

    /// Points with nonzero coefficient, in deterministic order.
    pub fn entries(&self) -> impl Iterator<Item = (&Point, i64)> {
        self.coeffs.iter().map(|(p, &c)| (p, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&c| c >= 0)
    }

    pub fn is_effective_away_from(&self, q: &Point) -> bool {
        self.coeffs.iter().all(|(p, &c)| c >= 0 || p == q)
    }

    pub fn checked_add(&self, other: &Divisor) -> Result<Divisor> {
        ensure_same_graph(&self.graph, &other.graph)?;
        let mut out = self.clone();
        for (p, c) in other.entries() {
            out.add_chips(p.clone(), c)?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Divisor) -> Result<Divisor> {
        self.checked_add(&other.negate())
    }

    pub fn negate(&self) -> Divisor {
        Divisor {
            graph: self.graph.clone(),
            coeffs: self.coeffs.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero(&self.graph);
        }
        Divisor {
            graph: self.graph.clone(),
            coeffs: self.coeffs.iter().map(|(p, c)| (p.clone(), c * k)).collect(),
        }
    }

    /// The effective divisor of positive coefficients.
    pub fn positive_part(&self) -> Divisor {
        Divisor {
            graph: self.graph.clone(),
            coeffs: self.coeffs.iter().filter(|(_, &c)| c > 0).map(|(p, &c)| (p.clone(), c)).collect(),
        }
    }

    /// The effective divisor `E` with `self = positive_part - E`.
    pub fn negative_part(&self) -> Divisor {
        Divisor {
            graph: self.graph.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, &c)| c < 0)
                .map(|(p, &c)| (p.clone(), -c))
                .collect(),
        }
    }

    /// Transports every chip through `f`, which must send points to points of
    /// `target` injectively or not; coefficients at equal images aggregate.
    pub(crate) fn map_points(
        &self,
        target: &Arc<MetricGraph>,
        mut f: impl FnMut(&Point) -> Point,
    ) -> Result<Divisor> {
        let mut out = Divisor::zero(target);
        for (p, c) in self.entries() {
            out.add_chips(f(p), c)?;
        }
        Ok(out)
    }
}

impl std::fmt::Display for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in &self.coeffs {
            if first {
                write!(f, "{c}·({p})")?;
                first = false;
            } else if *c >= 0 {
                write!(f, " + {c}·({p})")?;
            } else {
                write!(f, " - {}·({p})", -c)?;
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// A continuous piecewise linear function with integer slopes, stored on an
/// explicit subdivision of its graph.
#[derive(Clone, Debug)]
pub struct PLFunction {
    sub: Subdivision,
    values: BTreeMap<VertexId, Rational>,
    slopes: BTreeMap<EdgeId, i64>,
}

impl PLFunction {
    /// Builds a function from values at the refined vertices, deriving slopes.
    /// Fails unless every slope is an integer.
    pub fn from_vertex_values(sub: Subdivision, values: BTreeMap<VertexId, Rational>) -> Result<PLFunction> {
        let model = sub.refined().clone();
        let mut slopes = BTreeMap::new();
        for (id, data) in model.edges() {
            let vu = values
                .get(&data.ends.0)
                .ok_or_else(|| Error::InvalidInput(format!("no value at {}", data.ends.0)))?;
            let vw = values
                .get(&data.ends.1)
                .ok_or_else(|| Error::InvalidInput(format!("no value at {}", data.ends.1)))?;
            let slope = &(vw - vu) / &data.length;
            let Some(s) = slope.to_integer() else {
                return Err(Error::InvariantViolation(format!(
                    "slope {slope} on edge {id} is not an integer"
                )));
            };
            let s: i64 = i64::try_from(s)
                .map_err(|_| Error::Internal("slope exceeds i64".into()))?;
            slopes.insert(id.clone(), s);
        }
        Ok(PLFunction { sub, values, slopes })
    }

    pub fn constant(graph: &Arc<MetricGraph>, value: Rational) -> PLFunction {
        let sub = Subdivision::new(graph, &[]).expect("empty subdivision");
        let values = graph.vertices().map(|v| (v.clone(), value.clone())).collect();
        PLFunction::from_vertex_values(sub, values).expect("constant is continuous")
    }

    pub fn zero(graph: &Arc<MetricGraph>) -> PLFunction {
        PLFunction::constant(graph, Rational::zero())
    }

    pub fn base_graph(&self) -> &Arc<MetricGraph> {
        self.sub.base()
    }

    pub fn subdivision(&self) -> &Subdivision {
        &self.sub
    }

    /// Value at any point of the graph (base coordinates).
    pub fn eval(&self, p: &Point) -> Result<Rational> {
        p.validate(self.sub.base())?;
        Ok(match self.sub.to_refined(p) {
            Point::Vertex(v) => self.values[&v].clone(),
            Point::Interior(piece, s) => {
                let data = self.sub.refined().edge(&piece).expect("piece exists");
                let slope = Rational::from_int(self.slopes[&piece]);
                &self.values[&data.ends.0] + &(&slope * &s)
            }
        })
    }

    /// Piecewise data in base coordinates: (edge, from, to, slope).
    pub fn pieces(&self) -> Vec<(EdgeId, Rational, Rational, i64)> {
        let mut out = Vec::new();
        for e in self.sub.base().edge_ids() {
            for (pid, a, b) in self.sub.pieces_of(e) {
                out.push((e.clone(), a.clone(), b.clone(), self.slopes[pid]));
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> PLFunction {
        PLFunction {
            sub: self.sub.clone(),
            values: self.values.iter().map(|(v, x)| (v.clone(), x.scale_int(k))).collect(),
            slopes: self.slopes.iter().map(|(e, s)| (e.clone(), s * k)).collect(),
        }
    }

    pub fn negate(&self) -> PLFunction {
        self.scale(-1)
    }

    /// Pointwise sum on the common refinement.
    pub fn add(&self, other: &PLFunction) -> Result<PLFunction> {
        ensure_same_graph(self.sub.base(), other.sub.base())?;
        let base = self.sub.base();
        let mut cuts: Vec<Point> = Vec::new();
        for e in base.edge_ids() {
            for t in self.sub.cut_offsets(e).iter().chain(other.sub.cut_offsets(e)) {
                cuts.push(Point::Interior(e.clone(), t.clone()));
            }
        }
        cuts.sort();
        cuts.dedup();
        let sub = Subdivision::new(base, &cuts)?;
        let mut values = BTreeMap::new();
        for v in sub.refined().vertices() {
            let p = sub.to_base(&Point::Vertex(v.clone()));
            values.insert(v.clone(), self.eval(&p)? + other.eval(&p)?);
        }
        PLFunction::from_vertex_values(sub, values)
    }

    /// The divisor of incoming slopes, expressed on the base model.
    pub fn div(&self) -> Divisor {
        let model = self.sub.refined();
        let mut at_vertex: BTreeMap<VertexId, i64> = BTreeMap::new();
        for (id, data) in model.edges() {
            let s = self.slopes[id];
            *at_vertex.entry(data.ends.1.clone()).or_insert(0) += s;
            *at_vertex.entry(data.ends.0.clone()).or_insert(0) -= s;
        }
        let mut d = Divisor::zero(self.sub.base());
        for (v, c) in at_vertex {
            if c != 0 {
                let p = self.sub.to_base(&Point::Vertex(v));
                d.add_chips(p, c).expect("refined vertex maps to a valid point");
            }
        }
        debug_assert_eq!(d.degree(), 0, "principal divisors have degree zero");
        d
    }

    /// `coefficient * min(radius, dist(x, center))`: the basic valid move used
    /// for randomized equivalences. Continuous with slopes in {-c, 0, c}.
    pub fn distance_cone(
        graph: &Arc<MetricGraph>,
        center: &Point,
        radius: &Rational,
        coefficient: i64,
    ) -> Result<PLFunction> {
        center.validate(graph)?;
        if !radius.is_positive() {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        let mut a = Subgraph::default();
        match center {
            Point::Vertex(v) => {
                a.vertices.insert(v.clone());
            }
            Point::Interior(e, t) => {
                a.intervals.insert(e.clone(), vec![(t.clone(), t.clone())]);
            }
        }
        let f = cut_function(graph, &a, radius)?;
        Ok(f.scale(coefficient))
    }
}

/// The divisor of a piecewise linear function.
pub fn div_of(f: &PLFunction) -> Divisor {
    f.div()
}

/// The canonical divisor: coefficient `valence - 2` at each model vertex.
pub fn canonical(graph: &Arc<MetricGraph>) -> Divisor {
    let mut d = Divisor::zero(graph);
    for v in graph.vertices() {
        let c = graph.valence(v) as i64 - 2;
        if c != 0 {
            d.add_chips(Point::Vertex(v.clone()), c).expect("vertex point");
        }
    }
    d
}

/// Geometry of one firing: the cut function `min(eps, dist(x, A))` realized
/// exactly on a refinement at all of its kinks. Valid for any positive eps.
pub(crate) fn cut_function(
    graph: &Arc<MetricGraph>,
    a: &Subgraph,
    eps: &Rational,
) -> Result<PLFunction> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    // Pass 1: refine at A's own breakpoints and measure distances.
    let base_cuts = a.interior_breakpoints(graph);
    let sub1 = Subdivision::new(graph, &base_cuts)?;
    let dist1 = distances_to_subgraph(&sub1, a);

    // Collect the kinks of min(eps, dist) in base coordinates.
    let mut cuts = base_cuts;
    for (id, data) in sub1.refined().edges() {
        if edge_in_subgraph(&sub1, a, id) {
            continue;
        }
        let len = &data.length;
        let du = dist1.get(&data.ends.0).cloned();
        let dv = dist1.get(&data.ends.1).cloned();
        let mut local = Vec::new();
        if let (Some(du), Some(dv)) = (&du, &dv) {
            // Peak where fire from both sides meets.
            let peak = &(&(len + dv) - du) / &Rational::from_int(2);
            if peak.is_positive() && peak < *len {
                local.push(peak);
            }
        }
        if let Some(du) = &du {
            let t = eps - du;
            if t.is_positive() && t < *len {
                local.push(t);
            }
        }
        if let Some(dv) = &dv {
            let t = len - &(eps - dv);
            if t.is_positive() && t < *len {
                local.push(t);
            }
        }
        let (base_edge, a_off, _) = sub1.base_span(id);
        for t in local {
            cuts.push(Point::Interior(base_edge.clone(), a_off + &t));
        }
    }
    cuts.sort();
    cuts.dedup();

    // Pass 2: evaluate min(eps, dist) at every vertex of the full refinement.
    let sub = Subdivision::new(graph, &cuts)?;
    let dist = distances_to_subgraph(&sub, a);
    let mut values = BTreeMap::new();
    for v in sub.refined().vertices() {
        let theta = match dist.get(v) {
            Some(d) => d.clone().min(eps.clone()),
            None => eps.clone(),
        };
        values.insert(v.clone(), theta);
    }
    PLFunction::from_vertex_values(sub, values)
}

/// Distances from the subgraph `a` to every vertex of the refined model; the
/// subdivision must already cut at `a`'s interval endpoints.
fn distances_to_subgraph(sub: &Subdivision, a: &Subgraph) -> BTreeMap<VertexId, Rational> {
    let mut sources = BTreeMap::new();
    for v in sub.refined().vertices() {
        let p = sub.to_base(&Point::Vertex(v.clone()));
        if a.contains_point(sub.base(), &p) {
            sources.insert(v.clone(), Rational::zero());
        }
    }
    sub.refined().distances(&sources)
}

/// Whether a refined edge lies inside the subgraph (decided at its midpoint;
/// the refinement cuts at all interval endpoints, so pieces don't straddle).
fn edge_in_subgraph(sub: &Subdivision, a: &Subgraph, piece: &EdgeId) -> bool {
    let (e, from, to) = sub.base_span(piece);
    let mid = &(from + to) / &Rational::from_int(2);
    a.contains_point(sub.base(), &Point::Interior(e.clone(), mid))
}

/// Chip-firing away from the closed set `A`: the divisor of the cut function.
/// Validates that eps is small enough that the open eps-neighborhood of `A`
/// swallows no vertex outside `A` and that no two fired chips collide.
pub fn fire_subset(graph: &Arc<MetricGraph>, a: &Subgraph, eps: &Rational) -> Result<Divisor> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let sub = Subdivision::new(graph, &a.interior_breakpoints(graph))?;
    let dist = distances_to_subgraph(&sub, a);
    let in_a: BTreeSet<VertexId> = sub
        .refined()
        .vertices()
        .filter(|v| a.contains_point(sub.base(), &sub.to_base(&Point::Vertex((*v).clone()))))
        .cloned()
        .collect();
    for v in sub.refined().vertices() {
        if in_a.contains(v) {
            continue;
        }
        if let Some(d) = dist.get(v) {
            if d < eps {
                return Err(Error::EpsTooLarge(format!(
                    "the eps-neighborhood of A swallows {} at distance {d}",
                    sub.to_base(&Point::Vertex(v.clone()))
                )));
            }
        }
    }
    let mut landings: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (id, data) in sub.refined().edges() {
        if edge_in_subgraph(&sub, a, id) {
            continue;
        }
        let u_in = in_a.contains(&data.ends.0);
        let v_in = in_a.contains(&data.ends.1);
        let two_eps = eps + eps;
        if u_in && v_in && two_eps >= data.length {
            return Err(Error::EpsTooLarge(format!(
                "chips fired into edge {id} from both ends collide"
            )));
        }
        if u_in && !v_in && *eps == data.length {
            *landings.entry(data.ends.1.clone()).or_insert(0) += 1;
        }
        if v_in && !u_in && *eps == data.length {
            *landings.entry(data.ends.0.clone()).or_insert(0) += 1;
        }
    }
    if let Some((v, _)) = landings.iter().find(|(_, &n)| n > 1) {
        return Err(Error::EpsTooLarge(format!(
            "two fired chips collide at {}",
            sub.to_base(&Point::Vertex(v.clone()))
        )));
    }
    Ok(cut_function(graph, a, eps)?.div())
}
