//! Dhar's burning algorithm and q-reduced representatives.
//!
//! `dhar_burn` simulates the fire on the model refined at the divisor's
//! support: a point with `c` chips burns once more than `c` incident
//! directions are on fire. While some region stays unburnt, `reduce` fires
//! away from it with the largest admissible eps (the next chip lands exactly
//! on a vertex of the refined model, a chip, or the base point), accumulating
//! the witness function. Divisors that are not effective away from the base
//! point are first repaired by auxiliary reductions that borrow chips at the
//! base point, one deficit point at a time.

use std::collections::BTreeSet;

use crate::divisor::{cut_function, ensure_same_graph, Divisor, PLFunction};
use crate::error::{Error, Result};
use crate::graph::{Point, Subdivision, Subgraph, VertexId};
use crate::rational::Rational;

/// Outcome of one burning pass.
#[derive(Clone, Debug)]
pub struct BurnResult {
    /// The maximal closed set the fire did not reach. Never contains the
    /// fire source.
    pub unburnt: Subgraph,
    pub burns_all: bool,
}

fn default_event_cap() -> u64 {
    std::env::var("TROPDIV_EVENT_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000)
}

/// Refinement of the graph at the divisor support plus the base point.
fn burn_model(d: &Divisor, q: &Point) -> Result<Subdivision> {
    let mut pts: Vec<Point> = d.support().cloned().collect();
    pts.push(q.clone());
    pts.sort();
    pts.dedup();
    Subdivision::new(d.graph(), &pts)
}

/// Runs the fire from `q`. Requires `d` effective away from `q`.
pub fn dhar_burn(d: &Divisor, q: &Point) -> Result<BurnResult> {
    q.validate(d.graph())?;
    if !d.is_effective_away_from(q) {
        return Err(Error::NotEffectiveAwayFromQ(q.to_string()));
    }
    let sub = burn_model(d, q)?;
    let model = sub.refined().clone();
    let Point::Vertex(source) = sub.to_refined(q) else {
        unreachable!("base point is refined to a vertex");
    };

    let chips = |v: &VertexId| -> i64 { d.coeff(&sub.to_base(&Point::Vertex(v.clone()))) };
    let mut burnt: BTreeSet<VertexId> = [source.clone()].into();
    loop {
        let mut changed = false;
        for v in model.vertices() {
            if burnt.contains(v) {
                continue;
            }
            let mut fires = 0i64;
            for (_, e) in model.edges() {
                if e.ends.1 == *v && burnt.contains(&e.ends.0) {
                    fires += 1;
                }
                if e.ends.0 == *v && e.ends.0 != e.ends.1 && burnt.contains(&e.ends.1) {
                    fires += 1;
                }
            }
            if fires > chips(v) {
                burnt.insert(v.clone());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let unburnt_vertices: BTreeSet<VertexId> =
        model.vertices().filter(|v| !burnt.contains(*v)).cloned().collect();
    let unburnt_edges: BTreeSet<_> = model
        .edges()
        .filter(|(_, e)| {
            unburnt_vertices.contains(&e.ends.0) && unburnt_vertices.contains(&e.ends.1)
        })
        .map(|(id, _)| id.clone())
        .collect();
    let burns_all = unburnt_vertices.is_empty();
    let unburnt =
        crate::graph::refined_component_to_subgraph(&sub, &unburnt_vertices, &unburnt_edges)?;
    debug_assert!(!unburnt.contains_point(d.graph(), q));
    Ok(BurnResult { unburnt, burns_all })
}

/// The largest eps for which firing away from `a` keeps every moving chip on
/// its edge piece: the next event is a chip landing on a vertex of the model
/// refined at the divisor support, on another chip, or on the base point.
fn max_firing_eps(d: &Divisor, q: &Point, a: &Subgraph) -> Result<Rational> {
    let mut pts: Vec<Point> = d.support().cloned().collect();
    pts.push(q.clone());
    pts.extend(a.interior_breakpoints(d.graph()));
    pts.sort();
    pts.dedup();
    let sub = Subdivision::new(d.graph(), &pts)?;
    let in_a = |v: &VertexId| a.contains_point(d.graph(), &sub.to_base(&Point::Vertex(v.clone())));

    let mut eps: Option<Rational> = None;
    for (id, data) in sub.refined().edges() {
        // Skip pieces inside A: test the midpoint.
        let (be, from, to) = sub.base_span(id);
        let mid = &(from + to) / &Rational::from_int(2);
        if a.contains_point(d.graph(), &Point::Interior(be.clone(), mid)) {
            continue;
        }
        let u_in = in_a(&data.ends.0);
        let v_in = in_a(&data.ends.1);
        let candidate = match (u_in, v_in) {
            (true, true) => Some(&data.length / &Rational::from_int(2)),
            (true, false) | (false, true) => Some(data.length.clone()),
            (false, false) => None,
        };
        if let Some(c) = candidate {
            eps = Some(match eps {
                Some(e) => e.min(c),
                None => c,
            });
        }
    }
    eps.ok_or_else(|| Error::Internal("unburnt set has no exit".into()))
}

/// q-reduction of a divisor already effective away from `q`.
fn reduce_effective(d: &Divisor, q: &Point) -> Result<(Divisor, PLFunction)> {
    let cap = default_event_cap();
    let mut current = d.clone();
    let mut witness = PLFunction::zero(d.graph());
    let mut events = 0u64;
    loop {
        let burn = dhar_burn(&current, q)?;
        if burn.burns_all {
            return Ok((current, witness));
        }
        let eps = max_firing_eps(&current, q, &burn.unburnt)?;
        let theta = cut_function(current.graph(), &burn.unburnt, &eps)?;
        current = current.checked_add(&theta.div())?;
        witness = witness.add(&theta)?;
        events += 1;
        if events > cap {
            return Err(Error::Internal(format!(
                "firing event cap {cap} exceeded while reducing toward {q}; \
                 current state {current}"
            )));
        }
    }
}

/// The unique q-reduced divisor equivalent to `d`, together with a witness
/// function `f` satisfying `d + div(f) = reduced` exactly.
///
/// Arbitrary divisors are allowed: points with negative coefficient are first
/// repaired by reducing the auxiliary divisor `m*q + d(x)*x` toward `x`,
/// which is effective away from `x` and, having degree `betti1`, pulls enough
/// chips from `q` to make `x` nonnegative without hurting any other point.
pub fn reduce(d: &Divisor, q: &Point) -> Result<(Divisor, PLFunction)> {
    let graph = d.graph();
    q.validate(graph)?;
    if !graph.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let genus = graph.betti1();
    let mut current = d.clone();
    let mut witness = PLFunction::zero(graph);
    loop {
        let deficit = current
            .entries()
            .find(|(p, c)| *c < 0 && *p != q)
            .map(|(p, c)| (p.clone(), c));
        let Some((x, c)) = deficit else { break };
        let m = genus - c;
        let aux = Divisor::new(graph, [(Point::clone(q), m), (x.clone(), c)])?;
        let (aux_red, f) = reduce_effective(&aux, &x)?;
        if aux_red.coeff(&x) < 0 {
            return Err(Error::Internal(format!(
                "auxiliary reduction failed to repair {x}"
            )));
        }
        current = current.checked_add(&f.div())?;
        witness = witness.add(&f)?;
        debug_assert!(current.coeff(&x) >= 0);
    }
    let (reduced, f) = reduce_effective(&current, q)?;
    let witness = witness.add(&f)?;
    debug_assert_eq!(
        d.checked_add(&witness.div()).unwrap(),
        reduced,
        "witness must reproduce the reduction"
    );
    Ok((reduced, witness))
}

/// Linear equivalence via reduction toward the lowest-id vertex.
pub fn is_equivalent(d1: &Divisor, d2: &Divisor) -> Result<bool> {
    ensure_same_graph(d1.graph(), d2.graph())?;
    if d1.degree() != d2.degree() {
        return Ok(false);
    }
    let q = Point::Vertex(d1.graph().canonical_vertex().clone());
    let diff = d1.checked_sub(d2)?;
    let (reduced, _) = reduce(&diff, &q)?;
    Ok(reduced.is_zero())
}

/// An effective divisor equivalent to `d`, when one exists.
pub fn effective_rep(d: &Divisor) -> Result<Option<Divisor>> {
    if d.degree() < 0 {
        return Ok(None);
    }
    let q = Point::Vertex(d.graph().canonical_vertex().clone());
    let (reduced, _) = reduce(d, &q)?;
    Ok(if reduced.is_effective() { Some(reduced) } else { None })
}
