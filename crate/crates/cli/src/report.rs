//! JSON reports. Vertex and arc ids are 1-based, arcs numbered in file
//! order; `null` distances are unreachable.

use hopforge_core::graph::WalkStep;
use hopforge_core::stats::Counters;
use hopforge_core::{Dist, IterationReport, Length, PotentialVector, SolveResult, Walk, WeightedDigraph};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Default, Serialize, Deserialize)]
pub struct SolveReport {
    pub format_version: u32,
    pub status: String,
    pub solver: String,
    pub n: usize,
    pub m: usize,
    pub source: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Option<Length>>>,
    /// Tree arc into each vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potentials: Option<Vec<Length>>,
    /// Closed vertex sequence; first and last entries coincide.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_arcs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_length: Option<Length>,
    pub verified: bool,
    #[serde(default)]
    pub iterations: Vec<Value>,
    #[serde(default)]
    pub counters: Value,
}

impl SolveReport {
    pub fn new(g: &WeightedDigraph, solver: &str, source: usize, result: &SolveResult) -> Self {
        let mut r = SolveReport {
            format_version: FORMAT_VERSION,
            solver: solver.into(),
            n: g.n(),
            m: g.m(),
            source: source + 1,
            ..Default::default()
        };
        match result {
            SolveResult::Distances { dist, parent, potentials, .. } => {
                r.status = "ok".into();
                r.dist = Some(dist.iter().map(|d| d.finite()).collect());
                r.parent = Some(parent.iter().map(|p| p.map(|id| id + 1)).collect());
                r.potentials = Some(potentials.as_slice().to_vec());
            }
            SolveResult::NegativeCycle(walk) => {
                r.status = "negative_cycle".into();
                r.cycle = Some(walk.vertices().iter().map(|v| v + 1).collect());
                r.cycle_arcs = Some(walk.steps().iter().map(|s| arc_id(g, s) + 1).collect());
                r.cycle_length = Some(walk.length());
            }
        }
        r
    }

    pub fn with_run(mut self, iterations: &[IterationReport], counters: Counters, timings: bool) -> Self {
        self.iterations = iterations
            .iter()
            .map(|it| {
                let mut v = serde_json::to_value(it).expect("reports serialize");
                if !timings {
                    v.as_object_mut().unwrap().remove("wall_ms");
                }
                v
            })
            .collect();
        self.counters = serde_json::to_value(counters).expect("counters serialize");
        self
    }

    /// Rebuilds the result for checking against `g`.
    pub fn to_result(&self, g: &WeightedDigraph) -> Result<SolveResult, String> {
        let index = |id: usize, bound: usize, what: &str| {
            id.checked_sub(1).filter(|&i| i < bound).ok_or_else(|| format!("{what} id {id} out of range"))
        };
        match self.status.as_str() {
            "ok" => {
                let missing = || "report lacks dist, parent or potentials".to_string();
                let dist = self.dist.as_ref().ok_or_else(missing)?;
                let parent = self.parent.as_ref().ok_or_else(missing)?;
                let potentials = self.potentials.as_ref().ok_or_else(missing)?;
                let parent = parent
                    .iter()
                    .map(|p| p.map(|id| index(id, g.m(), "arc")).transpose())
                    .collect::<Result<_, _>>()?;
                Ok(SolveResult::Distances {
                    source: index(self.source, g.n(), "source")?,
                    dist: dist.iter().map(|d| d.map_or(Dist::Infinite, Dist::Finite)).collect(),
                    parent,
                    potentials: PotentialVector::from(potentials.clone()),
                })
            }
            "negative_cycle" => {
                let arcs = self.cycle_arcs.as_ref().ok_or("report lacks cycle_arcs")?;
                let steps = arcs
                    .iter()
                    .map(|&id| {
                        let id = index(id, g.m(), "arc")?;
                        Ok(WalkStep { arc: g.arc(id), hop: g.is_hop(id) })
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                let start = steps.first().map_or(0, |s| s.arc.tail);
                let walk = Walk::from_steps(start, steps).map_err(|e| e.to_string())?;
                Ok(SolveResult::NegativeCycle(walk))
            }
            other => Err(format!("report status {other:?} carries no result")),
        }
    }
}

/// First arc of `g` matching the step; walks only store arc records.
fn arc_id(g: &WeightedDigraph, step: &WalkStep) -> usize {
    g.out_arcs(step.arc.tail)
        .iter()
        .copied()
        .find(|&id| g.arc(id) == step.arc)
        .expect("certified cycles use arcs of the input graph")
}

/// `{"format_version": 1, "status": "error", "error": msg}`.
pub fn error_report(msg: &str) -> Value {
    serde_json::json!({ "format_version": FORMAT_VERSION, "status": "error", "error": msg })
}
