use thiserror::Error;

use super::{Arc, PotentialVector, WeightedDigraph};
use crate::dist::{checked, Length};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkStep {
    pub arc: Arc,
    /// Whether the arc was a hop arc of the graph the walk was taken in.
    pub hop: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WalkError {
    #[error("step {index} starts at {got}, expected {expected}")]
    Discontinuous { index: usize, expected: usize, got: usize },
}

/// A walk stored as explicit arc records, so it stays meaningful after the
/// graph it was found in (a restriction, a reweighting) is dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    start: usize,
    steps: Vec<WalkStep>,
    hops: usize,
    length: Length,
}

impl Walk {
    pub fn empty(start: usize) -> Self {
        Walk { start, steps: Vec::new(), hops: 0, length: 0 }
    }

    pub fn from_steps(start: usize, steps: Vec<WalkStep>) -> Result<Self, WalkError> {
        let mut w = Walk::empty(start);
        for s in steps {
            w.push(s)?;
        }
        Ok(w)
    }

    pub fn push(&mut self, step: WalkStep) -> Result<(), WalkError> {
        let expected = self.end();
        if step.arc.tail != expected {
            return Err(WalkError::Discontinuous {
                index: self.steps.len(),
                expected,
                got: step.arc.tail,
            });
        }
        self.length = checked(self.length, step.arc.len);
        self.hops += step.hop as usize;
        self.steps.push(step);
        Ok(())
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.steps.last().map_or(self.start, |s| s.arc.head)
    }

    pub fn steps(&self) -> &[WalkStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of hop arcs, counted with repetition.
    pub fn hops(&self) -> usize {
        self.hops
    }

    pub fn length(&self) -> Length {
        self.length
    }

    pub fn is_closed(&self) -> bool {
        !self.steps.is_empty() && self.start == self.end()
    }

    /// Vertex sequence `start, head₁, head₂, …`.
    pub fn vertices(&self) -> Vec<usize> {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.arc.head)).collect()
    }

    /// Tails of the hop steps, in walk order.
    pub fn negative_vertices(&self) -> Vec<usize> {
        self.steps.iter().filter(|s| s.hop).map(|s| s.arc.tail).collect()
    }

    /// A proper walk has pairwise distinct negative vertices.
    pub fn is_proper(&self) -> bool {
        self.first_repeat().is_none()
    }

    /// Step indices `(i, j)`, `i < j`, of the first pair of hop steps leaving
    /// the same negative vertex.
    pub fn first_repeat(&self) -> Option<(usize, usize)> {
        let mut seen = std::collections::HashMap::new();
        for (j, s) in self.steps.iter().enumerate() {
            if s.hop {
                if let Some(&i) = seen.get(&s.arc.tail) {
                    return Some((i, j));
                }
                seen.insert(s.arc.tail, j);
            }
        }
        None
    }

    /// The sub-walk made of steps `from..to`.
    pub fn slice(&self, from: usize, to: usize) -> Walk {
        let start = if from < self.steps.len() { self.steps[from].arc.tail } else { self.end() };
        Walk::from_steps(start, self.steps[from..to].to_vec()).expect("slice of a walk is a walk")
    }

    /// The walk with steps `from..to` removed; only meaningful when that
    /// range is a closed sub-walk.
    pub fn excise(&self, from: usize, to: usize) -> Walk {
        let steps = self.steps[..from].iter().chain(&self.steps[to..]).copied().collect();
        Walk::from_steps(self.start, steps).expect("excised range must be closed")
    }

    /// `true` iff every step is an arc of `g`.
    pub fn is_walk_in(&self, g: &WeightedDigraph) -> bool {
        self.start < g.n() && self.steps.iter().all(|s| g.has_arc(s.arc.tail, s.arc.head, s.arc.len))
    }

    /// Undoes a reweighting: the walk in `G` that was found in `G_φ`.
    pub fn unweighted(&self, phi: &PotentialVector) -> Walk {
        let steps = self
            .steps
            .iter()
            .map(|s| WalkStep {
                arc: Arc::new(s.arc.tail, s.arc.head, checked(checked(s.arc.len, -phi[s.arc.tail]), phi[s.arc.head])),
                hop: s.hop,
            })
            .collect();
        Walk::from_steps(self.start, steps).expect("reweighting keeps endpoints")
    }

    /// Maps every vertex through `project`, dropping steps that collapse to
    /// zero-length self-loops.
    pub fn project(&self, project: impl Fn(usize) -> usize) -> Walk {
        let steps = self
            .steps
            .iter()
            .map(|s| WalkStep {
                arc: Arc::new(project(s.arc.tail), project(s.arc.head), s.arc.len),
                hop: s.hop,
            })
            .filter(|s| !(s.arc.tail == s.arc.head && s.arc.len == 0))
            .collect();
        Walk::from_steps(project(self.start), steps).expect("projection keeps continuity")
    }

    /// A negative cycle certificate in `g`: closed, negative, made of arcs of
    /// `g`.
    pub fn certifies_negative_cycle(&self, g: &WeightedDigraph) -> bool {
        self.is_closed() && self.length < 0 && self.is_walk_in(g)
    }
}
