use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{EnvelopeFamily, EstimateTable, ForgeError};
use crate::dist::Length;
use crate::graph::{Arc, PotentialVector, WeightedDigraph};
use crate::hop::{johnson, JohnsonOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArcKind {
    /// Nonnegative arc of some `G_j⁺` copy.
    Base,
    /// Negative arc of `G_1` (level-1 reducer only).
    Negative,
    /// `(s_i, t_j)` of length `δ_j(s, t)`.
    Shortcut,
    /// `(x_j, y_i)` for a boundary arc `(x, y)` of `V_j`.
    Exit,
    /// `(v_j, v_i)` of length 0; the only hop arcs after reweighting.
    SelfArc,
}

impl ArcKind {
    fn label(self) -> &'static str {
        match self {
            ArcKind::Base => "base",
            ArcKind::Negative => "negative",
            ArcKind::Shortcut => "shortcut",
            ArcKind::Exit => "exit",
            ArcKind::SelfArc => "self",
        }
    }
}

/// A reducer `H_i` for `G_i`, stored already reweighted by its potentials.
#[derive(Clone, Debug)]
pub struct ReducerGraph {
    pub(super) level: usize,
    /// Lowest level index (1 for bootstrapped reducers, 0 for layered ones).
    pub(super) first_level: usize,
    /// Level holding the embedding `v ↦ v_base`.
    pub(super) base_level: usize,
    /// `(vertex, level)` per copy; copies of one level are contiguous.
    pub(super) copies: Vec<(usize, usize)>,
    /// `offsets[j - first_level]` is the first copy of level `j`.
    pub(super) offsets: Vec<usize>,
    /// Per level, global vertex → local index.
    pub(super) locals: Vec<Vec<usize>>,
    pub(super) kinds: Vec<ArcKind>,
    pub(super) raw: Vec<Length>,
    pub(super) graph: WeightedDigraph,
    pub(super) potentials: PotentialVector,
}

impl ReducerGraph {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn copies(&self) -> &[(usize, usize)] {
        &self.copies
    }

    /// Copy id of `v_j`, if level `j` exists and holds `v`.
    pub fn copy(&self, v: usize, j: usize) -> Option<usize> {
        if j < self.first_level || j > self.level {
            return None;
        }
        let k = j - self.first_level;
        let local = *self.locals[k].get(v)?;
        (local != usize::MAX).then(|| self.offsets[k] + local)
    }

    /// The base embedding: `v ↦ v_i` for `H_i`, `v ↦ v_0` for layered
    /// reducers.
    pub fn base(&self, v: usize) -> Option<usize> {
        self.copy(v, self.base_level)
    }

    /// The reweighted graph `H_φ`; hop flags mark the self arcs (or the
    /// negative arcs of `G_1` at level 1).
    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn potentials(&self) -> &PotentialVector {
        &self.potentials
    }

    pub fn kind(&self, id: usize) -> ArcKind {
        self.kinds[id]
    }

    /// Length before reweighting.
    pub fn raw_len(&self, id: usize) -> Length {
        self.raw[id]
    }

    pub fn count(&self, kind: ArcKind) -> usize {
        self.kinds.iter().filter(|&&k| k == kind).count()
    }

    /// Structured text dump, 0-based ids:
    ///
    /// ```text
    /// reducer level <i> copies <c> arcs <m>
    /// copy <id> vertex <v> level <j> potential <φ>
    /// arc <tail> <head> <kind> raw <ℓ> reweighted <ℓ_φ>
    /// ```
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "reducer level {} copies {} arcs {}", self.level, self.copies.len(), self.kinds.len()).unwrap();
        for (id, &(v, j)) in self.copies.iter().enumerate() {
            writeln!(out, "copy {id} vertex {v} level {j} potential {}", self.potentials[id]).unwrap();
        }
        for (id, a) in self.graph.arcs().iter().enumerate() {
            writeln!(out, "arc {} {} {} raw {} reweighted {}", a.tail, a.head, self.kinds[id].label(), self.raw[id], a.len)
                .unwrap();
        }
        out
    }
}

/// Builds `H_i` from the estimate tables of levels `1..i`.
///
/// `H_1` is `G_1` itself. For `i > 1` the potentials are Johnson potentials
/// of `H'` (no self arcs) with hop budget 1; property (3) of the estimates
/// makes one round enough, and a failure to stabilize is reported.
pub fn reducer_from_estimates(env: &EnvelopeFamily, tables: &[EstimateTable], i: usize) -> Result<ReducerGraph, ForgeError> {
    assert!(i >= 1 && i <= env.levels(), "level {i} out of range");
    let locals: Vec<Vec<usize>> = (1..=i).map(|j| env.level(j).local.clone()).collect();
    if i == 1 {
        let e = env.level(1);
        let g = e.graph.clone();
        let kinds = (0..g.m()).map(|id| if g.is_hop(id) { ArcKind::Negative } else { ArcKind::Base }).collect();
        let raw = g.arcs().iter().map(|a| a.len).collect();
        return Ok(ReducerGraph {
            level: 1,
            first_level: 1,
            base_level: 1,
            copies: e.vertices.iter().map(|&v| (v, 1)).collect(),
            offsets: vec![0],
            locals,
            kinds,
            raw,
            potentials: PotentialVector::zeros(g.n()),
            graph: g,
        });
    }
    assert!(tables.len() >= i - 1, "need estimates for levels below {i}");

    let mut copies = Vec::new();
    let mut offsets = Vec::with_capacity(i);
    for j in 1..=i {
        offsets.push(copies.len());
        copies.extend(env.level(j).vertices.iter().map(|&v| (v, j)));
    }
    let copy = |v: usize, j: usize| -> usize {
        let l = locals[j - 1][v];
        debug_assert!(l != usize::MAX, "vertex {v} not in V_{j}");
        offsets[j - 1] + l
    };

    let mut arcs = Vec::new();
    let mut kinds = Vec::new();
    for j in 1..=i {
        let e = env.level(j);
        for (id, a) in e.graph.arcs().iter().enumerate() {
            if !e.graph.is_hop(id) {
                arcs.push(Arc::new(offsets[j - 1] + a.tail, offsets[j - 1] + a.head, a.len));
                kinds.push(ArcKind::Base);
            }
        }
    }
    let vi = env.level(i);
    for j in 1..i {
        let table = &tables[j - 1];
        assert_eq!(table.level, j, "estimate tables must be ordered by level");
        for (si, &s) in env.set().iter().enumerate() {
            for (ti, &t) in env.heads().iter().enumerate() {
                if let Some(d) = table.get(si, ti).finite() {
                    arcs.push(Arc::new(copy(s, i), copy(t, j), d));
                    kinds.push(ArcKind::Shortcut);
                }
            }
        }
        for a in &env.level(j).boundary {
            if vi.contains(a.head) {
                arcs.push(Arc::new(copy(a.tail, j), copy(a.head, i), a.len));
                kinds.push(ArcKind::Exit);
            }
        }
    }
    let without_self = arcs.len();
    for j in 1..i {
        for &v in &env.level(j).vertices {
            arcs.push(Arc::new(copy(v, j), copy(v, i), 0));
            kinds.push(ArcKind::SelfArc);
        }
    }

    let n_copies = copies.len();
    let h_prime = WeightedDigraph::new(n_copies, arcs[..without_self].iter().map(|a| (a.tail, a.head, a.len)))
        .expect("copy ids in range");
    let phi = match johnson(&h_prime, 1) {
        JohnsonOutcome::Potentials(phi) => phi,
        _ => return Err(ForgeError::Unstable { level: i }),
    };
    for &v in &vi.vertices {
        assert_eq!(phi[copy(v, i)], 0, "base copy of {v} has nonzero potential");
    }

    let raw: Vec<Length> = arcs.iter().map(|a| a.len).collect();
    let hop: Vec<bool> = kinds.iter().map(|&k| k == ArcKind::SelfArc).collect();
    let graph = WeightedDigraph::with_hop_flags(n_copies, arcs, hop)
        .expect("copy ids in range")
        .reweighted(&phi);
    debug_assert!(
        (0..graph.m()).all(|id| graph.is_hop(id) || graph.arc(id).len >= 0),
        "reweighted reducer has a negative non-self arc"
    );
    Ok(ReducerGraph { level: i, first_level: 1, base_level: i, copies, offsets, locals, kinds, raw, graph, potentials: phi })
}
