use super::ForgeError;
use crate::graph::{Arc, WeightedDigraph};
use crate::hop::{hop_distances, Direction, SourceSpec};
use crate::sandwich::ceil_log2;

/// One level `V_i` with its induced graph `G_i` and out-cut `∂⁺(V_i)`.
#[derive(Clone, Debug)]
pub struct Envelope {
    pub level: usize,
    /// `V_i`, ascending global ids.
    pub vertices: Vec<usize>,
    /// `G_i` on local ids `0..|V_i|`, in the order of `vertices`.
    pub graph: WeightedDigraph,
    /// Global → local id, `usize::MAX` outside `V_i`.
    pub local: Vec<usize>,
    /// `∂⁺(V_i)` with global endpoints.
    pub boundary: Vec<Arc>,
}

impl Envelope {
    pub fn contains(&self, v: usize) -> bool {
        self.local[v] != usize::MAX
    }
}

#[derive(Clone, Debug)]
pub struct EnvelopeFamily {
    h: usize,
    set: Vec<usize>,
    heads: Vec<usize>,
    /// Levels `1..=L` stored at indices `0..L`.
    levels: Vec<Envelope>,
}

impl EnvelopeFamily {
    pub fn h(&self) -> usize {
        self.h
    }

    /// `L = ⌈log₂ h⌉ + 1`.
    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    /// `V_i` for `1 ≤ i ≤ L`.
    pub fn level(&self, i: usize) -> &Envelope {
        &self.levels[i - 1]
    }

    /// `U`, ascending.
    pub fn set(&self) -> &[usize] {
        &self.set
    }

    /// `Ū`, ascending.
    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    /// The whole graph `G_U` (level `L`).
    pub fn graph(&self) -> &WeightedDigraph {
        &self.levels.last().unwrap().graph
    }
}

/// `V_i = U ∪ Ū ∪ (2^i-hop negative reach of U)` for `i < L`, `V_L = V`.
///
/// `g_u` must already be restricted to `U`. With `enforce_sizes` the family
/// is rejected when some `|V_i \ U|` exceeds `n·2^i/h`.
pub fn build_envelopes(
    g_u: &WeightedDigraph,
    set: &[usize],
    h: usize,
    enforce_sizes: bool,
) -> Result<EnvelopeFamily, ForgeError> {
    let n = g_u.n();
    let h = h.max(1);
    let big_l = ceil_log2(h) + 1;
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    let heads = g_u.heads_of(&set);

    let rounds = if big_l > 1 { 1usize << (big_l - 1) } else { 0 };
    let table = hop_distances(g_u, &SourceSpec::set(&set, Direction::Forward), rounds, true);

    let mut levels = Vec::with_capacity(big_l);
    for i in 1..big_l {
        let reach = table.round(1 << i);
        let mut member = vec![false; n];
        for &v in set.iter().chain(&heads) {
            member[v] = true;
        }
        for (v, d) in reach.iter().enumerate() {
            if d.is_negative() {
                member[v] = true;
            }
        }
        let vertices: Vec<usize> = (0..n).filter(|&v| member[v]).collect();
        if enforce_sizes {
            let outside = vertices.len() - set.len();
            let bound = (n as u128 * (1u128 << i)).div_ceil(h as u128) as usize;
            if outside > bound {
                return Err(ForgeError::EnvelopeTooLarge { level: i, size: outside, bound });
            }
        }
        levels.push(envelope(g_u, i, vertices));
    }
    levels.push(envelope(g_u, big_l, (0..n).collect()));
    for w in levels.windows(2) {
        debug_assert!(w[0].vertices.iter().all(|&v| w[1].contains(v)), "envelopes must nest");
    }
    Ok(EnvelopeFamily { h, set, heads, levels })
}

fn envelope(g: &WeightedDigraph, level: usize, vertices: Vec<usize>) -> Envelope {
    let (graph, local) = g.induced(&vertices);
    let boundary = g
        .arcs()
        .iter()
        .filter(|a| local[a.tail] != usize::MAX && local[a.head] == usize::MAX)
        .copied()
        .collect();
    Envelope { level, vertices, graph, local, boundary }
}
