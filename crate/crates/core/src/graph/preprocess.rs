use super::{Arc, WeightedDigraph};

/// Links a preprocessed graph back to the graph it came from. Original
/// vertices keep their ids; fresh vertices are appended after them.
#[derive(Clone, Debug)]
pub struct PreprocessMapping {
    original_n: usize,
    projection: Vec<usize>,
    arc_origin: Vec<Option<usize>>,
    degree_bound: usize,
}

impl PreprocessMapping {
    pub fn original_n(&self) -> usize {
        self.original_n
    }

    /// Original vertex → transformed vertex.
    pub fn to_transformed(&self, v: usize) -> usize {
        assert!(v < self.original_n);
        v
    }

    /// Transformed vertex → the original vertex it stands for.
    pub fn project(&self, v: usize) -> usize {
        self.projection[v]
    }

    /// Original arc carried by a transformed arc; `None` for the zero-length
    /// connector arcs the transform introduces.
    pub fn arc_origin(&self, id: usize) -> Option<usize> {
        self.arc_origin[id]
    }

    /// The `⌈m/n⌉ + 2` bound enforced on every in- and out-degree.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }
}

/// Isolates negative arcs and bounds degrees, preserving all distances
/// between original vertices.
///
/// Each negative arc `(u,v,w)` becomes `u→x:0, x→y:w, y→v:0` with fresh
/// `x, y`, so `x` is a negative vertex whose arc is its only outgoing arc and
/// the only incoming arc of `y`. Vertices whose in- or out-degree exceeds
/// `⌈m/n⌉ + 2` are then split into zero-length chains.
pub fn preprocess(g: &WeightedDigraph) -> (WeightedDigraph, PreprocessMapping) {
    let n = g.n();
    let bound = if n == 0 { 2 } else { g.m().div_ceil(n) + 2 };

    let mut projection: Vec<usize> = (0..n).collect();
    let mut arcs: Vec<Arc> = Vec::with_capacity(g.m());
    let mut origin: Vec<Option<usize>> = Vec::with_capacity(g.m());
    for (id, a) in g.arcs().iter().enumerate() {
        if a.len < 0 {
            let x = projection.len();
            projection.push(a.tail);
            let y = projection.len();
            projection.push(a.head);
            arcs.push(Arc::new(a.tail, x, 0));
            origin.push(None);
            arcs.push(Arc::new(x, y, a.len));
            origin.push(Some(id));
            arcs.push(Arc::new(y, a.head, 0));
            origin.push(None);
        } else {
            arcs.push(*a);
            origin.push(Some(id));
        }
    }

    split(&mut arcs, &mut origin, &mut projection, bound, Side::Out);
    split(&mut arcs, &mut origin, &mut projection, bound, Side::In);

    let n2 = projection.len();
    let out = WeightedDigraph::new(n2, arcs.iter().map(|a| (a.tail, a.head, a.len)))
        .expect("transform keeps endpoints in range");
    let mapping = PreprocessMapping { original_n: n, projection, arc_origin: origin, degree_bound: bound };
    (out, mapping)
}

#[derive(Clone, Copy)]
enum Side {
    Out,
    In,
}

fn split(
    arcs: &mut Vec<Arc>,
    origin: &mut Vec<Option<usize>>,
    projection: &mut Vec<usize>,
    bound: usize,
    side: Side,
) {
    let n = projection.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, a) in arcs.iter().enumerate() {
        let key = match side {
            Side::Out => a.tail,
            Side::In => a.head,
        };
        incident[key].push(id);
    }
    for v in 0..n {
        let ids = std::mem::take(&mut incident[v]);
        if ids.len() <= bound {
            continue;
        }
        // Every chain member except the last keeps bound-1 arcs plus the
        // connector to the next member.
        let mut current = v;
        let mut rest = &ids[..];
        while rest.len() > bound {
            let (here, tail) = rest.split_at(bound - 1);
            for &id in here {
                reattach(&mut arcs[id], current, side);
            }
            let next = projection.len();
            projection.push(projection[v]);
            let connector = match side {
                Side::Out => Arc::new(current, next, 0),
                Side::In => Arc::new(next, current, 0),
            };
            arcs.push(connector);
            origin.push(None);
            current = next;
            rest = tail;
        }
        for &id in rest {
            reattach(&mut arcs[id], current, side);
        }
    }
}

fn reattach(arc: &mut Arc, to: usize, side: Side) {
    match side {
        Side::Out => arc.tail = to,
        Side::In => arc.head = to,
    }
}
