//! Exact nearest-neighbour search in k dimensions.
//!
//! Queries return the closest point at a strictly positive Euclidean distance,
//! so a query point that belongs to the indexed cloud never matches itself and
//! exact duplicates are skipped.

const LEAF_SIZE: usize = 12;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Static kd-tree over row-major points.
#[derive(Debug, Clone)]
pub struct KdTree {
    dim: usize,
    /// Points reordered so every leaf is a contiguous block.
    points: Vec<f64>,
    /// Original index of each reordered point.
    index: Vec<usize>,
    nodes: Vec<Node>,
}

impl KdTree {
    /// Builds a tree over `points`, laid out row-major with `dim` coordinates
    /// per point.
    ///
    /// # Panics
    /// If `dim` is zero or does not divide `points.len()`.
    pub fn new(points: &[f64], dim: usize) -> Self {
        assert!(
            dim > 0 && points.len().is_multiple_of(dim),
            "ragged point buffer"
        );
        let n = points.len() / dim;
        let mut order: Vec<usize> = (0..n).collect();
        let mut nodes = Vec::new();
        if n > 0 {
            build(points, dim, &mut order, 0, n, &mut nodes);
        }
        let mut reordered = Vec::with_capacity(points.len());
        for &i in &order {
            reordered.extend_from_slice(&points[i * dim..(i + 1) * dim]);
        }
        Self {
            dim,
            points: reordered,
            index: order,
            nodes,
        }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nearest point at strictly positive distance from `query`, as
    /// `(original index, squared distance)`.
    pub fn nearest_positive(&self, query: &[f64]) -> Option<(usize, f64)> {
        debug_assert_eq!(query.len(), self.dim);
        if self.nodes.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        let mut stack: Vec<(usize, f64)> = vec![(0, 0.0)];
        while let Some((node, bound)) = stack.pop() {
            if bound >= best.1 {
                continue;
            }
            match self.nodes[node] {
                Node::Leaf { start, end } => {
                    for slot in start..end {
                        let p = &self.points[slot * self.dim..(slot + 1) * self.dim];
                        let d2 = dist2(p, query);
                        if d2 > 0.0 && d2 < best.1 {
                            best = (self.index[slot], d2);
                        }
                    }
                }
                Node::Split {
                    axis,
                    value,
                    left,
                    right,
                } => {
                    let diff = query[axis] - value;
                    let (near, far) = if diff < 0.0 {
                        (left, right)
                    } else {
                        (right, left)
                    };
                    stack.push((far, diff * diff));
                    stack.push((near, bound));
                }
            }
        }
        (best.1.is_finite()).then_some(best)
    }
}

fn build(
    points: &[f64],
    dim: usize,
    order: &mut [usize],
    start: usize,
    end: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let id = nodes.len();
    if end - start <= LEAF_SIZE {
        nodes.push(Node::Leaf { start, end });
        return id;
    }
    let coord = |i: usize, axis: usize| points[i * dim + axis];
    let axis = (0..dim)
        .map(|axis| {
            let (lo, hi) = order[start..end].iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), &i| {
                    let v = coord(i, axis);
                    (lo.min(v), hi.max(v))
                },
            );
            (axis, hi - lo)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(axis, _)| axis)
        .unwrap_or(0);
    let mid = (end - start) / 2;
    order[start..end]
        .select_nth_unstable_by(mid, |&a, &b| coord(a, axis).total_cmp(&coord(b, axis)));
    let value = coord(order[start + mid], axis);
    nodes.push(Node::Leaf { start, end });
    let left = build(points, dim, order, start, start + mid, nodes);
    let right = build(points, dim, order, start + mid, end, nodes);
    nodes[id] = Node::Split {
        axis,
        value,
        left,
        right,
    };
    id
}

#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
