//! Exact max-flow (Edmonds-Karp on a dense residual matrix) and feasibility of
//! flows with lower bounds. Used by the grid oracle to split tied goods.

use std::collections::VecDeque;

use crate::scalar::Scalar;

pub(crate) struct Network<T> {
    cap: Vec<Vec<T>>,
}

impl<T: Scalar> Network<T> {
    pub fn new(nodes: usize) -> Self {
        Self {
            cap: vec![vec![T::zero(); nodes]; nodes],
        }
    }

    pub fn add(&mut self, u: usize, v: usize, c: T) {
        self.cap[u][v] = self.cap[u][v].clone() + c;
    }

    /// Returns the flow value and the per-edge flow matrix.
    pub fn max_flow(&self, s: usize, t: usize) -> (T, Vec<Vec<T>>) {
        let n = self.cap.len();
        let mut res = self.cap.clone();
        let mut total = T::zero();
        loop {
            let mut prev = vec![usize::MAX; n];
            prev[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if prev[v] == usize::MAX && res[u][v].is_positive() {
                        prev[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if prev[t] == usize::MAX {
                break;
            }
            let mut bottleneck: Option<T> = None;
            let mut v = t;
            while v != s {
                let u = prev[v];
                let c = res[u][v].clone();
                bottleneck = Some(match bottleneck {
                    Some(b) if b <= c => b,
                    _ => c,
                });
                v = u;
            }
            let b = bottleneck.expect("path has at least one edge");
            let mut v = t;
            while v != s {
                let u = prev[v];
                res[u][v] = res[u][v].clone() - b.clone();
                res[v][u] = res[v][u].clone() + b.clone();
                v = u;
            }
            total = total + b;
        }
        let flow = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| {
                        let f = self.cap[u][v].clone() - res[u][v].clone();
                        if f.is_positive() {
                            f
                        } else {
                            T::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        (total, flow)
    }
}

/// An edge `u -> v` carrying flow in `[lower, upper]`.
pub(crate) struct BoundedEdge<T> {
    pub u: usize,
    pub v: usize,
    pub lower: T,
    pub upper: T,
}

/// Finds a feasible `s -> t` flow respecting every edge's bounds, or `None`.
/// The result lists the flow on each input edge, in input order.
pub(crate) fn feasible_flow<T: Scalar>(
    nodes: usize,
    s: usize,
    t: usize,
    edges: &[BoundedEdge<T>],
) -> Option<Vec<T>> {
    let big = edges
        .iter()
        .fold(T::one(), |acc, e| acc + e.upper.clone());
    let (ss, tt) = (nodes, nodes + 1);
    let mut net = Network::new(nodes + 2);
    let mut excess = vec![T::zero(); nodes];
    for e in edges {
        net.add(e.u, e.v, e.upper.clone() - e.lower.clone());
        excess[e.v] = excess[e.v].clone() + e.lower.clone();
        excess[e.u] = excess[e.u].clone() - e.lower.clone();
    }
    net.add(t, s, big);
    let mut need = T::zero();
    for (v, ex) in excess.iter().enumerate() {
        if ex.is_positive() {
            net.add(ss, v, ex.clone());
            need = need + ex.clone();
        } else if ex.is_negative() {
            net.add(v, tt, -ex.clone());
        }
    }
    let (value, flow) = net.max_flow(ss, tt);
    if value != need {
        return None;
    }
    // Parallel input edges share one matrix cell; hand the cell's flow out in order.
    let mut pool: Vec<Vec<T>> = flow;
    Some(
        edges
            .iter()
            .map(|e| {
                let room = e.upper.clone() - e.lower.clone();
                let avail = pool[e.u][e.v].clone();
                let take = if avail <= room { avail } else { room };
                pool[e.u][e.v] = pool[e.u][e.v].clone() - take.clone();
                e.lower.clone() + take
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational as R;

    fn r(p: i64, q: i64) -> R {
        R::from_frac(p, q)
    }

    #[test]
    fn diamond_max_flow() {
        let mut net = Network::new(4);
        net.add(0, 1, r(1, 2));
        net.add(0, 2, r(1, 1));
        net.add(1, 3, r(1, 1));
        net.add(2, 3, r(1, 3));
        net.add(1, 2, r(1, 1));
        assert_eq!(net.max_flow(0, 3).0, r(5, 6));
    }

    #[test]
    fn lower_bounds_respected() {
        let edges = [
            BoundedEdge { u: 0, v: 1, lower: r(1, 1), upper: r(1, 1) },
            BoundedEdge { u: 1, v: 2, lower: r(0, 1), upper: r(2, 1) },
            BoundedEdge { u: 1, v: 3, lower: r(1, 2), upper: r(1, 1) },
            BoundedEdge { u: 2, v: 4, lower: r(0, 1), upper: r(5, 1) },
            BoundedEdge { u: 3, v: 4, lower: r(0, 1), upper: r(5, 1) },
        ];
        let f = feasible_flow(5, 0, 4, &edges).unwrap();
        assert_eq!(f[0], r(1, 1));
        assert!(f[2] >= r(1, 2));
        assert_eq!(f[1].clone() + f[2].clone(), r(1, 1));

        let infeasible = [
            BoundedEdge { u: 0, v: 1, lower: r(1, 1), upper: r(1, 1) },
            BoundedEdge { u: 1, v: 2, lower: r(0, 1), upper: r(1, 2) },
        ];
        assert!(feasible_flow(3, 0, 2, &infeasible).is_none());
    }
}
