//! Dense all-pairs shortest-path metrics.

use crate::scalar::Scalar;

/// Symmetric distance matrix over `0..n`; unreachable pairs are `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric<T> {
    n: usize,
    dist: Vec<T>,
}

impl<T: Scalar> Metric<T> {
    /// Weighted shortest-path distances over undirected `(u, v, length)` edges
    /// (Floyd–Warshall). Parallel edges keep the shortest length.
    pub fn shortest_paths(n: usize, edges: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut dist = vec![T::infinity(); n * n];
        for i in 0..n {
            dist[i * n + i] = T::zero();
        }
        for (u, v, w) in edges {
            if u == v {
                continue;
            }
            if w < dist[u * n + v] {
                dist[u * n + v] = w;
                dist[v * n + u] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if dik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let through = dik + dist[k * n + j];
                    if through < dist[i * n + j] {
                        dist[i * n + j] = through;
                    }
                }
            }
        }
        Metric { n, dist }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let dist = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Metric { n, dist }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.dist[i * self.n + j]
    }

    pub fn is_finite(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_beats_long_edge() {
        let m = Metric::shortest_paths(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]);
        assert_eq!(m.get(0, 2), 2.0);
        assert_eq!(m.get(2, 0), 2.0);
    }

    #[test]
    fn disconnected_pairs_are_infinite() {
        let m = Metric::shortest_paths(3, [(0, 1, 2.0)]);
        assert!(!m.is_finite(0, 2));
        assert_eq!(m.get(1, 1), 0.0);
    }
}
