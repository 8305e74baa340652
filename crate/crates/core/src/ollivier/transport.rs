//! Exact discrete optimal transport (Wasserstein-1).
//!
//! The transportation problem is solved as a min-cost flow by successive
//! shortest augmenting paths: a super source feeds every supply point, every
//! demand point drains into a super sink, and supply-to-demand arcs are
//! uncapacitated with cost `d(m, n)`. Residual backward arcs carry negative
//! cost, so path search uses Bellman–Ford.

use serde::{Deserialize, Serialize};

use super::ProbabilityMeasure;
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::scalar::Scalar;

/// Joint measure realizing a transport: `(from, to, mass)` over node indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan<T> {
    pub entries: Vec<(usize, usize, T)>,
    pub cost: T,
}

impl<T: Scalar> TransportPlan<T> {
    /// Largest deviation of the plan's marginals from `source` and `target`.
    pub fn marginal_error(&self, source: &ProbabilityMeasure<T>, target: &ProbabilityMeasure<T>) -> T {
        let mut worst = T::zero();
        for (node, mass) in source.iter() {
            let out: T = self.entries.iter().filter(|e| e.0 == node).map(|e| e.2).sum();
            worst = worst.max((out - mass).abs());
        }
        for (node, mass) in target.iter() {
            let inflow: T = self.entries.iter().filter(|e| e.1 == node).map(|e| e.2).sum();
            worst = worst.max((inflow - mass).abs());
        }
        let stray = self
            .entries
            .iter()
            .filter(|e| source.mass(e.0) == T::zero() || target.mass(e.1) == T::zero())
            .map(|e| e.2)
            .sum::<T>();
        worst.max(stray)
    }
}

/// Minimum-cost flow for a balanced transportation problem. Returns the flow matrix.
pub(crate) fn min_cost_transport<T: Scalar>(supply: &[T], demand: &[T], cost: &[Vec<T>]) -> Vec<Vec<T>> {
    let (m, n) = (supply.len(), demand.len());
    let eps = T::mass_epsilon();
    let mut flow = vec![vec![T::zero(); n]; m];
    let mut left_supply = supply.to_vec();
    let mut left_demand = demand.to_vec();

    let max_rounds = 4 * (m + n) * (m + n) + 16;
    for _ in 0..max_rounds {
        if !left_supply.iter().any(|&s| s > eps) || !left_demand.iter().any(|&d| d > eps) {
            break;
        }

        let inf = T::infinity();
        let mut dist_s: Vec<T> = left_supply.iter().map(|&s| if s > eps { T::zero() } else { inf }).collect();
        let mut dist_d = vec![inf; n];
        let mut via_d = vec![usize::MAX; n]; // supply node feeding j
        let mut via_s: Vec<Option<usize>> = vec![None; m]; // demand node cancelling into i
        let improves = |cand: T, cur: T| cand < cur - T::epsilon() * T::lit(16.0) * (T::one() + cur.abs().min(T::max_value()));

        for _ in 0..=(m + n) {
            let mut changed = false;
            for i in 0..m {
                if dist_s[i].is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let cand = dist_s[i] + cost[i][j];
                    if dist_d[j].is_infinite() || improves(cand, dist_d[j]) {
                        dist_d[j] = cand;
                        via_d[j] = i;
                        changed = true;
                    }
                }
            }
            for j in 0..n {
                if dist_d[j].is_infinite() {
                    continue;
                }
                for i in 0..m {
                    if flow[i][j] <= eps {
                        continue;
                    }
                    let cand = dist_d[j] - cost[i][j];
                    if dist_s[i].is_infinite() || improves(cand, dist_s[i]) {
                        dist_s[i] = cand;
                        via_s[i] = Some(j);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let Some(sink) = (0..n)
            .filter(|&j| left_demand[j] > eps && dist_d[j].is_finite())
            .min_by(|&a, &b| dist_d[a].partial_cmp(&dist_d[b]).unwrap_or(std::cmp::Ordering::Equal))
        else {
            break;
        };

        // Walk back to a supply node with remaining mass.
        let mut forward = Vec::new();
        let mut backward = Vec::new();
        let mut j = sink;
        let mut origin = None;
        for _ in 0..=(m + n) {
            let i = via_d[j];
            forward.push((i, j));
            match via_s[i] {
                Some(prev) => {
                    backward.push((i, prev));
                    j = prev;
                }
                None => {
                    origin = Some(i);
                    break;
                }
            }
        }
        let Some(origin) = origin else { break };

        let mut delta = left_supply[origin].min(left_demand[sink]);
        for &(i, j) in &backward {
            delta = delta.min(flow[i][j]);
        }
        if !(delta > T::zero()) {
            break;
        }
        for &(i, j) in &forward {
            flow[i][j] = flow[i][j] + delta;
        }
        for &(i, j) in &backward {
            flow[i][j] = flow[i][j] - delta;
            if flow[i][j] <= eps {
                flow[i][j] = T::zero();
            }
        }
        left_supply[origin] = left_supply[origin] - delta;
        left_demand[sink] = left_demand[sink] - delta;
    }
    flow
}

/// Wasserstein-1 distance between two measures over the nodes of `metric`,
/// with an optimal plan attaining it.
pub fn wasserstein_w1<T: Scalar>(
    source: &ProbabilityMeasure<T>,
    target: &ProbabilityMeasure<T>,
    metric: &Metric<T>,
) -> Result<(T, TransportPlan<T>)> {
    let from: Vec<(usize, T)> = source.iter().collect();
    let to: Vec<(usize, T)> = target.iter().collect();
    let mut cost = vec![vec![T::zero(); to.len()]; from.len()];
    for (a, &(m, _)) in from.iter().enumerate() {
        for (b, &(n, _)) in to.iter().enumerate() {
            if m >= metric.len() || n >= metric.len() || !metric.is_finite(m, n) {
                return Err(Error::InfiniteDistanceInSupport(m, n));
            }
            cost[a][b] = metric.get(m, n);
        }
    }
    let supply: Vec<T> = from.iter().map(|p| p.1).collect();
    let demand: Vec<T> = to.iter().map(|p| p.1).collect();
    let flow = min_cost_transport(&supply, &demand, &cost);

    let mut entries = Vec::new();
    let mut total = T::zero();
    for (a, row) in flow.iter().enumerate() {
        for (b, &f) in row.iter().enumerate() {
            if f > T::zero() {
                entries.push((from[a].0, to[b].0, f));
                total = total + f * cost[a][b];
            }
        }
    }
    Ok((total, TransportPlan { entries, cost: total }))
}
