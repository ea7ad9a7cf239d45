//! Exact optimal transport between finitely supported measures.
//!
//! Two routes, both exact:
//! - 1D with quadratic cost: the monotone (quantile) coupling, with dual
//!   potentials reconstructed along the support staircase.
//! - anything else: successive shortest paths on the bipartite flow network,
//!   with node potentials doubling as Kantorovich duals.
//!
//! Every solve certifies itself on exit: primal minus dual value must not
//! exceed the configured duality-gap tolerance (default `1e-7`), and flows
//! must balance the marginals. There is no approximate fallback; opting into
//! a looser tolerance only relaxes the exit certificate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::measure::{CostKind, CostSpec, GridMeasure, Point, MASS_TOL};
use crate::{Error, Result};

/// A finitely supported nonnegative measure: atoms at `points` with `masses`.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    pub points: Vec<Point>,
    pub masses: Vec<f64>,
    pub dim: usize,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<Point>, masses: Vec<f64>, dim: usize) -> Result<Self> {
        if points.len() != masses.len() {
            return Err(Error::Dimension(format!(
                "{} points vs {} masses",
                points.len(),
                masses.len()
            )));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::Invalid("atom masses must be finite and nonnegative".into()));
        }
        Ok(DiscreteMeasure { points, masses, dim })
    }

    /// Atomizes a grid measure: one atom per cell center.
    pub fn from_grid(g: &GridMeasure) -> Self {
        let b = g.domain();
        let points = (0..b.num_cells()).map(|k| b.cell_center(k)).collect();
        DiscreteMeasure {
            points,
            masses: g.masses(),
            dim: b.dim(),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    fn support_size(&self) -> usize {
        self.masses.iter().filter(|m| **m > 0.0).count()
    }
}

/// How to solve a transport problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportMethod {
    /// Quantile coupling for 1D quadratic problems, network flow otherwise.
    Auto,
    /// Force the 1D monotone coupling (errors on 2D or tabulated input).
    Quantile,
    /// Force the network-flow solve.
    Flow,
}

#[derive(Debug, Clone, Copy)]
pub struct TransportOptions {
    pub method: TransportMethod,
    /// Exit certificate: primal value minus dual value must be below this.
    pub gap_tol: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        TransportOptions {
            method: TransportMethod::Auto,
            gap_tol: 1e-7,
        }
    }
}

/// An optimal coupling with its Kantorovich dual certificate.
///
/// `mu_potential[i] + nu_potential[j] <= c(x_i, y_j)` for all pairs, with
/// equality on the support of `plan`; potentials are determined up to a
/// constant shifted between the two sides.
#[derive(Debug, Clone)]
pub struct TransportSolution {
    pub value: f64,
    pub mu_potential: Vec<f64>,
    pub nu_potential: Vec<f64>,
    /// Sparse coupling `(i, j, mass)`, sorted lexicographically.
    pub plan: Vec<(usize, usize, f64)>,
    pub duality_gap: f64,
}

impl TransportSolution {
    /// Max over plan pairs of `phi_i + psi_j - c_ij` (slackness defect) and
    /// max over all pairs of the feasibility violation. Both should be ~0.
    pub fn dual_feasibility_violation(
        &self,
        mu: &DiscreteMeasure,
        nu: &DiscreteMeasure,
        cost: &CostSpec,
    ) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &x) in mu.points.iter().enumerate() {
            for (j, &y) in nu.points.iter().enumerate() {
                let slack = self.mu_potential[i] + self.nu_potential[j] - cost.eval(i, j, x, y);
                worst = worst.max(slack);
            }
        }
        worst
    }
}

/// Exact transport cost `min ∫ c dπ` with the given marginals, plus optimal
/// dual potentials. Marginal totals must agree within [`MASS_TOL`].
pub fn wasserstein(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    cost: &CostSpec,
) -> Result<TransportSolution> {
    wasserstein_with(mu, nu, cost, TransportOptions::default())
}

pub fn wasserstein_with(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    cost: &CostSpec,
    opts: TransportOptions,
) -> Result<TransportSolution> {
    let ta = mu.total_mass();
    let tb = nu.total_mass();
    if (ta - tb).abs() > MASS_TOL {
        return Err(Error::MassMismatch((ta - tb).abs()));
    }
    if mu.support_size() == 0 || nu.support_size() == 0 {
        return Err(Error::Invalid("transport between empty supports is infeasible".into()));
    }
    if let CostKind::Tabulated { rows, cols, .. } = &cost.kind {
        if *rows != mu.points.len() || *cols != nu.points.len() {
            return Err(Error::Dimension(format!(
                "tabulated cost is {rows}x{cols}, supports are {}x{}",
                mu.points.len(),
                nu.points.len()
            )));
        }
    }

    let quantile_ok = mu.dim == 1 && nu.dim == 1 && cost.is_quadratic();
    let method = match opts.method {
        TransportMethod::Auto => {
            if quantile_ok {
                TransportMethod::Quantile
            } else {
                TransportMethod::Flow
            }
        }
        TransportMethod::Quantile => {
            if !quantile_ok {
                return Err(Error::Invalid(
                    "quantile coupling requires 1D supports and quadratic cost".into(),
                ));
            }
            TransportMethod::Quantile
        }
        TransportMethod::Flow => TransportMethod::Flow,
    };

    // Rescale the nu masses so both sides sum to exactly the same total.
    let scale = ta / tb;
    let nu_masses: Vec<f64> = nu.masses.iter().map(|m| m * scale).collect();

    let mut sol = match method {
        TransportMethod::Quantile => quantile_solve(mu, &nu_masses, nu, cost),
        _ => flow_solve(mu, &nu_masses, nu, cost)?,
    };

    // Exit certificate.
    let dual: f64 = mu
        .masses
        .iter()
        .zip(&sol.mu_potential)
        .map(|(m, p)| m * p)
        .chain(nu_masses.iter().zip(&sol.nu_potential).map(|(m, p)| m * p))
        .sum();
    sol.duality_gap = sol.value - dual;
    if !(sol.duality_gap.abs() <= opts.gap_tol) {
        return Err(Error::NonConvergence {
            context: "transport duality certificate".into(),
            iterations: sol.plan.len(),
            residual: sol.duality_gap,
        });
    }
    Ok(sol)
}

/// Convenience wrapper for grid-to-grid transport.
pub fn wasserstein_grid(
    mu: &GridMeasure,
    nu: &GridMeasure,
    cost: &CostSpec,
) -> Result<TransportSolution> {
    wasserstein(
        &DiscreteMeasure::from_grid(mu),
        &DiscreteMeasure::from_grid(nu),
        cost,
    )
}

// ---------------------------------------------------------------------------
// 1D monotone coupling
// ---------------------------------------------------------------------------

/// Monotone coupling of sorted 1D atoms. Optimal for costs of the form
/// h(x - y) with convex h, which covers the quadratic kind.
fn quantile_solve(
    mu: &DiscreteMeasure,
    nu_masses: &[f64],
    nu: &DiscreteMeasure,
    cost: &CostSpec,
) -> TransportSolution {
    let m = mu.points.len();
    let n = nu.points.len();
    let mut order_a: Vec<usize> = (0..m).filter(|&i| mu.masses[i] > 0.0).collect();
    let mut order_b: Vec<usize> = (0..n).filter(|&j| nu_masses[j] > 0.0).collect();
    order_a.sort_by(|&p, &q| mu.points[p][0].total_cmp(&mu.points[q][0]));
    order_b.sort_by(|&p, &q| nu.points[p][0].total_cmp(&nu.points[q][0]));

    let mut plan = Vec::with_capacity(order_a.len() + order_b.len());
    let mut value = 0.0;
    let (mut ia, mut ib) = (0usize, 0usize);
    let mut rem_a = mu.masses[order_a[0]];
    let mut rem_b = nu_masses[order_b[0]];
    loop {
        let (i, j) = (order_a[ia], order_b[ib]);
        let w = rem_a.min(rem_b);
        if w > 0.0 {
            plan.push((i, j, w));
            value += w * cost.eval(i, j, mu.points[i], nu.points[j]);
        }
        rem_a -= w;
        rem_b -= w;
        // w equals one of rem_a/rem_b exactly, so at least one side hits 0.
        let a_done = rem_a <= 1e-15 * mu.masses[i].max(1.0);
        let b_done = rem_b <= 1e-15 * nu_masses[j].max(1.0);
        debug_assert!(a_done || b_done);
        if a_done {
            ia += 1;
            if ia == order_a.len() {
                break;
            }
            rem_a = mu.masses[order_a[ia]];
        }
        if b_done {
            ib += 1;
            if ib == order_b.len() {
                break;
            }
            rem_b = nu_masses[order_b[ib]];
        }
    }

    // Source potentials along the staircase. Consecutive support pairs
    // usually share a side; where the coupling splits into independent blocks
    // (simultaneous exhaustion) the new block is anchored by the binding
    // feasibility constraint against everything already processed.
    let mut phi = vec![f64::NAN; m];
    let mut psi = vec![f64::NAN; n];
    let mut seen_b: Vec<usize> = Vec::new();
    for &(i, j, _) in &plan {
        let c = cost.eval(i, j, mu.points[i], nu.points[j]);
        match (phi[i].is_nan(), psi[j].is_nan()) {
            (false, true) => psi[j] = c - phi[i],
            (true, false) => phi[i] = c - psi[j],
            (true, true) => {
                // New block: anchor at the tightest feasibility constraint
                // against everything already assigned (0 for the first one).
                phi[i] = seen_b
                    .iter()
                    .map(|&jj| cost.eval(i, jj, mu.points[i], nu.points[jj]) - psi[jj])
                    .fold(0.0_f64, f64::min);
                psi[j] = c - phi[i];
            }
            (false, false) => {}
        }
        if !psi[j].is_nan() && !seen_b.contains(&j) {
            seen_b.push(j);
        }
    }
    // c-transform on the target side guarantees dual feasibility everywhere;
    // on support pairs it reproduces the staircase values, so the duality-gap
    // certificate stays tight.
    let support_a: Vec<usize> = (0..m).filter(|&i| !phi[i].is_nan()).collect();
    for j in 0..n {
        psi[j] = support_a
            .iter()
            .map(|&i| cost.eval(i, j, mu.points[i], nu.points[j]) - phi[i])
            .fold(f64::INFINITY, f64::min);
    }
    for i in 0..m {
        if phi[i].is_nan() {
            phi[i] = (0..n)
                .map(|j| cost.eval(i, j, mu.points[i], nu.points[j]) - psi[j])
                .fold(f64::INFINITY, f64::min);
        }
    }

    plan.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    TransportSolution {
        value,
        mu_potential: phi,
        nu_potential: psi,
        plan,
        duality_gap: f64::NAN,
    }
}

// ---------------------------------------------------------------------------
// Successive shortest paths
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (dist, node) through BinaryHeap's max ordering.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Min-cost flow on the complete bipartite transport network by successive
/// shortest paths with node potentials (Dijkstra over reduced costs).
/// Terminates with an exactly optimal basis; the final potentials are the
/// Kantorovich duals.
fn flow_solve(
    mu: &DiscreteMeasure,
    nu_masses: &[f64],
    nu: &DiscreteMeasure,
    cost: &CostSpec,
) -> Result<TransportSolution> {
    let m = mu.points.len();
    let n = nu.points.len();
    let c = |i: usize, j: usize| cost.eval(i, j, mu.points[i], nu.points[j]);

    let mut supply: Vec<f64> = mu.masses.clone();
    let mut demand: Vec<f64> = nu_masses.to_vec();
    let total: f64 = supply.iter().sum();
    let eps = 1e-15 * total.max(1.0);

    // Node potentials pot[0..m] sources, pot[m..m+n] sinks; reduced cost of
    // the forward arc (i, j) is c_ij - pot[i] + pot[m + j] >= 0.
    let mut pot = vec![0.0_f64; m + n];
    for j in 0..n {
        pot[m + j] = -(0..m).map(|i| c(i, j)).fold(f64::INFINITY, f64::min);
    }

    // flows[i] holds (j, mass) pairs with positive mass.
    let mut flows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    // Per-sink list of sources with positive flow, for backward arcs.
    let mut inflow: Vec<Vec<usize>> = vec![Vec::new(); n];

    let mut dist = vec![f64::INFINITY; m + n];
    let mut parent = vec![usize::MAX; m + n];
    let mut done = vec![false; m + n];

    let max_rounds = 20 * (m + n) + 100;
    let mut rounds = 0usize;
    loop {
        let mut remaining = 0.0;
        for s in &supply {
            remaining += s;
        }
        if remaining <= eps * (m as f64).max(1.0) {
            break;
        }
        rounds += 1;
        if rounds > max_rounds {
            return Err(Error::NonConvergence {
                context: "transport network flow".into(),
                iterations: rounds,
                residual: remaining,
            });
        }

        // Multi-source Dijkstra over the residual network.
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        done.iter_mut().for_each(|d| *d = false);
        let mut heap = BinaryHeap::new();
        for (i, &s) in supply.iter().enumerate() {
            if s > eps {
                dist[i] = 0.0;
                heap.push(HeapEntry { dist: 0.0, node: i });
            }
        }
        let mut target = usize::MAX;
        while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
            if done[u] || du > dist[u] {
                continue;
            }
            done[u] = true;
            if u >= m && demand[u - m] > eps {
                target = u - m;
                break;
            }
            if u < m {
                for j in 0..n {
                    let v = m + j;
                    if done[v] {
                        continue;
                    }
                    let rc = (c(u, j) - pot[u] + pot[v]).max(0.0);
                    let nd = du + rc;
                    if nd < dist[v] {
                        dist[v] = nd;
                        parent[v] = u;
                        heap.push(HeapEntry { dist: nd, node: v });
                    }
                }
            } else {
                let j = u - m;
                for &i in &inflow[j] {
                    if done[i] {
                        continue;
                    }
                    // Backward arc: reduced cost 0 on tight flow arcs.
                    let rc = (-c(i, j) - pot[u] + pot[i]).max(0.0);
                    let nd = du + rc;
                    if nd < dist[i] {
                        dist[i] = nd;
                        parent[i] = u;
                        heap.push(HeapEntry { dist: nd, node: i });
                    }
                }
            }
        }
        if target == usize::MAX {
            return Err(Error::Invalid("transport network disconnected".into()));
        }

        // Trace the augmenting path back to a source.
        let mut path = vec![m + target];
        let mut u = m + target;
        while parent[u] != usize::MAX {
            u = parent[u];
            path.push(u);
        }
        path.reverse();
        let source = path[0];

        // Bottleneck: source supply, target demand, backward-arc flows.
        let mut bottleneck = supply[source].min(demand[target]);
        for w in path.windows(2) {
            if w[0] >= m {
                // backward arc sink -> source
                let j = w[0] - m;
                let i = w[1];
                let f = flows[i]
                    .iter()
                    .find(|(jj, _)| *jj == j)
                    .map(|(_, f)| *f)
                    .unwrap_or(0.0);
                bottleneck = bottleneck.min(f);
            }
        }

        // Apply the augmentation.
        supply[source] -= bottleneck;
        demand[target] -= bottleneck;
        for w in path.windows(2) {
            if w[0] < m {
                let (i, j) = (w[0], w[1] - m);
                match flows[i].iter_mut().find(|(jj, _)| *jj == j) {
                    Some(entry) => entry.1 += bottleneck,
                    None => {
                        flows[i].push((j, bottleneck));
                        inflow[j].push(i);
                    }
                }
            } else {
                let (j, i) = (w[0] - m, w[1]);
                let entry = flows[i].iter_mut().find(|(jj, _)| *jj == j).expect("backward arc");
                entry.1 -= bottleneck;
                if entry.1 <= eps {
                    flows[i].retain(|(jj, _)| *jj != j);
                    inflow[j].retain(|&ii| ii != i);
                }
            }
        }

        // Potential update keeps all reduced costs nonnegative.
        let dt = dist[m + target];
        for (u, p) in pot.iter_mut().enumerate() {
            *p += dist[u].min(dt);
        }
    }

    let mut plan = Vec::new();
    let mut value = 0.0;
    for (i, row) in flows.iter().enumerate() {
        for &(j, f) in row {
            if f > 0.0 {
                plan.push((i, j, f));
                value += f * c(i, j);
            }
        }
    }
    plan.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

    let mu_potential: Vec<f64> = pot[..m].to_vec();
    let nu_potential: Vec<f64> = pot[m..].iter().map(|p| -p).collect();
    Ok(TransportSolution {
        value,
        mu_potential,
        nu_potential,
        plan,
        duality_gap: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::BoxDomain;
    use proptest::prelude::*;

    fn grid_1d(n: usize) -> BoxDomain {
        BoxDomain::interval(0.0, 1.0, n).unwrap()
    }

    fn point_mass(x: f64) -> DiscreteMeasure {
        DiscreteMeasure::new(vec![[x, 0.0]], vec![1.0], 1).unwrap()
    }

    #[test]
    fn identical_measures_cost_zero() {
        let g = GridMeasure::uniform(grid_1d(16));
        let c = CostSpec::quadratic(g.domain(), g.domain()).unwrap();
        let sol = wasserstein_grid(&g, &g, &c).unwrap();
        assert!(sol.value.abs() < 1e-14);
        assert!(sol.duality_gap.abs() < 1e-10);
    }

    #[test]
    fn two_point_masses() {
        let mu = point_mass(0.0);
        let nu = point_mass(1.0);
        let x = grid_1d(1);
        let c = CostSpec::quadratic(&x, &x).unwrap();
        let sol = wasserstein(&mu, &nu, &c).unwrap();
        assert!((sol.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn translated_uniform_1d() {
        // uniform[0,1] vs uniform[0.5,1.5]: translation by 0.5 costs 0.125.
        let mu = GridMeasure::uniform(grid_1d(64));
        let nu = GridMeasure::uniform(BoxDomain::interval(0.5, 1.5, 64).unwrap());
        let c = CostSpec::quadratic(mu.domain(), nu.domain()).unwrap();
        let sol = wasserstein_grid(&mu, &nu, &c).unwrap();
        assert!((sol.value - 0.125).abs() < 1e-12, "value = {}", sol.value);
    }

    #[test]
    fn translated_uniform_2d_flow() {
        let mu = GridMeasure::uniform(BoxDomain::rectangle([0.0, 0.0], [1.0, 1.0], [8, 8]).unwrap());
        let nu = GridMeasure::uniform(BoxDomain::rectangle([0.5, 0.0], [1.5, 1.0], [8, 8]).unwrap());
        let c = CostSpec::quadratic(mu.domain(), nu.domain()).unwrap();
        let sol = wasserstein_grid(&mu, &nu, &c).unwrap();
        assert!((sol.value - 0.125).abs() < 1e-12, "value = {}", sol.value);
        assert!(sol.duality_gap.abs() < 1e-9);
    }

    #[test]
    fn flow_matches_quantile_on_1d() {
        let b = grid_1d(24);
        let mu = GridMeasure::normalized(b.clone(), (0..24).map(|k| 1.0 + (k as f64) * 0.1).collect()).unwrap();
        let nu = GridMeasure::normalized(b.clone(), (0..24).map(|k| 2.0 + ((k * 7) % 5) as f64).collect()).unwrap();
        let c = CostSpec::quadratic(&b, &b).unwrap();
        let dm = DiscreteMeasure::from_grid(&mu);
        let dn = DiscreteMeasure::from_grid(&nu);
        let q = wasserstein_with(&dm, &dn, &c, TransportOptions { method: TransportMethod::Quantile, gap_tol: 1e-7 }).unwrap();
        let f = wasserstein_with(&dm, &dn, &c, TransportOptions { method: TransportMethod::Flow, gap_tol: 1e-7 }).unwrap();
        assert!((q.value - f.value).abs() < 1e-9, "quantile {} vs flow {}", q.value, f.value);
    }

    #[test]
    fn duals_are_feasible_and_tight() {
        let b = grid_1d(32);
        let mu = GridMeasure::normalized(b.clone(), (0..32).map(|k| 1.0 + (k % 3) as f64).collect()).unwrap();
        let nu = GridMeasure::normalized(b.clone(), (0..32).map(|k| 1.0 + (k % 5) as f64).collect()).unwrap();
        let c = CostSpec::quadratic(&b, &b).unwrap();
        let dm = DiscreteMeasure::from_grid(&mu);
        let dn = DiscreteMeasure::from_grid(&nu);
        let sol = wasserstein(&dm, &dn, &c).unwrap();
        assert!(sol.dual_feasibility_violation(&dm, &dn, &c) < 1e-9);
        for &(i, j, _) in &sol.plan {
            let slack = c.eval(i, j, dm.points[i], dn.points[j])
                - sol.mu_potential[i]
                - sol.nu_potential[j];
            assert!(slack.abs() < 1e-9, "support pair ({i},{j}) slack {slack}");
        }
    }

    #[test]
    fn mass_mismatch_rejected() {
        let mu = point_mass(0.0);
        let mut nu = point_mass(1.0);
        nu.masses[0] = 0.5;
        let x = grid_1d(1);
        let c = CostSpec::quadratic(&x, &x).unwrap();
        assert!(matches!(wasserstein(&mu, &nu, &c), Err(Error::MassMismatch(_))));
    }

    #[test]
    fn empty_support_rejected() {
        let mu = DiscreteMeasure::new(vec![[0.0, 0.0]], vec![0.0], 1).unwrap();
        let nu = DiscreteMeasure::new(vec![[1.0, 0.0]], vec![0.0], 1).unwrap();
        let x = grid_1d(1);
        let c = CostSpec::quadratic(&x, &x).unwrap();
        assert!(wasserstein(&mu, &nu, &c).is_err());
    }

    #[test]
    fn tabulated_cost_flow() {
        // 2x2 assignment with an off-diagonal optimum.
        let mu = DiscreteMeasure::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![0.5, 0.5], 1).unwrap();
        let nu = mu.clone();
        let c = CostSpec::tabulated(vec![1.0, 0.0, 0.0, 1.0], 2, 2, 1.0).unwrap();
        let sol = wasserstein(&mu, &nu, &c).unwrap();
        assert!(sol.value.abs() < 1e-12);
        assert_eq!(sol.plan.len(), 2);
        assert_eq!(sol.plan[0].0, 0);
        assert_eq!(sol.plan[0].1, 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn quantile_and_flow_agree(
            wa in prop::collection::vec(0.05f64..4.0, 12),
            wb in prop::collection::vec(0.05f64..4.0, 12),
        ) {
            let b = grid_1d(12);
            let mu = GridMeasure::normalized(b.clone(), wa).unwrap();
            let nu = GridMeasure::normalized(b.clone(), wb).unwrap();
            let c = CostSpec::quadratic(&b, &b).unwrap();
            let dm = DiscreteMeasure::from_grid(&mu);
            let dn = DiscreteMeasure::from_grid(&nu);
            let q = wasserstein_with(&dm, &dn, &c, TransportOptions { method: TransportMethod::Quantile, gap_tol: 1e-7 }).unwrap();
            let f = wasserstein_with(&dm, &dn, &c, TransportOptions { method: TransportMethod::Flow, gap_tol: 1e-7 }).unwrap();
            prop_assert!((q.value - f.value).abs() < 1e-9);
        }

        #[test]
        fn value_symmetric_and_zero_iff_equal(
            wa in prop::collection::vec(0.05f64..4.0, 10),
            wb in prop::collection::vec(0.05f64..4.0, 10),
        ) {
            let b = grid_1d(10);
            let mu = GridMeasure::normalized(b.clone(), wa).unwrap();
            let nu = GridMeasure::normalized(b.clone(), wb).unwrap();
            let c = CostSpec::quadratic(&b, &b).unwrap();
            let fwd = wasserstein_grid(&mu, &nu, &c).unwrap().value;
            let bwd = wasserstein_grid(&nu, &mu, &c).unwrap().value;
            prop_assert!((fwd - bwd).abs() < 1e-10);
            let l1 = mu.l1_distance(&nu).unwrap();
            if l1 < 1e-12 {
                prop_assert!(fwd.abs() < 1e-10);
            }
            if fwd.abs() < 1e-14 {
                prop_assert!(l1 < 1e-6);
            }
        }
    }
}
