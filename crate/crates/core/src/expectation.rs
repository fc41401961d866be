//! Expected subgraph counts in `G(n, p)` and the expectation threshold `pE`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{builtin_graph, canonical_form, count_labelled_copies, Graph, MAX_PATTERN_VERTICES};

/// Edge-subset enumeration limit for [`compute_pe`] on general patterns.
pub const MAX_PE_EDGES: usize = 16;

/// Natural log of an arbitrarily large integer (`-inf` for zero).
pub fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("edge probability {p} not in [0,1]")))
    }
}

/// `N(f, n) p^e(f)`, the expected number of copies of `f` in `G(n, p)`.
pub fn expected_copies(f: &Graph, n: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    let count = count_labelled_copies(f, n)?;
    let e = f.edge_count() as i32;
    if count.is_zero() {
        return Ok(0.0);
    }
    if e == 0 {
        return Ok(count.to_f64().unwrap_or(f64::INFINITY));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    match count.to_f64() {
        Some(c) if c.is_finite() && c < 1e300 => Ok(c * p.powi(e)),
        _ => Ok((big_ln(&count) + e as f64 * p.ln()).exp()),
    }
}

/// `N^(-1/e)`: the `p` at which the expected count of a pattern with `N`
/// labelled copies and `e` edges reaches one.
pub fn unit_expectation_p(count: &BigUint, edges: usize) -> f64 {
    (-big_ln(count) / edges as f64).exp()
}

/// The expectation threshold of `f` itself, ignoring its subgraphs.
pub fn single_graph_threshold(f: &Graph, n: usize) -> Result<f64> {
    if f.edge_count() == 0 {
        return Err(Error::Degenerate("pattern has no edges".into()));
    }
    if n < f.n() {
        return Err(Error::Domain(format!("n = {n} is smaller than the pattern")));
    }
    Ok(unit_expectation_p(&count_labelled_copies(f, n)?, f.edge_count()))
}

/// Exponent `a` in `single_graph_threshold(f, n) ~ C n^a`: the copy count
/// is a polynomial of degree `v(f)` in `n`, so `a = -v(f)/e(f)`.
pub fn single_graph_exponent(f: &Graph) -> Result<Ratio<i64>> {
    if f.edge_count() == 0 {
        return Err(Error::Degenerate("pattern has no edges".into()));
    }
    Ok(Ratio::new(-(f.n() as i64), f.edge_count() as i64))
}

fn serialize_big<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// One isomorphism class of subgraphs of the pattern.
#[derive(Clone, Debug, Serialize)]
pub struct InventoryEntry {
    /// Isolated vertices removed.
    pub representative: Graph,
    #[serde(serialize_with = "serialize_big")]
    pub labelled_copies: BigUint,
    pub edges: usize,
    pub binding_value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationReport {
    pub n: usize,
    pub inventory: Vec<InventoryEntry>,
    pub pe: f64,
    /// Index into `inventory` of the entry attaining `pe`.
    pub binding: usize,
}

impl ExpectationReport {
    pub fn binding_subgraph(&self) -> &Graph {
        &self.inventory[self.binding].representative
    }

    pub fn binding_entry(&self) -> &InventoryEntry {
        &self.inventory[self.binding]
    }
}

/// `true` when `a` gives a strictly larger `N^(-1/e)` than `b`:
/// `Na^eb < Nb^ea`, compared exactly.
fn binds_tighter(a: &InventoryEntry, b: &InventoryEntry) -> bool {
    let lhs = num_traits::pow(a.labelled_copies.clone(), b.edges);
    let rhs = num_traits::pow(b.labelled_copies.clone(), a.edges);
    lhs < rhs || (lhs == rhs && a.edges < b.edges)
}

fn entry(representative: Graph, n: usize) -> Result<InventoryEntry> {
    let labelled_copies = count_labelled_copies(&representative, n)?;
    let edges = representative.edge_count();
    Ok(InventoryEntry {
        binding_value: unit_expectation_p(&labelled_copies, edges),
        representative,
        labelled_copies,
        edges,
    })
}

/// Iso classes of edge-induced subgraphs with at least one edge.
fn subgraph_classes(f: &Graph) -> Result<Vec<Graph>> {
    let is_matching = (0..f.n()).all(|v| f.degree(v) <= 1);
    if is_matching {
        let k = f.edge_count();
        return (1..=k).map(|j| builtin_graph(&format!("matching_{j}"))).collect();
    }
    if f.n() > MAX_PATTERN_VERTICES {
        return Err(Error::capacity("pattern vertices for pE", MAX_PATTERN_VERTICES, f.n()));
    }
    if f.edge_count() > MAX_PE_EDGES {
        return Err(Error::capacity("pattern edges for pE", MAX_PE_EDGES, f.edge_count()));
    }
    let mut seen = HashMap::new();
    let mut classes = Vec::new();
    for mask in 1u64..1 << f.edge_count() {
        let (sub, _) = f.edge_subgraph(mask);
        let key = canonical_form(&sub)?;
        seen.entry(key).or_insert_with(|| {
            classes.push(sub);
        });
    }
    Ok(classes)
}

/// `pE(f)` at `n`: the largest `N(F', n)^(-1/e(F'))` over subgraphs `F'`
/// of `f` with at least one edge, together with the whole inventory.
///
/// Ties go to the subgraph with fewer edges.
pub fn compute_pe(f: &Graph, n: usize) -> Result<ExpectationReport> {
    if f.edge_count() == 0 {
        return Err(Error::Degenerate("pattern has no edges".into()));
    }
    if n < f.n() {
        return Err(Error::Domain(format!(
            "n = {n} is smaller than the pattern's {} vertices",
            f.n()
        )));
    }
    let mut inventory = subgraph_classes(f)?
        .into_iter()
        .map(|g| entry(g, n))
        .collect::<Result<Vec<_>>>()?;
    inventory.sort_by_key(|e| (e.edges, e.representative.n()));
    let mut binding = 0;
    for i in 1..inventory.len() {
        if binds_tighter(&inventory[i], &inventory[binding]) {
            binding = i;
        }
    }
    Ok(ExpectationReport {
        n,
        pe: inventory[binding].binding_value,
        binding,
        inventory,
    })
}

/// Least-squares line through `(ln n, ln value)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual in log space.
    pub residual: f64,
}

pub fn exponent_fit(pairs: &[(f64, f64)]) -> Result<ExponentFit> {
    if pairs.len() < 3 {
        return Err(Error::Usage(format!(
            "exponent fit needs at least 3 points, got {}",
            pairs.len()
        )));
    }
    if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Domain(format!("non-positive point ({x}, {y})")));
    }
    let pts: Vec<(f64, f64)> = pairs.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all n values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual: (sse / k).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(name: &str) -> Graph {
        builtin_graph(name).unwrap()
    }

    #[test]
    fn expected_counts() {
        assert!((expected_copies(&b("edge"), 10, 0.3).unwrap() - 13.5).abs() < 1e-12);
        let t = expected_copies(&b("triangle"), 100, 0.05).unwrap();
        assert!((t - 20.2125).abs() < 1e-10);
        let pm = expected_copies(&b("matching_2"), 4, 0.5).unwrap();
        assert!((pm - 0.75).abs() < 1e-15);
        assert_eq!(expected_copies(&b("triangle"), 2, 0.5).unwrap(), 0.0);
        assert!(expected_copies(&b("edge"), 3, 1.5).is_err());
    }

    #[test]
    fn big_ln_matches_f64() {
        let x = BigUint::from(161_700u32);
        assert!((big_ln(&x) - 161_700f64.ln()).abs() < 1e-12);
        let huge = BigUint::from(3u32).pow(2000);
        assert!((big_ln(&huge) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn triangle_pe() {
        let r = compute_pe(&b("triangle"), 100).unwrap();
        assert_eq!(r.inventory.len(), 3);
        assert_eq!(r.binding_subgraph().edge_count(), 3);
        assert!((r.pe - 161_700f64.powf(-1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn h_tilde_binds_at_h() {
        let h = b("H");
        for n in [10, 50, 200] {
            let r = compute_pe(&b("H_tilde"), n).unwrap();
            let core = r.binding_subgraph();
            assert_eq!(canonical_form(core).unwrap(), canonical_form(&h).unwrap());
        }
    }

    #[test]
    fn matching_fast_path() {
        let r = compute_pe(&b("matching_30"), 60).unwrap();
        assert_eq!(r.inventory.len(), 30);
        let scaled = 60.0 * r.pe;
        assert!((1.0..=4.0).contains(&scaled), "{scaled}");
    }

    #[test]
    fn pe_errors() {
        assert!(matches!(compute_pe(&Graph::empty(3), 5), Err(Error::Degenerate(_))));
        assert!(matches!(compute_pe(&b("triangle"), 2), Err(Error::Domain(_))));
        assert!(matches!(compute_pe(&b("petersen"), 20), Err(Error::Capacity { .. })));
    }

    #[test]
    fn exponent_fit_basics() {
        let flat = exponent_fit(&[(10.0, 2.0), (20.0, 2.0), (40.0, 2.0)]).unwrap();
        assert!(flat.slope.abs() < 1e-12);
        let line = exponent_fit(&[(2.0, 12.0), (4.0, 3.0), (8.0, 0.75)]).unwrap();
        assert!((line.slope + 2.0).abs() < 1e-12 && line.residual < 1e-12);
        assert!(matches!(exponent_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]), Err(Error::Domain(_))));
        assert!(matches!(exponent_fit(&[(1.0, 1.0), (2.0, 1.0)]), Err(Error::Usage(_))));
    }

    #[test]
    fn single_graph_exponent_of_h_tilde() {
        assert_eq!(single_graph_exponent(&b("H_tilde")).unwrap(), Ratio::new(-5, 6));
        assert_eq!(single_graph_exponent(&b("H")).unwrap(), Ratio::new(-4, 5));
    }
}
