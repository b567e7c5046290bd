//! Named graphs: the point, ADE chains and stars.

use crate::graph::{VertexId, WeightedGraph};

/// `{0:(0,1)}`.
pub fn point() -> WeightedGraph {
    WeightedGraph::point()
}

type Parts = (Vec<(VertexId, u32, u32)>, Vec<(VertexId, VertexId)>);

fn chain(n: u32) -> Parts {
    let vertices = (0..n).map(|i| (i, 0, 2)).collect();
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    (vertices, edges)
}

/// Path of `n` vertices `(0,2)`, ids `0..n`.
pub fn a_n(n: u32) -> WeightedGraph {
    let (v, e) = chain(n);
    WeightedGraph::from_parts(&v, &e).expect("chain is simple")
}

/// Path `0..n-1` with vertex `n-1` joined to vertex `branch`.
fn branched(n: u32, branch: VertexId) -> WeightedGraph {
    let (mut v, mut e) = chain(n - 1);
    v.push((n - 1, 0, 2));
    e.push((branch, n - 1));
    WeightedGraph::from_parts(&v, &e).expect("branched chain is simple")
}

/// `n >= 4`.
pub fn d_n(n: u32) -> WeightedGraph {
    assert!(n >= 4, "D_n needs n >= 4");
    branched(n, 1)
}

/// `n` in `6..=8`.
pub fn e_n(n: u32) -> WeightedGraph {
    assert!((6..=8).contains(&n), "E_n needs 6 <= n <= 8");
    branched(n, 2)
}

/// Center `0:(0,center)` with `leaves` vertices `(0,1)`, ids `1..=leaves`.
pub fn star(center: u32, leaves: u32) -> WeightedGraph {
    let mut v = vec![(0, 0, center)];
    v.extend((1..=leaves).map(|i| (i, 0, 1)));
    let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    WeightedGraph::from_parts(&v, &e).expect("star is simple")
}

/// Parses `point`, `A<n>`, `D<n>`, `E6`..`E8` and `star-<C>-<K>`.
pub fn by_name(name: &str) -> Option<WeightedGraph> {
    if name == "point" {
        return Some(point());
    }
    if let Some(rest) = name.strip_prefix("star-") {
        let (c, k) = rest.split_once('-')?;
        let (c, k) = (c.parse().ok()?, k.parse().ok()?);
        return (c >= 1).then(|| star(c, k));
    }
    if !name.is_char_boundary(1) {
        return None;
    }
    let (family, n) = name.split_at(1);
    let n: u32 = n.parse().ok()?;
    match family {
        "A" if n >= 1 => Some(a_n(n)),
        "D" if n >= 4 => Some(d_n(n)),
        "E" if (6..=8).contains(&n) => Some(e_n(n)),
        _ => None,
    }
}

/// The names used by the round-trip checks.
pub fn standard_names() -> Vec<String> {
    let mut out = vec!["point".to_string()];
    out.extend((1..=9).map(|n| format!("A{n}")));
    out.extend((4..=8).map(|n| format!("D{n}")));
    out.extend((6..=8).map(|n| format!("E{n}")));
    out.extend(["star-2-1", "star-3-2", "star-4-3", "star-5-4"].map(String::from));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let d4 = d_n(4);
        assert_eq!(d4.valency(1).unwrap(), 3);
        assert_eq!(d4.edge_count(), 3);
        let e8 = e_n(8);
        assert_eq!(e8.valency(2).unwrap(), 3);
        assert!(e8.has_edge(2, 7));
        assert_eq!(e8.intersection_matrix().determinant(), 1.into());
        assert_eq!(a_n(5).intersection_matrix().determinant(), (-6).into());
        let s = star(3, 2);
        assert_eq!(s.valency(0).unwrap(), 2);
        assert_eq!(s.weight_sum(), 5);
    }

    #[test]
    fn names() {
        for name in standard_names() {
            assert!(by_name(&name).is_some(), "{name}");
        }
        for bad in ["", "A0", "D3", "E9", "B2", "star-0-2", "star-2", "Ax"] {
            assert!(by_name(bad).is_none(), "{bad}");
        }
    }
}
