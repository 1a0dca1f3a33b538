//! Edge-list text format: a `<vertex_count> <edge_count>` header followed by
//! one 0-based `u v` pair per line. Loops are written `u u`.

use super::{GraphError, Multigraph};

pub fn parse_edge_list(text: &str) -> Result<Multigraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        reason: "missing header".into(),
    })?;
    let [n, m] = parse_pair(line, header)?;
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let [u, v] = parse_pair(line, text)?;
        for endpoint in [u, v] {
            if endpoint >= n {
                return Err(GraphError::EndpointOutOfRange {
                    endpoint,
                    vertex_count: n,
                });
            }
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Malformed {
            line: 1,
            reason: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Multigraph::new(n, edges)
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let malformed = |reason: String| GraphError::Malformed { line, reason };
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(malformed(format!(
            "expected two integers, got {}",
            fields.len()
        )));
    }
    let mut out = [0; 2];
    for (slot, field) in out.iter_mut().zip(&fields) {
        *slot = field
            .parse()
            .map_err(|_| malformed(format!("not a nonnegative integer: {field:?}")))?;
    }
    Ok(out)
}

pub fn serialize(g: &Multigraph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        let c4 = parse_edge_list("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(c4.edges(), &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let l = parse_edge_list("1 1\n0 0").unwrap();
        assert_eq!((l.vertex_count(), l.edges()), (1, &[(0, 0)][..]));
        let iso = parse_edge_list("2 0").unwrap();
        assert_eq!((iso.vertex_count(), iso.edge_count()), (2, 0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_edge_list("").unwrap_err(),
            GraphError::Malformed { .. }
        ));
        assert!(matches!(
            parse_edge_list("3\n0 1").unwrap_err(),
            GraphError::Malformed { .. }
        ));
        assert!(matches!(
            parse_edge_list("2 1\n0 2").unwrap_err(),
            GraphError::EndpointOutOfRange { .. }
        ));
        assert!(matches!(
            parse_edge_list("2 2\n0 1").unwrap_err(),
            GraphError::Malformed { .. }
        ));
        assert!(parse_edge_list("2 1\n0 x").is_err());
    }

    proptest! {
        #[test]
        fn serialize_parse_round_trip(
            n in 1usize..8,
            raw in prop::collection::vec((0usize..8, 0usize..8), 0..12),
        ) {
            let edges = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let g = Multigraph::new(n, edges).unwrap();
            let text = serialize(&g);
            let back = parse_edge_list(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(serialize(&back), text);
        }
    }
}
