use super::{GraphError, Multigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Free,
    Torus,
}

/// Deterministic graph families. Grids number vertices row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// `cycle(1)` is a single loop and `cycle(2)` a doubled edge.
    Cycle(usize),
    Path(usize),
    Complete(usize),
    Grid {
        rows: usize,
        cols: usize,
        boundary: Boundary,
    },
}

impl GraphKind {
    pub fn grid(rows: usize, cols: usize, boundary: Boundary) -> Self {
        GraphKind::Grid {
            rows,
            cols,
            boundary,
        }
    }

    pub fn build(self) -> Result<Multigraph, GraphError> {
        let edges = match self {
            GraphKind::Cycle(n) => {
                require(n >= 1, "cycle needs n >= 1")?;
                (0..n).map(|i| (i, (i + 1) % n)).map(ordered).collect()
            }
            GraphKind::Path(n) => {
                require(n >= 1, "path needs n >= 1")?;
                (1..n).map(|i| (i - 1, i)).collect()
            }
            GraphKind::Complete(n) => {
                require(n >= 1, "complete graph needs n >= 1")?;
                let mut edges = Vec::with_capacity(n * (n - 1) / 2);
                for i in 0..n {
                    for j in i + 1..n {
                        edges.push((i, j));
                    }
                }
                edges
            }
            GraphKind::Grid {
                rows,
                cols,
                boundary,
            } => {
                require(rows >= 1 && cols >= 1, "grid needs rows, cols >= 1")?;
                let torus = boundary == Boundary::Torus;
                if torus {
                    require(rows >= 3 && cols >= 3, "torus needs rows, cols >= 3")?;
                }
                let id = |r: usize, c: usize| r * cols + c;
                let mut edges = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        if c + 1 < cols {
                            edges.push((id(r, c), id(r, c + 1)));
                        } else if torus {
                            edges.push(ordered((id(r, c), id(r, 0))));
                        }
                        if r + 1 < rows {
                            edges.push((id(r, c), id(r + 1, c)));
                        } else if torus {
                            edges.push(ordered((id(r, c), id(0, c))));
                        }
                    }
                }
                edges
            }
        };
        let n = match self {
            GraphKind::Cycle(n) | GraphKind::Path(n) | GraphKind::Complete(n) => n,
            GraphKind::Grid { rows, cols, .. } => rows * cols,
        };
        Multigraph::new(n, edges)
    }
}

fn ordered((a, b): (usize, usize)) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn require(ok: bool, what: &str) -> Result<(), GraphError> {
    if ok {
        Ok(())
    } else {
        Err(GraphError::InvalidSize(what.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let g = GraphKind::grid(4, 4, Boundary::Free).build().unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (16, 24));
        let t = GraphKind::grid(3, 3, Boundary::Torus).build().unwrap();
        assert_eq!((t.vertex_count(), t.edge_count()), (9, 18));
        assert!((0..9).all(|v| t.degree(v) == 4));
        let g = GraphKind::grid(2, 5, Boundary::Free).build().unwrap();
        assert_eq!(g.edge_count(), 2 * 4 + 5);
    }

    #[test]
    fn small_cycles_are_multigraphs() {
        assert_eq!(GraphKind::Cycle(1).build().unwrap().edges(), &[(0, 0)]);
        assert_eq!(
            GraphKind::Cycle(2).build().unwrap().edges(),
            &[(0, 1), (0, 1)]
        );
        let c4 = GraphKind::Cycle(4).build().unwrap();
        assert_eq!(c4.edges(), &[(0, 1), (1, 2), (2, 3), (0, 3)]);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(GraphKind::Cycle(0).build().is_err());
        assert!(GraphKind::grid(2, 4, Boundary::Torus).build().is_err());
        assert!(GraphKind::grid(0, 4, Boundary::Free).build().is_err());
    }
}
