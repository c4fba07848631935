use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-dimensional linear triangle mesh.
///
/// `elements` is the connectivity table: row `e` lists the three global
/// node numbers of element `e` in counter-clockwise order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriMesh {
    nodes: Vec<[f64; 2]>,
    elements: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn try_new(nodes: Vec<[f64; 2]>, elements: Vec<[usize; 3]>) -> Result<Self> {
        for (e, tri) in elements.iter().enumerate() {
            if tri.iter().any(|&v| v >= nodes.len()) {
                return Err(Error::Parameter(format!(
                    "element {e} references a node outside 0..{}",
                    nodes.len()
                )));
            }
            let [a, b, c] = tri.map(|v| nodes[v]);
            if signed_area(a, b, c) <= 0.0 {
                return Err(Error::Geometry { element: e });
            }
        }
        Ok(Self { nodes, elements })
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Parses the plain-text mesh format: `nodes k elements m`, then `k`
    /// coordinate lines and `m` connectivity lines with 0-based node numbers.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, msg: &str| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg: msg.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty mesh file"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "nodes" || h[2] != "elements" {
            return Err(err(1, "header must read 'nodes <k> elements <m>'"));
        }
        let k: usize = h[1].parse().map_err(|_| err(1, "bad node count"))?;
        let m: usize = h[3].parse().map_err(|_| err(1, "bad element count"))?;
        let mut nodes = Vec::with_capacity(k);
        for _ in 0..k {
            let (no, line) = lines.next().ok_or_else(|| err(0, "missing node line"))?;
            let xy: Vec<f64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err(no, "bad coordinate"))?;
            if xy.len() != 2 {
                return Err(err(no, "node line needs two coordinates"));
            }
            nodes.push([xy[0], xy[1]]);
        }
        let mut elements = Vec::with_capacity(m);
        for _ in 0..m {
            let (no, line) = lines.next().ok_or_else(|| err(0, "missing element line"))?;
            let ids: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err(no, "bad node number"))?;
            if ids.len() != 3 {
                return Err(err(no, "element line needs three node numbers"));
            }
            elements.push([ids[0], ids[1], ids[2]]);
        }
        if let Some((no, _)) = lines.next() {
            return Err(err(no, "trailing content after the last element"));
        }
        Self::try_new(nodes, elements)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "nodes {} elements {}\n",
            self.nodes.len(),
            self.elements.len()
        );
        for [x, y] in &self.nodes {
            out.push_str(&format!("{x:e} {y:e}\n"));
        }
        for [a, b, c] in &self.elements {
            out.push_str(&format!("{a} {b} {c}\n"));
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

pub(crate) fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

/// Structured triangulation of `[0, nx] x [0, ny]`: each unit cell is split
/// along its rising diagonal into two counter-clockwise triangles.
pub fn gen_tri_mesh(nx: usize, ny: usize) -> Result<TriMesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::Parameter(
            "mesh needs at least one cell per axis".into(),
        ));
    }
    let stride = nx + 1;
    let nodes = (0..=ny)
        .flat_map(|j| (0..=nx).map(move |i| [i as f64, j as f64]))
        .collect();
    let mut elements = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let n00 = j * stride + i;
            let n10 = n00 + 1;
            let n01 = n00 + stride;
            let n11 = n01 + 1;
            elements.push([n00, n10, n11]);
            elements.push([n00, n11, n01]);
        }
    }
    TriMesh::try_new(nodes, elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_follow_formula() {
        let m = gen_tri_mesh(1, 1).unwrap();
        assert_eq!((m.n_nodes(), m.elements().len()), (4, 2));
        let m = gen_tri_mesh(2, 3).unwrap();
        assert_eq!((m.n_nodes(), m.elements().len()), (12, 12));
    }

    #[test]
    fn every_triangle_has_half_unit_area() {
        let m = gen_tri_mesh(4, 3).unwrap();
        for tri in m.elements() {
            let [a, b, c] = tri.map(|v| m.nodes()[v]);
            assert_eq!(signed_area(a, b, c), 0.5);
        }
    }

    #[test]
    fn zero_cells_rejected() {
        assert!(gen_tri_mesh(0, 3).is_err());
    }

    #[test]
    fn clockwise_triangle_rejected() {
        let err = TriMesh::try_new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]], vec![[0, 1, 2]]);
        assert!(matches!(err, Err(Error::Geometry { element: 0 })));
    }

    #[test]
    fn text_round_trip() {
        let m = gen_tri_mesh(3, 2).unwrap();
        let back = TriMesh::parse(&m.to_text(), Path::new("m")).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn malformed_text_rejected() {
        assert!(TriMesh::parse("nodes 1 elements 0\n0 0 0\n", Path::new("m")).is_err());
        assert!(TriMesh::parse("points 1 elements 0\n0 0\n", Path::new("m")).is_err());
        assert!(
            TriMesh::parse("nodes 3 elements 1\n0 0\n1 0\n0 1\n0 1 5\n", Path::new("m")).is_err()
        );
    }
}
